#pragma once

// JSON and plain-text renderings of a cleaning run.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wpcclean/pipeline.hpp"

namespace wpcclean {

// Non-finite D values (empty openings) are written as null.
inline nlohmann::json to_json(const CleanReport& r) {
  using nlohmann::json;
  json d_table = json::array();
  for (const auto& [n, D] : r.d_table) {
    d_table.push_back({{"n", n}, {"D", std::isfinite(D) ? json(D) : json(nullptr)}});
  }
  return {
      {"source_id", r.source_id},
      {"total", r.total},
      {"counts",
       {{"normal", r.counts.normal},
        {"type1", r.counts.type1},
        {"type2", r.counts.type2},
        {"type3", r.counts.type3}}},
      {"R", r.R},
      {"R_stages", {{"preclean", r.R_preclean}, {"extraction", r.R_extraction}, {"marking", r.R_marking}}},
      {"times_s",
       {{"preclean", r.times.preclean},
        {"extraction", r.times.extraction},
        {"marking", r.times.marking},
        {"total", r.times.total}}},
      {"n_best", r.n_best},
      {"d_table", std::move(d_table)},
  };
}

// n -> D rows followed by the chosen n.
inline std::string sweep_table(const CleanReport& r) {
  std::ostringstream out;
  out << "n\tD\n";
  for (const auto& [n, D] : r.d_table) {
    char buf[64];
    if (std::isfinite(D)) {
      std::snprintf(buf, sizeof(buf), "%.6g", D);
    } else {
      std::snprintf(buf, sizeof(buf), "inf");
    }
    out << n << '\t' << buf << '\n';
  }
  out << "n_best\t" << r.n_best << '\n';
  return out.str();
}

inline std::string summary(const CleanReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%zu points: %zu normal, %zu type1, %zu type2, %zu type3; R=%.2f%% n_best=%d "
                "T=%.3fs",
                r.total, r.counts.normal, r.counts.type1, r.counts.type2, r.counts.type3, r.R,
                r.n_best, r.times.total);
  return buf;
}

}  // namespace wpcclean
