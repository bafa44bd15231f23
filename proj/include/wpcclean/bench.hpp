#pragma once

// Scoring against ground truth and side-by-side comparison of the image
// cleaner with the LOF and k-means baselines.

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <future>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wpcclean/baselines.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/pipeline.hpp"
#include "wpcclean/scada_io.hpp"

namespace wpcclean {

// Counts for one abnormal type. `detected` counts truth points of the type
// that were flagged abnormal at all; `exact` those given this very type.
struct TypeMetrics {
  std::size_t truth = 0;
  std::size_t predicted = 0;
  std::size_t exact = 0;
  std::size_t detected = 0;

  double precision() const { return predicted ? double(exact) / double(predicted) : 1.0; }
  double recall() const { return truth ? double(detected) / double(truth) : 1.0; }
  double typed_recall() const { return truth ? double(exact) / double(truth) : 1.0; }
};

// Prediction columns of the confusion matrix: the five labels, then
// "flagged" for cleaners that only say abnormal without a type.
inline constexpr std::size_t kFlaggedColumn = 5;

struct Metrics {
  std::size_t total = 0;
  std::array<std::array<std::size_t, 6>, 5> confusion{};  // [truth label][prediction]
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;              // abnormal is positive
  std::array<TypeMetrics, 3> types{};                      // Type1, Type2, Type3
  bool typed = true;  // false when predictions carried no type

  double precision() const { return tp + fp ? double(tp) / double(tp + fp) : 1.0; }
  double recall() const { return tp + fn ? double(tp) / double(tp + fn) : 1.0; }
  double false_flag_rate() const { return fp + tn ? double(fp) / double(fp + tn) : 0.0; }
  double R() const { return total ? 100.0 * double(tp + fp) / double(total) : 0.0; }
  const TypeMetrics& type(Label l) const {
    if (!is_abnormal(l)) throw Error(ErrorCode::InvalidConfig, "type metrics exist for Type1..Type3");
    return types[std::size_t(l) - std::size_t(Label::Type1)];
  }
};

namespace detail {

// pred_col(i) is a confusion column; abnormal predictions are columns 2..5.
template <class PredCol>
Metrics score(std::size_t n, std::span<const Label> truth, PredCol pred_col, bool typed) {
  Metrics m;
  m.total = n;
  m.typed = typed;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t col = pred_col(i);
    const Label t = truth[i];
    ++m.confusion[std::size_t(t)][col];
    const bool pred_ab = col >= std::size_t(Label::Type1);
    const bool true_ab = is_abnormal(t);
    if (pred_ab && true_ab) ++m.tp;
    else if (pred_ab) ++m.fp;
    else if (true_ab) ++m.fn;
    else ++m.tn;
    if (true_ab) {
      auto& tm = m.types[std::size_t(t) - std::size_t(Label::Type1)];
      ++tm.truth;
      if (pred_ab) ++tm.detected;
      if (col == std::size_t(t)) ++tm.exact;
    }
    if (typed && pred_ab && col < kFlaggedColumn) {
      ++m.types[col - std::size_t(Label::Type1)].predicted;
    }
  }
  return m;
}

}  // namespace detail

inline Metrics evaluate(std::span<const Label> pred, std::span<const Label> truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and truth differ in length");
  }
  return detail::score(pred.size(), truth, [&](std::size_t i) { return std::size_t(pred[i]); }, true);
}

inline Metrics evaluate(const std::vector<bool>& flags, std::span<const Label> truth) {
  if (flags.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "flags and truth differ in length");
  }
  return detail::score(
      flags.size(), truth,
      [&](std::size_t i) { return flags[i] ? kFlaggedColumn : std::size_t(Label::Normal); }, false);
}

inline std::vector<Label> labels_of(const Dataset& ds) {
  std::vector<Label> out;
  out.reserve(ds.size());
  for (const auto& p : ds.points) out.push_back(p.label);
  return out;
}

// Ground truth from an extra column holding label names.
inline std::vector<Label> truth_column(const Dataset& ds, std::string_view column) {
  const auto idx = ds.extra_index(column);
  if (!idx) throw Error(ErrorCode::MissingColumn, "no column named '" + std::string(column) + "'");
  std::vector<Label> out;
  out.reserve(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto l = parse_label(ds.extra_fields[r][*idx]);
    if (!l || *l == Label::Unlabeled) {
      throw Error(ErrorCode::NonNumericField,
                  "bad label '" + ds.extra_fields[r][*idx] + "' in column " + std::string(column), r + 1);
    }
    out.push_back(*l);
  }
  return out;
}

// Labels from one column of a CSV (e.g. another cleaner's output). Accepts
// label names, or 0/1 where 1 is read as a generic abnormal (Type2).
inline std::vector<Label> read_labels(std::istream& in, std::string_view column = "label") {
  std::string line;
  if (!detail::getline_crlf(in, line)) throw Error(ErrorCode::MissingColumn, "no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto head = detail::split_csv(line);
  std::optional<std::size_t> col;
  for (std::size_t c = 0; c < head.size() && !col; ++c) {
    if (detail::lower(detail::unquote(head[c])) == detail::lower(column)) col = c;
  }
  if (!col) throw Error(ErrorCode::MissingColumn, "missing column '" + std::string(column) + "'");
  std::vector<Label> out;
  std::size_t row = 0;
  while (detail::getline_crlf(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_csv(line);
    const std::string cell = fields.size() > *col ? detail::unquote(fields[*col]) : std::string();
    auto l = parse_label(cell);
    if (cell == "0") l = Label::Normal;
    if (cell == "1") l = Label::Type2;
    if (!l || *l == Label::Unlabeled) {
      throw Error(ErrorCode::NonNumericField, "row " + std::to_string(row) + ": bad label '" + cell + "'", row);
    }
    out.push_back(*l);
  }
  return out;
}

enum class Method { Image, Lof, KMeans };

constexpr std::string_view method_name(Method m) {
  switch (m) {
    case Method::Image: return "image";
    case Method::Lof: return "lof";
    case Method::KMeans: return "kmeans";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::Image, Method::Lof, Method::KMeans}) {
    if (detail::lower(detail::trim(s)) == method_name(m)) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(s) + "'");
}

// Comma-separated method list, e.g. "image,lof,kmeans".
inline std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    out.push_back(parse_method(list.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

struct MethodRow {
  std::string name;
  std::vector<Label> labels;  // typed labels for the image method
  std::vector<bool> flags;    // one per point for every method
  double R = 0;               // percent flagged
  std::optional<StageTimes> times;  // image: all stages; others: total only
  std::optional<Metrics> metrics;   // when truth is known
};

struct CompareConfig {
  PipelineConfig pipeline;
  BaselineConfig baseline;
  bool parallel = false;  // run methods concurrently; timing is then dropped
  // Precomputed labelings (e.g. another cleaner's output) shown as extra rows.
  std::vector<std::pair<std::string, std::vector<Label>>> external;
};

struct CompareReport {
  std::string source_id;
  std::size_t total = 0;
  bool timed = true;
  bool has_truth = false;
  std::vector<MethodRow> rows;
};

namespace detail {

inline MethodRow run_method(const Dataset& input, Method m, const CompareConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  MethodRow row;
  row.name = std::string(method_name(m));
  if (m == Method::Image) {
    auto result = run(input, cfg.pipeline);
    row.labels = labels_of(result.labeled);
    row.times = result.report.times;
    for (Label l : row.labels) row.flags.push_back(is_abnormal(l));
    return row;
  }
  const auto t0 = Clock::now();
  row.flags = m == Method::Lof ? lof_clean(input, cfg.baseline) : kmeans_clean(input, cfg.baseline);
  StageTimes t;
  t.total = std::chrono::duration<double>(Clock::now() - t0).count();
  row.times = t;
  return row;
}

inline double flagged_percent(const std::vector<bool>& flags) {
  std::size_t n = 0;
  for (bool f : flags) n += f;
  return flags.empty() ? 0.0 : 100.0 * double(n) / double(flags.size());
}

}  // namespace detail

inline CompareReport compare(const Dataset& dataset, std::span<const Method> methods,
                             const CompareConfig& cfg = {},
                             std::optional<std::span<const Label>> truth = std::nullopt) {
  if (truth && truth->size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "truth and dataset differ in length");
  }
  Dataset input = dataset;
  for (auto& p : input.points) p.label = Label::Unlabeled;

  CompareReport report;
  report.source_id = dataset.source_id;
  report.total = dataset.size();
  report.timed = !cfg.parallel;
  report.has_truth = truth.has_value();

  if (cfg.parallel) {
    std::vector<std::future<MethodRow>> jobs;
    for (Method m : methods) {
      jobs.push_back(std::async(std::launch::async, [&input, &cfg, m] {
        return detail::run_method(input, m, cfg);
      }));
    }
    for (auto& j : jobs) report.rows.push_back(j.get());
  } else {
    for (Method m : methods) report.rows.push_back(detail::run_method(input, m, cfg));
  }
  for (const auto& [name, labels] : cfg.external) {
    if (labels.size() != dataset.size()) {
      throw Error(ErrorCode::LengthMismatch, "labels for '" + name + "' differ in length");
    }
    MethodRow row;
    row.name = name;
    row.labels = labels;
    for (Label l : labels) row.flags.push_back(is_abnormal(l));
    report.rows.push_back(std::move(row));
  }

  for (auto& row : report.rows) {
    if (!report.timed) row.times.reset();
    row.R = detail::flagged_percent(row.flags);
    if (truth) {
      row.metrics = row.labels.empty() ? evaluate(row.flags, *truth) : evaluate(row.labels, *truth);
    }
  }
  return report;
}

namespace detail {

inline std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

inline std::vector<std::vector<std::string>> report_cells(const CompareReport& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Method", "R (%)"};
  if (r.timed) {
    for (const char* h : {"Pre-cleaning T (s)", "Normal Data Extraction T (s)", "Data Marking T (s)",
                          "Total T (s)"}) {
      head.emplace_back(h);
    }
  }
  if (r.has_truth) {
    for (const char* h : {"Recall", "Precision", "False flag rate", "Type1 recall", "Type2 recall",
                          "Type3 recall"}) {
      head.emplace_back(h);
    }
  }
  rows.push_back(std::move(head));
  for (const auto& m : r.rows) {
    std::vector<std::string> cells{m.name, fixed(m.R, 2)};
    if (r.timed) {
      const bool staged = m.name == method_name(Method::Image);
      if (m.times && staged) {
        for (double t : {m.times->preclean, m.times->extraction, m.times->marking, m.times->total}) {
          cells.push_back(fixed(t, 3));
        }
      } else {
        cells.insert(cells.end(), 3, "-");
        cells.push_back(m.times ? fixed(m.times->total, 3) : "-");
      }
    }
    if (r.has_truth && m.metrics) {
      const auto& x = *m.metrics;
      cells.push_back(fixed(x.recall(), 4));
      cells.push_back(fixed(x.precision(), 4));
      cells.push_back(fixed(x.false_flag_rate(), 4));
      for (Label l : {Label::Type1, Label::Type2, Label::Type3}) cells.push_back(fixed(x.type(l).recall(), 4));
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace detail

inline std::string to_markdown(const CompareReport& r) {
  const auto rows = detail::report_cells(r);
  std::ostringstream out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << '|';
    for (const auto& c : rows[i]) out << ' ' << c << " |";
    out << '\n';
    if (i == 0) {
      out << '|';
      for (std::size_t k = 0; k < rows[0].size(); ++k) out << (k ? " ---: |" : " --- |");
      out << '\n';
    }
  }
  return out.str();
}

inline std::string to_csv(const CompareReport& r) {
  std::ostringstream out;
  for (const auto& row : detail::report_cells(r)) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      const bool quote = row[k].find_first_of(",\"") != std::string::npos;
      if (!quote) {
        out << row[k];
        continue;
      }
      out << '"';
      for (char c : row[k]) out << (c == '"' ? "\"\"" : std::string(1, c));
      out << '"';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace wpcclean
