#pragma once

// SCADA record types plus CSV and turbine-spec (key=value) readers/writers.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "wpcclean/error.hpp"

namespace wpcclean {

enum class Label { Unlabeled, Normal, Type1, Type2, Type3 };

constexpr std::string_view label_name(Label l) {
  switch (l) {
    case Label::Unlabeled: return "unlabeled";
    case Label::Normal: return "normal";
    case Label::Type1: return "type1";
    case Label::Type2: return "type2";
    case Label::Type3: return "type3";
  }
  return "unlabeled";
}

inline std::optional<Label> parse_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Label l : {Label::Normal, Label::Type1, Label::Type2, Label::Type3, Label::Unlabeled}) {
    if (lower == label_name(l)) return l;
  }
  return std::nullopt;
}

constexpr bool is_abnormal(Label l) {
  return l == Label::Type1 || l == Label::Type2 || l == Label::Type3;
}

struct ScadaPoint {
  std::string timestamp;
  double v = 0.0;  // m/s
  double P = 0.0;  // kW
  Label label = Label::Unlabeled;
};

struct TurbineSpec {
  double cut_in = 3.0;        // m/s
  double rated_speed = 13.0;  // m/s
  double cut_out = 25.0;      // m/s
  double rated_power = 1500;  // kW
};

// Every violated ordering/positivity constraint, empty when the spec is valid.
inline std::vector<std::string> validate_spec(const TurbineSpec& s) {
  std::vector<std::string> out;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(s.cut_in) || !finite(s.rated_speed) || !finite(s.cut_out) ||
      !finite(s.rated_power)) {
    out.emplace_back("all fields finite");
  }
  if (!(s.cut_in > 0)) out.emplace_back("0 < cut_in");
  if (!(s.cut_in < s.rated_speed)) out.emplace_back("cut_in < rated_speed");
  if (!(s.rated_speed < s.cut_out)) out.emplace_back("rated_speed < cut_out");
  if (!(s.rated_power > 0)) out.emplace_back("rated_power > 0");
  return out;
}

struct Dataset {
  std::vector<ScadaPoint> points;
  TurbineSpec spec;
  std::string source_id;

  // Original header, in file order. Columns other than timestamp/v/P/label
  // are carried verbatim in `extra_fields`, one vector per row.
  std::vector<std::string> header{"timestamp", "v", "P"};
  std::vector<std::vector<std::string>> extra_fields;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  // Index of an extra column by case-insensitive name.
  std::optional<std::size_t> extra_index(std::string_view name) const;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits one CSV record into raw field slices. Quoted fields keep their quotes
// so extra columns can be echoed verbatim.
inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  fields.push_back(line.substr(start));
  return fields;
}

inline std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    s = s.substr(1, s.size() - 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
      out.push_back(s[i]);
      if (s[i] == '"' && i + 1 < s.size() && s[i + 1] == '"') ++i;
    }
    return out;
  }
  return std::string(s);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline bool getline_crlf(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace detail

inline std::optional<std::size_t> Dataset::extra_index(std::string_view name) const {
  const std::string want = detail::lower(name);
  std::size_t extra = 0;
  for (const auto& h : header) {
    const std::string lh = detail::lower(detail::unquote(h));
    if (lh == "timestamp" || lh == "v" || lh == "p" || lh == "label") continue;
    if (lh == want) return extra;
    ++extra;
  }
  return std::nullopt;
}

inline Dataset parse_dataset(std::istream& in, const TurbineSpec& spec,
                             std::string source_id = {}) {
  Dataset ds;
  ds.spec = spec;
  ds.source_id = std::move(source_id);
  ds.header.clear();

  std::string line;
  if (!detail::getline_crlf(in, line)) {
    throw Error(ErrorCode::MissingColumn, "no header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  enum class Role { Timestamp, Speed, Power, Label, Extra };
  std::vector<Role> roles;
  std::optional<std::size_t> ts_col, v_col, p_col;
  for (auto field : detail::split_csv(line)) {
    const std::string name = detail::lower(detail::unquote(field));
    ds.header.emplace_back(detail::trim(field));
    const std::size_t idx = roles.size();
    if (name == "timestamp" && !ts_col) {
      ts_col = idx;
      roles.push_back(Role::Timestamp);
    } else if (name == "v" && !v_col) {
      v_col = idx;
      roles.push_back(Role::Speed);
    } else if (name == "p" && !p_col) {
      p_col = idx;
      roles.push_back(Role::Power);
    } else if (name == "label") {
      roles.push_back(Role::Label);
    } else {
      roles.push_back(Role::Extra);
    }
  }
  if (!ts_col) throw Error(ErrorCode::MissingColumn, "missing column 'timestamp'");
  if (!v_col) throw Error(ErrorCode::MissingColumn, "missing column 'v'");
  if (!p_col) throw Error(ErrorCode::MissingColumn, "missing column 'P'");

  const bool has_extras = std::find(roles.begin(), roles.end(), Role::Extra) != roles.end();
  std::size_t row = 0;
  while (detail::getline_crlf(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    auto fields = detail::split_csv(line);
    if (fields.size() < roles.size()) {
      throw Error(ErrorCode::NonNumericField,
                  "row " + std::to_string(row) + ": expected " + std::to_string(roles.size()) +
                      " fields, got " + std::to_string(fields.size()),
                  row);
    }
    ScadaPoint p;
    std::vector<std::string> extras;
    for (std::size_t c = 0; c < roles.size(); ++c) {
      switch (roles[c]) {
        case Role::Timestamp: p.timestamp = detail::unquote(fields[c]); break;
        case Role::Speed:
        case Role::Power: {
          auto value = detail::parse_double(detail::unquote(fields[c]));
          const bool speed = roles[c] == Role::Speed;
          if (!value || !std::isfinite(*value) || (speed && *value < 0)) {
            throw Error(ErrorCode::NonNumericField,
                        "row " + std::to_string(row) + ": bad value '" +
                            std::string(detail::trim(fields[c])) + "' in column " +
                            (speed ? "v" : "P"),
                        row);
          }
          (speed ? p.v : p.P) = *value;
          break;
        }
        case Role::Label: break;
        case Role::Extra: extras.emplace_back(fields[c]); break;
      }
    }
    ds.points.push_back(std::move(p));
    if (has_extras) ds.extra_fields.push_back(std::move(extras));
  }
  if (ds.points.empty()) throw Error(ErrorCode::EmptyDataset, "no data rows");
  return ds;
}

inline Dataset parse_dataset(std::string_view csv_text, const TurbineSpec& spec,
                             std::string source_id = {}) {
  std::istringstream in{std::string(csv_text)};
  return parse_dataset(in, spec, std::move(source_id));
}

namespace detail {

inline std::size_t write_csv(const Dataset& ds, std::ostream& out, bool with_labels) {
  enum class Role { Timestamp, Speed, Power, Label, Extra };
  std::vector<Role> roles;
  bool seen_ts = false, seen_v = false, seen_p = false, seen_label = false;
  for (const auto& h : ds.header) {
    const std::string name = detail::lower(detail::unquote(h));
    if (name == "timestamp" && !seen_ts) {
      seen_ts = true;
      roles.push_back(Role::Timestamp);
    } else if (name == "v" && !seen_v) {
      seen_v = true;
      roles.push_back(Role::Speed);
    } else if (name == "p" && !seen_p) {
      seen_p = true;
      roles.push_back(Role::Power);
    } else if (name == "label") {
      seen_label = true;
      roles.push_back(Role::Label);
    } else {
      roles.push_back(Role::Extra);
    }
  }
  std::vector<std::string> header = ds.header;
  if (with_labels && !seen_label) {
    header.emplace_back("label");
    roles.push_back(Role::Label);
  }

  bool first = true;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (roles[c] == Role::Label && !with_labels) continue;
    if (!first) out << ',';
    first = false;
    out << header[c];
  }
  out << '\n';

  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    const auto& p = ds.points[i];
    std::size_t extra = 0;
    bool first_field = true;
    for (std::size_t c = 0; c < roles.size(); ++c) {
      if (roles[c] == Role::Label && !with_labels) continue;
      if (!first_field) out << ',';
      first_field = false;
      switch (roles[c]) {
        case Role::Timestamp: out << p.timestamp; break;
        case Role::Speed: out << detail::format_double(p.v); break;
        case Role::Power: out << detail::format_double(p.P); break;
        case Role::Label: out << label_name(p.label); break;
        case Role::Extra:
          if (i < ds.extra_fields.size() && extra < ds.extra_fields[i].size()) {
            out << ds.extra_fields[i][extra];
          }
          ++extra;
          break;
      }
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing CSV");
  return ds.points.size();
}

}  // namespace detail

// Writes the input columns with a `label` column (replacing one that was
// already present). Returns the number of data rows written.
inline std::size_t write_labeled(const Dataset& ds, std::ostream& out) {
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    if (ds.points[i].label == Label::Unlabeled) {
      throw Error(ErrorCode::UnlabeledPoint, "row " + std::to_string(i + 1) + " is unlabeled");
    }
  }
  return detail::write_csv(ds, out, true);
}

// Same layout without any label column.
inline std::size_t write_dataset(const Dataset& ds, std::ostream& out) {
  return detail::write_csv(ds, out, false);
}

// Appends a column whose per-row values are `values`.
inline void add_extra_column(Dataset& ds, const std::string& name,
                             const std::vector<std::string>& values) {
  if (values.size() != ds.points.size()) {
    throw Error(ErrorCode::LengthMismatch, "column '" + name + "' has the wrong length");
  }
  ds.header.push_back(name);
  ds.extra_fields.resize(ds.points.size());
  for (std::size_t i = 0; i < values.size(); ++i) ds.extra_fields[i].push_back(values[i]);
}

// Reads `cut_in=3.0` style lines; `#` starts a comment. Unknown keys and
// missing keys are errors, as is a spec that fails validate_spec.
inline TurbineSpec parse_spec_config(std::istream& in) {
  TurbineSpec spec;
  bool seen[4] = {false, false, false, false};
  std::string line;
  std::size_t lineno = 0;
  while (detail::getline_crlf(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = detail::lower(detail::trim(view.substr(0, eq)));
    const auto value = detail::parse_double(view.substr(eq + 1));
    if (!value) {
      throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": bad number");
    }
    if (key == "cut_in") {
      spec.cut_in = *value;
      seen[0] = true;
    } else if (key == "rated_speed") {
      spec.rated_speed = *value;
      seen[1] = true;
    } else if (key == "cut_out") {
      spec.cut_out = *value;
      seen[2] = true;
    } else if (key == "rated_power") {
      spec.rated_power = *value;
      seen[3] = true;
    } else {
      throw Error(ErrorCode::InvalidSpec, "line " + std::to_string(lineno) + ": unknown key '" +
                                               key + "'");
    }
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
    throw Error(ErrorCode::InvalidSpec,
                "spec needs cut_in, rated_speed, cut_out and rated_power");
  }
  if (auto violations = validate_spec(spec); !violations.empty()) {
    throw Error(ErrorCode::InvalidSpec, "violated: " + violations.front());
  }
  return spec;
}

}  // namespace wpcclean
