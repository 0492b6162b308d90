/*
 * State files, report serialization and parameter sweeps.
 *
 * State file (schema_version "1"), either explicit moments
 *   {"schema_version": "1", "n": 1, "mean": [0, 0], "cov": [[1, 0], [0, 1]]}
 * or a builder
 *   {"schema_version": "1", "builder": {"kind": "thermal", "params": {"nu": [3]}}}
 * Builder kinds: vacuum {modes}, thermal {nu: [..]}, coherent {mean: [..]},
 * squeezed {r}, two_mode_squeezed {r}.
 */

#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gaussbound/error.hpp"
#include "gaussbound/gaussian_state.hpp"
#include "gaussbound/report.hpp"

namespace gaussbound::io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Malformed input or usage (CLI exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fixed9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

// ---------------------------------------------------------------------------
// json helpers

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << column << ": parse error: " << e.what();
    throw UsageError(msg.str());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

namespace detail {

inline const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw UsageError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw UsageError(where + ": expected a number");
  return v.get<double>();
}

inline Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw UsageError(where + ": expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

inline Matrix matrix_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw UsageError(where + ": expected a non-empty nested array");
  const std::size_t rows = v.size();
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    const Vector row = vector_of(v[i], row_where);
    if (static_cast<std::size_t>(row.size()) != rows) {
      throw UsageError(row_where + ": expected " + std::to_string(rows) + " entries");
    }
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

inline GaussianState from_builder(const json& b) {
  const std::string where = "builder";
  const json& kind_j = require(b, "kind", where);
  if (!kind_j.is_string()) throw UsageError("builder.kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  const json params = b.contains("params") ? b.at("params") : json::object();
  const std::string pw = "builder.params";
  if (kind == "vacuum") {
    std::size_t modes = 1;
    if (params.contains("modes")) {
      const double m = number(params.at("modes"), pw + ".modes");
      if (!(m >= 1.0) || m != static_cast<double>(static_cast<std::size_t>(m))) {
        throw UsageError(pw + ".modes must be a positive integer");
      }
      modes = static_cast<std::size_t>(m);
    }
    return vacuum(modes);
  }
  if (kind == "thermal") {
    const Vector nu = vector_of(require(params, "nu", pw), pw + ".nu");
    return thermal(std::vector<double>(nu.data(), nu.data() + nu.size()));
  }
  if (kind == "coherent") return coherent(vector_of(require(params, "mean", pw), pw + ".mean"));
  if (kind == "squeezed") return squeezed(number(require(params, "r", pw), pw + ".r"));
  if (kind == "two_mode_squeezed") {
    return two_mode_squeezed(number(require(params, "r", pw), pw + ".r"));
  }
  throw UsageError("unknown builder kind '" + kind +
                   "' (expected vacuum, thermal, coherent, squeezed or two_mode_squeezed)");
}

}  // namespace detail

/// Moments as written in the document, before any physicality check.
struct RawState {
  Vector mean;
  Matrix cov;
};

/// Structure-checks a state document. Builders are expanded here, so an
/// unphysical builder parameter raises gaussbound::Error instead.
inline RawState parse_state_document(const json& doc) {
  if (!doc.is_object()) throw UsageError("state document must be a JSON object");
  const json& version = detail::require(doc, "schema_version", "state");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    throw UsageError(std::string("unsupported schema_version (expected \"") + kSchemaVersion + "\")");
  }
  const bool has_builder = doc.contains("builder");
  const bool has_moments = doc.contains("mean") || doc.contains("cov");
  if (has_builder == has_moments) {
    throw UsageError("state needs exactly one of (mean + cov) or builder");
  }
  RawState raw;
  if (has_builder) {
    GaussianState st = detail::from_builder(doc.at("builder"));
    raw = {st.mean(), st.cov().matrix()};
  } else {
    raw.mean = detail::vector_of(detail::require(doc, "mean", "state"), "mean");
    raw.cov = detail::matrix_of(detail::require(doc, "cov", "state"), "cov");
    if (raw.cov.rows() % 2 != 0) throw UsageError("cov must be 2n x 2n");
    if (raw.mean.size() != raw.cov.rows()) {
      throw UsageError("mean has length " + std::to_string(raw.mean.size()) + " but cov is " +
                       std::to_string(raw.cov.rows()) + "x" + std::to_string(raw.cov.rows()));
    }
  }
  if (doc.contains("n")) {
    const double n = detail::number(doc.at("n"), "n");
    if (n * 2.0 != static_cast<double>(raw.cov.rows())) {
      throw UsageError("n = " + doc.at("n").dump() + " does not match a " +
                       std::to_string(raw.cov.rows()) + "x" + std::to_string(raw.cov.rows()) +
                       " covariance");
    }
  }
  return raw;
}

inline GaussianState state_from_json(const json& doc) {
  RawState raw = parse_state_document(doc);
  return GaussianState(std::move(raw.mean), raw.cov);
}

inline json state_to_json(const GaussianState& st) {
  return json{{"schema_version", kSchemaVersion},
              {"n", st.modes()},
              {"mean", detail::to_json(st.mean())},
              {"cov", detail::to_json(st.cov().matrix())}};
}

inline GaussianState load_state(const std::string& path) {
  return state_from_json(read_json_file(path));
}

inline void save_state(const std::string& path, const GaussianState& st) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << state_to_json(st).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// reports

inline json report_to_json(const BoundReport& r) {
  json out{{"copies", r.copies}, {"modes", r.modes}};
  if (r.chernoff) {
    out["chernoff"] = {{"s_star", r.chernoff->s_star},
                       {"value", r.chernoff->value},
                       {"log_value", r.chernoff->log_value},
                       {"kappa", r.chernoff->kappa},
                       {"clamped_endpoint", r.chernoff->clamped_endpoint}};
  }
  if (r.bhattacharyya) {
    out["bhattacharyya"] = {{"value", r.bhattacharyya->value},
                            {"log_value", r.bhattacharyya->log_value}};
  }
  const auto spectral = [](const SpectralBound& b) {
    return json{{"s_star", b.s_star},
                {"value", b.value},
                {"log_value", b.log_value},
                {"clamped_endpoint", b.clamped_endpoint}};
  };
  if (r.minkowski) out["minkowski"] = spectral(*r.minkowski);
  if (r.young) out["young"] = spectral(*r.young);
  if (r.fidelity) {
    json f{{"f", r.fidelity->f}, {"f_plus", r.fidelity->f_plus}};
    if (r.fidelity->f_minus) f["f_minus"] = *r.fidelity->f_minus;
    out["fidelity"] = f;
  }
  if (r.helstrom) out["helstrom"] = *r.helstrom;
  return out;
}

/// Long-form CSV: bound,s_star,value (s_star empty where it does not apply).
inline std::string report_to_csv(const BoundReport& r) {
  std::ostringstream out;
  out << "bound,s_star,value\n";
  const auto row = [&out](const char* name, const std::string& s, double v) {
    out << name << ',' << s << ',' << fixed9(v) << '\n';
  };
  if (r.chernoff) row("chernoff", fixed9(r.chernoff->s_star), r.chernoff->value);
  if (r.chernoff) row("kappa", "", r.chernoff->kappa);
  if (r.bhattacharyya) row("bhattacharyya", fixed9(0.5), r.bhattacharyya->value);
  if (r.minkowski) row("minkowski", fixed9(r.minkowski->s_star), r.minkowski->value);
  if (r.young) row("young", fixed9(r.young->s_star), r.young->value);
  if (r.fidelity) {
    row("fidelity", "", r.fidelity->f);
    if (r.fidelity->f_minus) row("f_minus", "", *r.fidelity->f_minus);
    row("f_plus", "", r.fidelity->f_plus);
  }
  if (r.helstrom) row("helstrom", "", *r.helstrom);
  return out.str();
}

inline std::string report_to_table(const BoundReport& r) {
  std::ostringstream out;
  const auto line = [&out](const char* name, double v, const std::string& extra = {}) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-15s", name);
    out << buf << fixed9(v);
    if (!extra.empty()) out << "  (" << extra << ")";
    out << '\n';
  };
  out << "copies         " << r.copies << "\nmodes          " << r.modes << '\n';
  if (r.chernoff) {
    line("chernoff", r.chernoff->value,
         "s* = " + fixed9(r.chernoff->s_star) + ", kappa = " + fixed9(r.chernoff->kappa));
  }
  if (r.bhattacharyya) line("bhattacharyya", r.bhattacharyya->value);
  if (r.minkowski) line("minkowski", r.minkowski->value, "s* = " + fixed9(r.minkowski->s_star));
  if (r.young) line("young", r.young->value, "s* = " + fixed9(r.young->s_star));
  if (r.fidelity) {
    line("fidelity", r.fidelity->f);
    if (r.fidelity->f_minus) line("f_minus", *r.fidelity->f_minus);
    line("f_plus", r.fidelity->f_plus);
  }
  if (r.helstrom) line("helstrom", *r.helstrom);
  return out.str();
}

/// "qc,mink,young,fid,bhatta" -> selection.
inline BoundSelection parse_bound_list(const std::string& list) {
  BoundSelection sel{false, false, false, false, false};
  std::stringstream ss(list);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item == "qc") sel.chernoff = true;
    else if (item == "mink") sel.minkowski = true;
    else if (item == "young") sel.young = true;
    else if (item == "fid") sel.fidelity = true;
    else if (item == "bhatta") sel.bhattacharyya = true;
    else throw UsageError("unknown bound '" + item + "' (expected qc, mink, young, fid, bhatta)");
    any = true;
  }
  if (!any) throw UsageError("empty bound list");
  return sel;
}

// ---------------------------------------------------------------------------
// sweeps

struct SweepParameter {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

struct SweepFamily {
  std::string parameter;
  std::function<std::pair<GaussianState, GaussianState>(double)> make;
};

inline const std::map<std::string, SweepFamily>& sweep_families() {
  static const std::map<std::string, SweepFamily> families{
      {"vacuum_vs_thermal",
       {"beta", [](double beta) { return std::make_pair(vacuum(1), thermal({beta})); }}},
      {"vacuum_vs_coherent",
       {"d",
        [](double d) {
          Vector mean(2);
          mean << d, 0.0;
          return std::make_pair(vacuum(1), coherent(mean));
        }}},
      {"vacuum_vs_squeezed",
       {"r", [](double r) { return std::make_pair(vacuum(1), squeezed(r)); }}},
  };
  return families;
}

/// Columns Y1, M1, PQC1, F_plus, F_minus are selected through `bounds`
/// (young, minkowski, chernoff, fidelity); helstrom is appended with `oracle`.
struct SweepSpec {
  std::string family;
  SweepParameter parameter;
  int copies = 1;
  BoundSelection bounds{true, true, true, true, false};
  bool oracle = false;
  std::optional<std::string> output;
};

inline std::string family_list() {
  std::string names;
  for (const auto& [name, fam] : sweep_families()) names += (names.empty() ? "" : ", ") + name;
  return names;
}

inline SweepSpec sweep_spec_from_json(const json& doc) {
  if (!doc.is_object()) throw UsageError("sweep spec must be a JSON object");
  SweepSpec spec;
  const json& fam = detail::require(doc, "family", "sweep");
  if (!fam.is_string()) throw UsageError("sweep.family must be a string");
  spec.family = fam.get<std::string>();
  const auto it = sweep_families().find(spec.family);
  if (it == sweep_families().end()) {
    throw UsageError("unknown family '" + spec.family + "'; available families: " + family_list());
  }
  const json& p = detail::require(doc, "parameter", "sweep");
  spec.parameter.name = p.contains("name") && p.at("name").is_string()
                            ? p.at("name").get<std::string>()
                            : it->second.parameter;
  if (spec.parameter.name != it->second.parameter) {
    throw UsageError("family " + spec.family + " sweeps '" + it->second.parameter + "', not '" +
                     spec.parameter.name + "'");
  }
  spec.parameter.start = detail::number(detail::require(p, "start", "parameter"), "parameter.start");
  spec.parameter.stop = detail::number(detail::require(p, "stop", "parameter"), "parameter.stop");
  const double steps = detail::number(detail::require(p, "steps", "parameter"), "parameter.steps");
  if (!(steps >= 2.0) || steps != static_cast<double>(static_cast<int>(steps))) {
    throw UsageError("parameter.steps must be an integer >= 2");
  }
  spec.parameter.steps = static_cast<int>(steps);
  if (!(spec.parameter.start < spec.parameter.stop)) {
    throw UsageError("parameter.start must be below parameter.stop");
  }
  if (doc.contains("copies")) {
    const double c = detail::number(doc.at("copies"), "copies");
    if (!(c >= 1.0) || c != static_cast<double>(static_cast<int>(c))) {
      throw UsageError("copies must be a positive integer");
    }
    spec.copies = static_cast<int>(c);
  }
  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    std::string list;
    if (b.is_string()) {
      list = b.get<std::string>();
    } else if (b.is_array()) {
      for (const auto& item : b) {
        if (!item.is_string()) throw UsageError("bounds entries must be strings");
        list += (list.empty() ? "" : ",") + item.get<std::string>();
      }
    } else {
      throw UsageError("bounds must be a string or an array of strings");
    }
    spec.bounds = parse_bound_list(list);
    spec.bounds.bhattacharyya = false;
  }
  if (doc.contains("oracle")) {
    if (!doc.at("oracle").is_boolean()) throw UsageError("oracle must be true or false");
    spec.oracle = doc.at("oracle").get<bool>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw UsageError("output must be a path string");
    spec.output = doc.at("output").get<std::string>();
  }
  return spec;
}

inline std::vector<double> sweep_values(const SweepParameter& p) {
  std::vector<double> out(static_cast<std::size_t>(p.steps));
  const double step = (p.stop - p.start) / static_cast<double>(p.steps - 1);
  for (int i = 0; i < p.steps; ++i) {
    out[static_cast<std::size_t>(i)] = i == p.steps - 1 ? p.stop : p.start + step * i;
  }
  return out;
}

/// CSV with header param,Y1,M1,PQC1,F_plus,F_minus[,helstrom]; rows in parameter order.
inline std::string run_sweep(const SweepSpec& spec, const SGridConfig& config = {}) {
  const auto it = sweep_families().find(spec.family);
  if (it == sweep_families().end()) {
    throw UsageError("unknown family '" + spec.family + "'; available families: " + family_list());
  }
  ReportOptions options;
  options.bounds = spec.bounds;
  options.bounds.bhattacharyya = false;
  options.include_oracle = spec.oracle;

  std::ostringstream out;
  out << "param";
  if (spec.bounds.young) out << ",Y1";
  if (spec.bounds.minkowski) out << ",M1";
  if (spec.bounds.chernoff) out << ",PQC1";
  if (spec.bounds.fidelity) out << ",F_plus,F_minus";
  if (spec.oracle) out << ",helstrom";
  out << '\n';
  for (double x : sweep_values(spec.parameter)) {
    const auto [a, b] = it->second.make(x);
    // F- is a single-copy quantity; the fidelity columns come from a one-copy report.
    const BoundReport r = full_report(a, b, spec.copies, config, options);
    std::optional<FidelityReport> fid = r.fidelity;
    if (spec.bounds.fidelity && spec.copies != 1) {
      const FidelityBounds fb = fidelity_bounds(fidelity_one_mode(a, b));
      fid = FidelityReport{fidelity_one_mode(a, b), fb.f_minus, fb.f_plus};
    }
    out << fixed9(x);
    if (spec.bounds.young) out << ',' << fixed9(r.young->value);
    if (spec.bounds.minkowski) out << ',' << fixed9(r.minkowski->value);
    if (spec.bounds.chernoff) out << ',' << fixed9(r.chernoff->value);
    if (spec.bounds.fidelity) out << ',' << fixed9(fid->f_plus) << ',' << fixed9(*fid->f_minus);
    if (spec.oracle) out << ',' << fixed9(*r.helstrom);
    out << '\n';
  }
  return out.str();
}

}  // namespace gaussbound::io
