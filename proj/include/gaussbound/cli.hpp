/*
 * gaussbound command line.
 *
 *   gaussbound validate <file>
 *   gaussbound spectrum <file> [--full]
 *   gaussbound discriminate <A> <B> [--copies N] [--bounds list] [--grid K] [--oracle] [--format F]
 *   gaussbound sweep <spec>
 *
 * Exit status: 0 success, 1 domain or physics failure, 2 usage or parse failure.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaussbound/bounds.hpp"
#include "gaussbound/error.hpp"
#include "gaussbound/gaussian_state.hpp"
#include "gaussbound/io.hpp"
#include "gaussbound/report.hpp"
#include "gaussbound/symplectic.hpp"

namespace gaussbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

/// Default grid, honouring GAUSSBOUND_GRID.
inline SGridConfig default_grid() {
  SGridConfig config;
  if (const char* env = std::getenv("GAUSSBOUND_GRID"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long k = std::strtol(env, &end, 10);
    if (*end != '\0' || k < 3 || k > 1000000) {
      throw io::UsageError(std::string("GAUSSBOUND_GRID must be an integer >= 3, got '") + env + "'");
    }
    config.grid_points = static_cast<int>(k);
  }
  return config;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline int cmd_validate(const std::string& path, std::ostream& out) {
  const io::RawState raw = io::parse_state_document(io::read_json_file(path));
  const std::vector<CovViolation> violations = check_covariance(raw.cov);
  if (!violations.empty()) {
    for (const auto& v : violations) out << "invalid: " << v.message << '\n';
    return kExitFailure;
  }
  const SymplecticSpectrum spec = symplectic_spectrum(CovMatrix::from(raw.cov));
  out << "valid: n = " << spec.modes() << ", nu =";
  for (double v : spec.values) out << ' ' << io::fixed9(v);
  out << '\n';
  return kExitOk;
}

inline int cmd_spectrum(const std::string& path, bool full, std::ostream& out) {
  const GaussianState st = io::load_state(path);
  const SymplecticSpectrum& spec = st.spectrum();
  out << "nu:";
  for (double v : spec.values) out << ' ' << io::fixed9(v);
  out << '\n';
  // det V = prod nu_k^2
  out << "sqrt_det_V: " << io::fixed9(std::exp(0.5 * spd_logdet(st.cov().matrix()))) << '\n';
  out << "prod_nu: " << io::fixed9(std::exp(spec.log_product())) << '\n';
  if (full) {
    const WilliamsonDecomposition& w = st.williamson_form();
    const WilliamsonResiduals r = williamson_residuals(w, st.cov().matrix());
    out << "S:\n";
    for (Eigen::Index i = 0; i < w.S.rows(); ++i) {
      out << ' ';
      for (Eigen::Index j = 0; j < w.S.cols(); ++j) out << ' ' << io::fixed9(w.S(i, j));
      out << '\n';
    }
    out << "residual_symplectic: " << sci(r.symplectic) << '\n';
    out << "residual_reconstruction: " << sci(r.reconstruction) << '\n';
  }
  return kExitOk;
}

struct DiscriminateArgs {
  std::string path_a;
  std::string path_b;
  int copies = 1;
  std::string bounds = "qc,mink,young,fid,bhatta";
  std::optional<int> grid;
  bool oracle = false;
  std::string format = "json";
};

inline int cmd_discriminate(const DiscriminateArgs& args, std::ostream& out) {
  ReportOptions options;
  options.bounds = io::parse_bound_list(args.bounds);
  options.include_oracle = args.oracle;
  SGridConfig config = default_grid();
  if (args.grid) config.grid_points = *args.grid;
  const GaussianState a = io::load_state(args.path_a);
  const GaussianState b = io::load_state(args.path_b);
  const BoundReport r = full_report(a, b, args.copies, config, options);
  if (args.format == "json") {
    out << io::report_to_json(r).dump(2) << '\n';
  } else if (args.format == "csv") {
    out << io::report_to_csv(r);
  } else {
    out << io::report_to_table(r);
  }
  return kExitOk;
}

inline int cmd_sweep(const std::string& path, std::ostream& out) {
  const io::SweepSpec spec = io::sweep_spec_from_json(io::read_json_file(path));
  const std::string csv = io::run_sweep(spec, default_grid());
  if (spec.output) {
    std::ofstream file(*spec.output);
    if (!file) throw io::UsageError("cannot write " + *spec.output);
    file << csv;
    out << "wrote " << spec.parameter.steps << " rows to " << *spec.output << '\n';
  } else {
    out << csv;
  }
  return kExitOk;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error-probability bounds for discriminating Gaussian states", "gaussbound"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check that a state file is a bona fide Gaussian state");
  validate->add_option("file", validate_path, "State file")->required();

  std::string spectrum_path;
  bool full = false;
  auto* spectrum = app.add_subcommand("spectrum", "Print the symplectic spectrum");
  spectrum->add_option("file", spectrum_path, "State file")->required();
  spectrum->add_flag("--full", full, "Also print the Williamson matrix S and its residuals");

  detail::DiscriminateArgs disc;
  auto* discriminate = app.add_subcommand("discriminate", "Bound the error of discriminating A from B");
  discriminate->add_option("A", disc.path_a, "State file A")->required();
  discriminate->add_option("B", disc.path_b, "State file B")->required();
  discriminate->add_option("--copies", disc.copies, "Number of copies N")
      ->check(CLI::PositiveNumber);
  discriminate->add_option("--bounds", disc.bounds, "Comma list of qc,mink,young,fid,bhatta");
  discriminate->add_option("--grid", disc.grid, "Grid points over s")->check(CLI::Range(3, 1000000));
  discriminate->add_flag("--oracle", disc.oracle, "Add the exact Helstrom error from the Fock oracle");
  discriminate->add_option("--format", disc.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Tabulate the bounds along a family of state pairs");
  sweep->add_option("spec", sweep_path, "Sweep specification file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return detail::cmd_validate(validate_path, out);
    if (spectrum->parsed()) return detail::cmd_spectrum(spectrum_path, full, out);
    if (discriminate->parsed()) return detail::cmd_discriminate(disc, out);
    if (sweep->parsed()) return detail::cmd_sweep(sweep_path, out);
  } catch (const io::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace gaussbound::cli
