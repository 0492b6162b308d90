#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "gaussbound/bounds.hpp"
#include "gaussbound/error.hpp"
#include "gaussbound/fock_oracle.hpp"
#include "gaussbound/gaussian_state.hpp"

namespace gaussbound {

struct BhattacharyyaBound {
  double value;
  double log_value;
};

/// Single-copy fidelity and the F-/F+ sandwich; f_minus only for N = 1 reports.
struct FidelityReport {
  double f;
  std::optional<double> f_minus;
  double f_plus;
};

struct BoundReport {
  int copies = 1;
  std::size_t modes = 0;
  std::optional<ChernoffBound> chernoff;
  std::optional<BhattacharyyaBound> bhattacharyya;
  std::optional<SpectralBound> minkowski;
  std::optional<SpectralBound> young;
  std::optional<FidelityReport> fidelity;
  /// Exact single-copy error from the Fock oracle.
  std::optional<double> helstrom;
};

struct BoundSelection {
  bool chernoff = true;
  bool minkowski = true;
  bool young = true;
  bool fidelity = true;
  bool bhattacharyya = true;
};

struct ReportOptions {
  BoundSelection bounds;
  bool include_oracle = false;
  double oracle_tail_cap = fock::kDefaultTailCap;
};

/// Slack used when checking the ordering chain of a finished report.
inline constexpr double kReportLogSlack = 1e-9;
inline constexpr double kReportAbsSlack = 1e-10;

namespace detail {

inline void require_order(double lower, double upper, const char* lower_name,
                          const char* upper_name, double slack) {
  if (!(lower <= upper + slack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "report invariant violated: " << lower_name << " = " << lower << " exceeds "
        << upper_name << " = " << upper;
    throw Error(ErrorKind::numerical, msg.str());
  }
}

/// Per-copy log values make the chain independent of N.
inline void check_report(const BoundReport& r) {
  const double n = static_cast<double>(r.copies);
  const auto per_copy = [n](double log_value) { return (log_value + std::log(2.0)) / n; };
  if (r.chernoff && r.bhattacharyya) {
    require_order(per_copy(r.chernoff->log_value), per_copy(r.bhattacharyya->log_value),
                  "log P_QC", "log P_B", kReportLogSlack);
  }
  if (r.chernoff && r.minkowski) {
    require_order(per_copy(r.chernoff->log_value), per_copy(r.minkowski->log_value), "log P_QC",
                  "log M", kReportLogSlack);
  }
  if (r.minkowski && r.young) {
    require_order(per_copy(r.minkowski->log_value), per_copy(r.young->log_value), "log M",
                  "log Y", kReportLogSlack);
  }
  if (r.copies == 1 && r.fidelity && r.chernoff) {
    require_order(*r.fidelity->f_minus, r.chernoff->value, "F-", "P_QC", kReportAbsSlack);
    require_order(r.chernoff->value, r.fidelity->f_plus, "P_QC", "F+", kReportAbsSlack);
  }
  if (r.helstrom) {
    if (r.chernoff && r.copies == 1) {
      require_order(*r.helstrom, r.chernoff->value, "P (Helstrom)", "P_QC", kReportAbsSlack);
    }
    if (r.fidelity && r.fidelity->f_minus) {
      require_order(*r.fidelity->f_minus, *r.helstrom, "F-", "P (Helstrom)", kReportAbsSlack);
    }
  }
}

}  // namespace detail

/// True when both states have a single-mode thermal or coherent Fock form.
inline bool oracle_representable(const GaussianState& a, const GaussianState& b) {
  return fock::representation(a).has_value() && fock::representation(b).has_value();
}

/// Every selected bound for the pair, with the ordering chain verified.
inline BoundReport full_report(const GaussianState& a, const GaussianState& b, int copies,
                               const SGridConfig& config = {}, const ReportOptions& options = {}) {
  detail::check_copies(copies);
  detail::check_same_modes(a, b);
  config.validate();

  BoundReport r;
  r.copies = copies;
  r.modes = a.modes();
  const BoundSelection& sel = options.bounds;
  if (sel.chernoff) r.chernoff = chernoff_bound(a, b, copies, config);
  if (sel.bhattacharyya) {
    const double lv = log_bhattacharyya_bound(a, b, copies);
    r.bhattacharyya = BhattacharyyaBound{std::exp(lv), lv};
  }
  if (sel.minkowski) r.minkowski = minkowski_bound(a, b, copies, config);
  if (sel.young) r.young = young_bound(a, b, copies, config);
  if (sel.fidelity && a.modes() == 1) {
    const double f = fidelity_one_mode(a, b);
    const FidelityBounds fb = fidelity_bounds(f);
    r.fidelity = FidelityReport{f, copies == 1 ? std::optional<double>(fb.f_minus) : std::nullopt,
                                fb.f_plus};
  }
  if (options.include_oracle) {
    const auto fa = fock::representation(a, options.oracle_tail_cap);
    const auto fb = fock::representation(b, options.oracle_tail_cap);
    if (!fa || !fb) {
      throw Error(ErrorKind::unsupported,
                  "unsupported pair for the Fock oracle: both states must be single-mode "
                  "centered thermal or coherent states");
    }
    r.helstrom = fock::helstrom_error(*fa, *fb);
  }
  detail::check_report(r);
  return r;
}

}  // namespace gaussbound
