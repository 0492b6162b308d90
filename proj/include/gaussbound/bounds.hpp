/*
 * Error-probability bounds for discriminating two Gaussian states.
 *
 *   Q_s    = Tr(rho_A^s rho_B^{1-s})
 *          = Qbar_s exp(-1/2 d^T [V_A(s) + V_B(1-s)]^{-1} d)
 *   Qbar_s = 2^n prod_k G_s(alpha_k) G_{1-s}(beta_k) / sqrt(det[V_A(s) + V_B(1-s)])
 *   M_s    = 4^n [prod_k Psi_s(alpha_k, beta_k) + prod_k Psi_{1-s}(beta_k, alpha_k)]^{-n}
 *   Y_s    = 2^n prod_k Gamma_s(alpha_k) Gamma_{1-s}(beta_k)
 *
 * with Q_s <= Qbar_s <= M_s <= Y_s pointwise. Each N-copy bound is
 * 1/2 (inf_s f)^N. Everything is carried in log form.
 *
 * The endpoint s = 0 is admissible only when rho_A is pure and s = 1 only when
 * rho_B is pure; otherwise rho^0 diverges in the formulas above and the search
 * stops at endpoint_epsilon.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "gaussbound/error.hpp"
#include "gaussbound/gaussian_state.hpp"
#include "gaussbound/spectral_functions.hpp"

namespace gaussbound {

struct SPoint {
  double s;
  double value;
  double log_value;
};

struct SGridConfig {
  int grid_points = 201;
  double endpoint_epsilon = 1e-6;
  double refine_tolerance = 1e-10;

  void validate() const {
    if (grid_points < 3) {
      throw Error(ErrorKind::invalid_argument, "grid_points must be >= 3");
    }
    if (!(endpoint_epsilon > 0.0 && endpoint_epsilon < 0.5)) {
      throw Error(ErrorKind::invalid_argument, "endpoint_epsilon must lie in (0, 0.5)");
    }
    if (!(refine_tolerance > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "refine_tolerance must be > 0");
    }
  }
};

/// Which of s = 0 and s = 1 may be evaluated exactly.
struct EndpointAdmissibility {
  bool zero = false;
  bool one = false;
};

namespace detail {

inline SPoint make_point(double s, double log_value) { return {s, std::exp(log_value), log_value}; }

inline void check_s_range(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << "s = " << s << " lies outside [0, 1]";
    throw Error(ErrorKind::domain, msg.str());
  }
}

/// s = 0 needs a pure rho_A, s = 1 a pure rho_B.
inline void check_endpoint(const SymplecticSpectrum& a, const SymplecticSpectrum& b, double s) {
  check_s_range(s);
  const auto fail = [](const char* label, std::size_t k, double nu, double at) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "s = " << at << " needs state " << label << " to be pure, but its mode " << (k + 1)
        << " has nu = " << nu;
    throw Error(ErrorKind::domain, msg.str());
  };
  if (s == 0.0) {
    for (std::size_t k = 0; k < a.modes(); ++k) {
      if (a.values[k] > 1.0 + kPhysicalTolerance) fail("A", k, a.values[k], s);
    }
  }
  if (s == 1.0) {
    for (std::size_t k = 0; k < b.modes(); ++k) {
      if (b.values[k] > 1.0 + kPhysicalTolerance) fail("B", k, b.values[k], s);
    }
  }
}

inline void check_same_spectrum_size(const SymplecticSpectrum& a, const SymplecticSpectrum& b) {
  if (a.modes() != b.modes() || a.modes() == 0) {
    std::ostringstream msg;
    msg << "spectra must have the same non-zero mode count, got " << a.modes() << " and "
        << b.modes();
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

struct PowerSide {
  double log_trace;
  Matrix cov;
};

/// (log Tr rho^p, CM of rho^p / Tr rho^p); p = 0 only for pure states.
inline PowerSide power_side(const GaussianState& st, double p) {
  if (p == 1.0 || (p == 0.0 && st.is_pure())) return {0.0, st.cov().matrix()};
  return {detail::log_trace_power(st.spectrum(), p), power_cov(st.williamson_form(), p)};
}

struct QsParts {
  double log_bar;
  double log_displacement;
};

inline QsParts q_s_parts(const GaussianState& a, const GaussianState& b, double s) {
  check_same_modes(a, b);
  check_endpoint(a.spectrum(), b.spectrum(), s);
  const PowerSide pa = power_side(a, s);
  const PowerSide pb = power_side(b, 1.0 - s);
  const Vector d = a.mean() - b.mean();
  const LogDetSolve ls = spd_logdet_and_solve(pa.cov + pb.cov, d);
  const double n = static_cast<double>(a.modes());
  return {n * std::log(2.0) + pa.log_trace + pb.log_trace - 0.5 * ls.log_det,
          -0.5 * d.dot(ls.x)};
}

inline double log_sum_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

}  // namespace detail

inline SPoint q_s(const GaussianState& a, const GaussianState& b, double s) {
  const auto parts = detail::q_s_parts(a, b, s);
  return detail::make_point(s, parts.log_bar + parts.log_displacement);
}

/// q_s without the displacement factor.
inline SPoint q_bar_s(const GaussianState& a, const GaussianState& b, double s) {
  return detail::make_point(s, detail::q_s_parts(a, b, s).log_bar);
}

/// Minkowski quantity M_s; needs only the two spectra.
inline SPoint m_s(const SymplecticSpectrum& a, const SymplecticSpectrum& b, double s) {
  detail::check_same_spectrum_size(a, b);
  detail::check_endpoint(a, b, s);
  const std::size_t n = a.modes();
  const double nd = static_cast<double>(n);
  double log_first = 0.0;
  double log_second = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = detail::checked_eigenvalue(a.values[k]);
    const double y = detail::checked_eigenvalue(b.values[k]);
    // Psi_s(x, y) and Psi_{1-s}(y, x)
    log_first += (detail::log_phi_plus_unchecked(s, x) +
                  detail::log_phi_minus_unchecked(1.0 - s, y)) / nd;
    log_second += (detail::log_phi_plus_unchecked(1.0 - s, y) +
                   detail::log_phi_minus_unchecked(s, x)) / nd;
  }
  const double log_sum = detail::log_sum_exp(log_first, log_second);
  return detail::make_point(s, nd * std::log(4.0) - nd * log_sum);
}

/// Young quantity Y_s; needs only the two spectra.
inline SPoint y_s(const SymplecticSpectrum& a, const SymplecticSpectrum& b, double s) {
  detail::check_same_spectrum_size(a, b);
  detail::check_endpoint(a, b, s);
  const std::size_t n = a.modes();
  double acc = static_cast<double>(n) * std::log(2.0);
  for (std::size_t k = 0; k < n; ++k) {
    acc += log_gamma_func(s, a.values[k]) + log_gamma_func(1.0 - s, b.values[k]);
  }
  return detail::make_point(s, acc);
}

// ---------------------------------------------------------------------------
// infimum over s

struct SMinimum {
  double s_star;
  double log_value;
  double value;
  /// True when s_star is endpoint_epsilon or 1 - endpoint_epsilon.
  bool clamped_endpoint;
};

/// Minimizes a log-valued function of s over [0, 1]: a uniform grid on
/// [eps, 1 - eps], golden-section refinement around the best grid bracket,
/// then the exact endpoints where admissible. Ties go to the smallest s.
template <typename LogF>
SMinimum minimize_over_s(LogF&& log_f, const SGridConfig& config,
                         EndpointAdmissibility endpoints = {}) {
  config.validate();
  const double eps = config.endpoint_epsilon;
  const int k = config.grid_points;
  const double step = (1.0 - 2.0 * eps) / static_cast<double>(k - 1);
  const auto grid_s = [&](int i) { return i == k - 1 ? 1.0 - eps : eps + step * i; };
  const auto eval = [&](double s) {
    const double v = log_f(s);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite bound evaluation at s = " << s;
      throw Error(ErrorKind::numerical, msg.str());
    }
    return v;
  };
  // Relative tie window in the log domain.
  const auto tie = [](double x) { return 1e-14 * std::max(1.0, std::abs(x)); };

  std::vector<double> values(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) values[static_cast<std::size_t>(i)] = eval(grid_s(i));
  const double grid_min = *std::min_element(values.begin(), values.end());
  int best = 0;
  while (values[static_cast<std::size_t>(best)] > grid_min + tie(grid_min)) ++best;

  double best_s = grid_s(best);
  double best_v = values[static_cast<std::size_t>(best)];

  // golden-section on the bracket around the best grid point
  double lo = grid_s(std::max(best - 1, 0));
  double hi = grid_s(std::min(best + 1, k - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int iter = 0; iter < 200 && (hi - lo) > config.refine_tolerance; ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
  }
  const double refined_s = f1 <= f2 ? x1 : x2;
  const double refined_v = std::min(f1, f2);
  if (refined_v < best_v - tie(best_v)) {
    best_s = refined_s;
    best_v = refined_v;
  }

  if (endpoints.zero) {
    const double v0 = eval(0.0);
    if (v0 <= best_v + tie(best_v)) {
      best_s = 0.0;
      best_v = v0;
    }
  }
  if (endpoints.one) {
    const double v1 = eval(1.0);
    if (v1 < best_v - tie(best_v)) {
      best_s = 1.0;
      best_v = v1;
    }
  }
  const bool clamped = best_s == eps || best_s == 1.0 - eps;
  return {best_s, best_v, std::exp(best_v), clamped};
}

// ---------------------------------------------------------------------------
// N-copy bounds

struct ChernoffBound {
  double s_star;
  double value;      // P_QC^(N)
  double log_value;  // log P_QC^(N)
  double kappa;      // -log inf_s Q_s
  bool clamped_endpoint;
};

/// Minimizer and N-copy value 1/2 (inf f)^N of a spectrum-only bound.
struct SpectralBound {
  double s_star;
  double value;
  double log_value;
  bool clamped_endpoint;
};

namespace detail {

inline void check_copies(int copies) {
  if (copies < 1) throw Error(ErrorKind::invalid_argument, "copies must be >= 1");
}

inline double log_n_copy(double log_inf, int copies) {
  return -std::log(2.0) + static_cast<double>(copies) * log_inf;
}

inline EndpointAdmissibility admissible(const SymplecticSpectrum& a, const SymplecticSpectrum& b) {
  return {a.is_pure(), b.is_pure()};
}

inline SpectralBound spectral_bound(const SMinimum& m, int copies) {
  const double lv = log_n_copy(m.log_value, copies);
  return {m.s_star, std::exp(lv), lv, m.clamped_endpoint};
}

}  // namespace detail

inline ChernoffBound chernoff_bound(const GaussianState& a, const GaussianState& b, int copies,
                                    const SGridConfig& config = {}) {
  detail::check_copies(copies);
  detail::check_same_modes(a, b);
  const SMinimum m = minimize_over_s([&](double s) { return q_s(a, b, s).log_value; }, config,
                                     detail::admissible(a.spectrum(), b.spectrum()));
  const double lv = detail::log_n_copy(m.log_value, copies);
  return {m.s_star, std::exp(lv), lv, -m.log_value, m.clamped_endpoint};
}

inline double log_bhattacharyya_bound(const GaussianState& a, const GaussianState& b, int copies) {
  detail::check_copies(copies);
  return detail::log_n_copy(q_s(a, b, 0.5).log_value, copies);
}

inline double bhattacharyya_bound(const GaussianState& a, const GaussianState& b, int copies) {
  return std::exp(log_bhattacharyya_bound(a, b, copies));
}

inline SpectralBound minkowski_bound(const SymplecticSpectrum& a, const SymplecticSpectrum& b,
                                     int copies, const SGridConfig& config = {}) {
  detail::check_copies(copies);
  detail::check_same_spectrum_size(a, b);
  return detail::spectral_bound(
      minimize_over_s([&](double s) { return m_s(a, b, s).log_value; }, config,
                      detail::admissible(a, b)),
      copies);
}

inline SpectralBound minkowski_bound(const GaussianState& a, const GaussianState& b, int copies,
                                     const SGridConfig& config = {}) {
  return minkowski_bound(a.spectrum(), b.spectrum(), copies, config);
}

inline SpectralBound young_bound(const SymplecticSpectrum& a, const SymplecticSpectrum& b,
                                 int copies, const SGridConfig& config = {}) {
  detail::check_copies(copies);
  detail::check_same_spectrum_size(a, b);
  return detail::spectral_bound(
      minimize_over_s([&](double s) { return y_s(a, b, s).log_value; }, config,
                      detail::admissible(a, b)),
      copies);
}

inline SpectralBound young_bound(const GaussianState& a, const GaussianState& b, int copies,
                                 const SGridConfig& config = {}) {
  return young_bound(a.spectrum(), b.spectrum(), copies, config);
}

// ---------------------------------------------------------------------------
// fidelity (single mode)

inline double fidelity_one_mode(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != 1 || b.modes() != 1) {
    std::ostringstream msg;
    msg << "fidelity formula is single-mode only, got " << a.modes() << " and " << b.modes()
        << " modes";
    throw Error(ErrorKind::unsupported, msg.str());
  }
  const Matrix& va = a.cov().matrix();
  const Matrix& vb = b.cov().matrix();
  const Vector d = a.mean() - b.mean();
  const LogDetSolve ls = spd_logdet_and_solve(va + vb, d);
  const double big_delta = std::exp(ls.log_det);
  const double small_delta = std::max(0.0, (va.determinant() - 1.0) * (vb.determinant() - 1.0));
  // sqrt(D + d) - sqrt(d) written without cancellation
  const double denom = big_delta / (std::sqrt(big_delta + small_delta) + std::sqrt(small_delta));
  return std::min(1.0, 2.0 * std::exp(-0.5 * d.dot(ls.x)) / denom);
}

struct FidelityBounds {
  double f_minus;
  double f_plus;
};

/// F- = (1 - sqrt(1 - F)) / 2 and F+ = sqrt(F) / 2.
inline FidelityBounds fidelity_bounds(double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    std::ostringstream msg;
    msg << "fidelity " << f << " lies outside [0, 1]";
    throw Error(ErrorKind::domain, msg.str());
  }
  return {0.5 * (1.0 - std::sqrt(1.0 - f)), 0.5 * std::sqrt(f)};
}

/// Single-copy Chernoff bound F/2 when the first state is pure.
inline double pure_case_chernoff(const GaussianState& pure, const GaussianState& other) {
  if (!pure.is_pure()) {
    throw Error(ErrorKind::precondition, "first state of pure_case_chernoff must be pure");
  }
  return 0.5 * fidelity_one_mode(pure, other);
}

}  // namespace gaussbound
