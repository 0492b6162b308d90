#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

#include "gaussbound/error.hpp"
#include "gaussbound/spectral_functions.hpp"
#include "gaussbound/symplectic.hpp"

namespace gaussbound {

/// Normal-mode data (mean, S, {nu_k}) of a Gaussian state.
struct NormalModeForm {
  Vector mean;
  WilliamsonDecomposition decomposition;
};

/// A Gaussian state: quadrature mean plus validated covariance matrix.
/// The Williamson decomposition is computed once at construction.
class GaussianState {
 public:
  GaussianState(Vector mean, CovMatrix cov)
      : mean_(std::move(mean)), cov_(std::move(cov)), modes_(williamson(cov_)) {
    if (mean_.size() != cov_.matrix().rows()) {
      std::ostringstream msg;
      msg << "mean has length " << mean_.size() << " but the covariance is "
          << cov_.matrix().rows() << "x" << cov_.matrix().rows();
      throw Error(ErrorKind::invalid_argument, msg.str());
    }
    if (!mean_.allFinite()) throw Error(ErrorKind::invalid_argument, "mean has non-finite entries");
  }

  GaussianState(Vector mean, const Matrix& cov) : GaussianState(std::move(mean), CovMatrix::from(cov)) {}

  const Vector& mean() const noexcept { return mean_; }
  const CovMatrix& cov() const noexcept { return cov_; }
  std::size_t modes() const noexcept { return cov_.modes(); }
  const WilliamsonDecomposition& williamson_form() const noexcept { return modes_; }
  const SymplecticSpectrum& spectrum() const noexcept { return modes_.spectrum; }
  bool is_pure() const { return modes_.spectrum.is_pure(); }

  NormalModeForm normal_mode_form() const { return {mean_, modes_}; }

 private:
  Vector mean_;
  CovMatrix cov_;
  WilliamsonDecomposition modes_;
};

/// Natural log of Tr rho^p.
struct PowerTrace {
  double p;
  double log_trace;
};

namespace detail {

/// S diag(Lambda_p(nu_k) doubled) S^T; p may be 0 only for pure decompositions.
inline Matrix power_cov(const WilliamsonDecomposition& w, double p) {
  const std::size_t n = w.spectrum.modes();
  Vector d(static_cast<Eigen::Index>(2 * n));
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = lambda_func(p, w.spectrum.values[k]);
    d(static_cast<Eigen::Index>(2 * k)) = lam;
    d(static_cast<Eigen::Index>(2 * k + 1)) = lam;
  }
  Matrix out = w.S * d.asDiagonal() * w.S.transpose();
  return 0.5 * (out + out.transpose());
}

inline double log_trace_power(const SymplecticSpectrum& spec, double p) {
  double acc = 0.0;
  for (double nu : spec.values) acc += log_g_func(p, nu);
  return acc;
}

inline void check_positive_power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "power " << p << " must be finite and > 0";
    throw Error(ErrorKind::domain, msg.str());
  }
}

}  // namespace detail

/// Covariance matrix of the normalized power state rho^p / Tr rho^p.
inline CovMatrix power_cm(const CovMatrix& v, double p) {
  detail::check_positive_power(p);
  if (p == 1.0) return v;
  return CovMatrix::from(detail::power_cov(williamson(v), p));
}

inline CovMatrix power_cm(const GaussianState& state, double p) {
  detail::check_positive_power(p);
  if (p == 1.0) return state.cov();
  return CovMatrix::from(detail::power_cov(state.williamson_form(), p));
}

inline PowerTrace log_trace_power(const CovMatrix& v, double p) {
  detail::check_positive_power(p);
  return {p, p == 1.0 ? 0.0 : detail::log_trace_power(symplectic_spectrum(v), p)};
}

inline PowerTrace log_trace_power(const GaussianState& state, double p) {
  detail::check_positive_power(p);
  return {p, p == 1.0 ? 0.0 : detail::log_trace_power(state.spectrum(), p)};
}

namespace detail {

inline void check_same_modes(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != b.modes()) {
    std::ostringstream msg;
    msg << "mode count mismatch: " << a.modes() << " vs " << b.modes();
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

/// log Tr(rho rho') for Gaussian moments (V, x) and (V', x').
inline double log_overlap(const Matrix& v, const Vector& x, const Matrix& v2, const Vector& x2) {
  const Vector delta = x - x2;
  const LogDetSolve ls = spd_logdet_and_solve(v + v2, delta);
  const double n = static_cast<double>(v.rows() / 2);
  return n * std::log(2.0) - 0.5 * ls.log_det - 0.5 * delta.dot(ls.x);
}

}  // namespace detail

/// Tr(rho rho') = 2^n exp(-1/2 d^T (V+V')^{-1} d) / sqrt(det(V+V')).
inline double overlap(const GaussianState& a, const GaussianState& b) {
  detail::check_same_modes(a, b);
  return std::exp(
      detail::log_overlap(a.cov().matrix(), a.mean(), b.cov().matrix(), b.mean()));
}

// ---------------------------------------------------------------------------
// builders (closed-form covariance matrices)

inline GaussianState vacuum(std::size_t modes) {
  const SymplecticForm omega(modes);
  const auto dim = omega.matrix().rows();
  return GaussianState(Vector::Zero(dim), Matrix::Identity(dim, dim));
}

inline GaussianState thermal(const std::vector<double>& nus) {
  if (nus.empty()) throw Error(ErrorKind::invalid_argument, "thermal state needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * nus.size());
  Matrix v = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < nus.size(); ++k) {
    if (!(nus[k] >= 1.0) || !std::isfinite(nus[k])) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "thermal eigenvalue nu_" << (k + 1) << " = " << nus[k] << " < 1";
      throw Error(ErrorKind::unphysical, msg.str());
    }
    v(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(2 * k)) = nus[k];
    v(static_cast<Eigen::Index>(2 * k + 1), static_cast<Eigen::Index>(2 * k + 1)) = nus[k];
  }
  return GaussianState(Vector::Zero(dim), v);
}

/// Coherent state with quadrature mean `mean` (length 2n).
inline GaussianState coherent(const Vector& mean) {
  if (mean.size() == 0 || mean.size() % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, "coherent mean must have length 2n");
  }
  return GaussianState(mean, Matrix::Identity(mean.size(), mean.size()));
}

/// Quadrature mean of the single-mode coherent state |alpha>: (2 Re alpha, 2 Im alpha).
inline Vector coherent_mean(std::complex<double> alpha) {
  Vector d(2);
  d << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return d;
}

inline GaussianState squeezed(double r) {
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = std::exp(2.0 * r);
  v(1, 1) = std::exp(-2.0 * r);
  return GaussianState(Vector::Zero(2), v);
}

inline GaussianState two_mode_squeezed(double r) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  Matrix v(4, 4);
  v << ch, 0, sh, 0,
       0, ch, 0, -sh,
       sh, 0, ch, 0,
       0, -sh, 0, ch;
  return GaussianState(Vector::Zero(4), v);
}

inline GaussianState displaced(const GaussianState& state, const Vector& shift) {
  if (shift.size() != state.mean().size()) {
    throw Error(ErrorKind::invalid_argument, "displacement length does not match the state");
  }
  return GaussianState(state.mean() + shift, state.cov());
}

/// (mean, V) -> (S mean, S V S^T).
inline GaussianState symplectic_transform(const GaussianState& state, const Matrix& s) {
  const auto dim = state.mean().size();
  if (s.rows() != dim || s.cols() != dim) {
    throw Error(ErrorKind::invalid_argument, "symplectic matrix size does not match the state");
  }
  Matrix v = s * state.cov().matrix() * s.transpose();
  return GaussianState(s * state.mean(), Matrix(0.5 * (v + v.transpose())));
}

}  // namespace gaussbound
