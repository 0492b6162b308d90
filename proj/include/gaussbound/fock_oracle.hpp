/*
 * Truncated Fock-space oracle for single-mode states.
 *
 * Scope: diagonal thermal states and coherent (displaced vacuum) states. These
 * matrices are small enough for dense Hermitian eigensolvers and give exact
 * reference values for trace norms, Helstrom errors and Tr(rho_A^s rho_B^{1-s}).
 *
 * Truncated matrices are never renormalized; the discarded probability is kept
 * in tail_mass.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "gaussbound/error.hpp"
#include "gaussbound/gaussian_state.hpp"

namespace gaussbound::fock {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDimension = 512;
inline constexpr double kDefaultTailCap = 1e-12;

struct FockMatrix {
  ComplexMatrix entries;
  double tail_mass = 0.0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }
  double trace() const { return entries.trace().real(); }
  bool is_diagonal() const {
    const auto d = entries.rows();
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i)
        if (i != j && entries(i, j) != std::complex<double>(0.0, 0.0)) return false;
    return true;
  }
};

/// Thermal mode in the number basis: diagonal (1 - eta) eta^j, eta = (nu - 1)/(nu + 1).
struct FockThermal {
  double nu;
  double eta;
  std::size_t dim;
};

inline FockThermal thermal_parameters(double nu, double tail_cap) {
  if (!(nu >= 1.0) || !std::isfinite(nu)) {
    std::ostringstream msg;
    msg << "thermal eigenvalue " << nu << " must be >= 1";
    throw Error(ErrorKind::domain, msg.str());
  }
  if (!(tail_cap > 0.0 && tail_cap <= 1e-6)) {
    throw Error(ErrorKind::invalid_argument, "tail_cap must lie in (0, 1e-6]");
  }
  const double eta = (nu - 1.0) / (nu + 1.0);
  if (eta == 0.0) return {nu, eta, 1};
  // smallest D with eta^D < tail_cap
  auto dim = static_cast<std::size_t>(std::floor(std::log(tail_cap) / std::log(eta))) + 1;
  while (dim > 1 && std::pow(eta, static_cast<double>(dim - 1)) < tail_cap) --dim;
  while (std::pow(eta, static_cast<double>(dim)) >= tail_cap) ++dim;
  if (dim > kMaxDimension) {
    std::ostringstream msg;
    msg << "thermal nu = " << nu << " needs dimension " << dim << " > " << kMaxDimension;
    throw Error(ErrorKind::tail_mass, msg.str());
  }
  return {nu, eta, dim};
}

inline FockMatrix thermal_fock(double nu, double tail_cap = kDefaultTailCap) {
  const FockThermal t = thermal_parameters(nu, tail_cap);
  const auto d = static_cast<Eigen::Index>(t.dim);
  FockMatrix out;
  out.entries = ComplexMatrix::Zero(d, d);
  double weight = 1.0 - t.eta;
  for (Eigen::Index j = 0; j < d; ++j) {
    out.entries(j, j) = weight;
    weight *= t.eta;
  }
  out.tail_mass = t.eta == 0.0 ? 0.0 : std::pow(t.eta, static_cast<double>(d));
  return out;
}

namespace detail {

inline std::complex<double> amplitude(const Vector& mean) {
  if (mean.size() != 2) throw Error(ErrorKind::invalid_argument, "coherent mean must have length 2");
  return {0.5 * mean(0), 0.5 * mean(1)};
}

/// Probability of photon numbers >= dim for |alpha>.
inline double coherent_tail(double abs_alpha2, std::size_t dim) {
  // Poisson(|alpha|^2) upper tail, summed until the terms are negligible.
  double term = std::exp(-abs_alpha2);
  for (std::size_t j = 0; j < dim; ++j) term *= abs_alpha2 / static_cast<double>(j + 1);
  double tail = 0.0;
  for (std::size_t j = dim; j < dim + 10000; ++j) {
    tail += term;
    term *= abs_alpha2 / static_cast<double>(j + 1);
    if (static_cast<double>(j) > abs_alpha2 && term < 1e-30 * std::max(tail, 1e-300)) break;
  }
  return tail;
}

}  // namespace detail

inline FockMatrix coherent_fock(const Vector& mean, std::size_t dim) {
  const std::complex<double> alpha = detail::amplitude(mean);
  if (dim == 0 || dim > kMaxDimension) {
    throw Error(ErrorKind::invalid_argument, "coherent_fock dimension out of range");
  }
  const double tail = alpha == 0.0 ? 0.0 : detail::coherent_tail(std::norm(alpha), dim);
  if (tail >= kDefaultTailCap) {
    std::ostringstream msg;
    msg << "dimension " << dim << " leaves tail mass " << tail << " for |alpha|^2 = "
        << std::norm(alpha);
    throw Error(ErrorKind::tail_mass, msg.str());
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::VectorXcd c(d);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (Eigen::Index j = 1; j < d; ++j) c(j) = c(j - 1) * alpha / std::sqrt(static_cast<double>(j));
  return {c * c.adjoint(), tail};
}

/// Coherent projector at the smallest dimension with tail < tail_cap.
inline FockMatrix coherent_fock_auto(const Vector& mean, double tail_cap = kDefaultTailCap) {
  const double a2 = std::norm(detail::amplitude(mean));
  std::size_t dim = 1;
  while (a2 > 0.0 && detail::coherent_tail(a2, dim) >= std::min(tail_cap, kDefaultTailCap)) {
    if (++dim > kMaxDimension) {
      throw Error(ErrorKind::tail_mass, "coherent amplitude too large for the Fock oracle");
    }
  }
  return coherent_fock(mean, dim);
}

/// Copy of m zero-padded to dim.
inline FockMatrix padded(const FockMatrix& m, std::size_t dim) {
  if (dim <= m.dim()) return m;
  const auto d = static_cast<Eigen::Index>(dim);
  FockMatrix out;
  out.entries = ComplexMatrix::Zero(d, d);
  out.entries.topLeftCorner(m.entries.rows(), m.entries.cols()) = m.entries;
  out.tail_mass = m.tail_mass;
  return out;
}

namespace detail {

struct Spectral {
  Eigen::VectorXd values;
  ComplexMatrix vectors;  // empty for diagonal input
};

/// Eigenvalues of a Hermitian Fock matrix. Diagonal input is read exactly;
/// otherwise eigenvalues within solver noise of zero are set to zero.
inline Spectral hermitian_spectrum(const FockMatrix& m) {
  if (m.is_diagonal()) return {m.entries.diagonal().real(), ComplexMatrix()};
  const ComplexMatrix herm = 0.5 * (m.entries + m.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  }
  Eigen::VectorXd w = eig.eigenvalues();
  const double noise = 1e-14 * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (auto& v : w) {
    if (std::abs(v) <= noise) v = 0.0;
  }
  return {w, eig.eigenvectors()};
}

}  // namespace detail

/// M^p for PSD M with 0^p = 0.
inline FockMatrix matrix_power(const FockMatrix& m, double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::domain, "matrix_power needs p > 0");
  const detail::Spectral sp = detail::hermitian_spectrum(m);
  if (sp.values.size() > 0 && sp.values.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (eigenvalue " << sp.values.minCoeff() << ")";
    throw Error(ErrorKind::not_psd, msg.str());
  }
  Eigen::VectorXd powered = sp.values.unaryExpr(
      [p](double v) { return v > 0.0 ? std::pow(v, p) : 0.0; });
  FockMatrix out;
  out.tail_mass = m.tail_mass;
  if (sp.vectors.size() == 0) {
    out.entries = powered.cast<std::complex<double>>().asDiagonal();
  } else {
    out.entries = sp.vectors * powered.cast<std::complex<double>>().asDiagonal() *
                  sp.vectors.adjoint();
  }
  return out;
}

inline double trace_norm(const FockMatrix& m) {
  return detail::hermitian_spectrum(m).values.cwiseAbs().sum();
}

namespace detail {

inline void check_normalized(const FockMatrix& m, const char* label) {
  const double tr = m.trace();
  if (std::abs(tr - 1.0) > 1e-9 + m.tail_mass) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "state " << label << " has trace " << tr << " (tail mass " << m.tail_mass << ")";
    throw Error(ErrorKind::precondition, msg.str());
  }
}

}  // namespace detail

/// Minimal single-copy error 1/2 (1 - 1/2 ||rho_B - rho_A||_1).
inline double helstrom_error(const FockMatrix& a, const FockMatrix& b) {
  detail::check_normalized(a, "A");
  detail::check_normalized(b, "B");
  const std::size_t dim = std::max(a.dim(), b.dim());
  FockMatrix gamma;
  gamma.entries = padded(b, dim).entries - padded(a, dim).entries;
  const double p = 0.5 * (1.0 - 0.5 * trace_norm(gamma));
  return std::clamp(p, 0.0, 0.5);
}

namespace detail {

/// A truncated state whose kept block is full rank and whose tail is non-zero
/// has infinite support; its rho^0 cannot be formed in the truncated space.
inline void check_finite_support(const FockMatrix& m, const char* label) {
  if (m.tail_mass == 0.0) return;
  const Spectral sp = hermitian_spectrum(m);
  if ((sp.values.array() > 0.0).count() == sp.values.size()) {
    std::ostringstream msg;
    msg << "rho_" << label << "^0 is undefined: state " << label
        << " has full-rank support (tail mass " << m.tail_mass << ")";
    throw Error(ErrorKind::domain, msg.str());
  }
}

/// M^p with p = 0 giving the support projector.
inline FockMatrix support_power(const FockMatrix& m, double p) {
  if (p > 0.0) return matrix_power(m, p);
  const Spectral sp = hermitian_spectrum(m);
  const Eigen::VectorXd support = sp.values.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  FockMatrix out;
  if (sp.vectors.size() == 0) {
    out.entries = support.cast<std::complex<double>>().asDiagonal();
  } else {
    out.entries =
        sp.vectors * support.cast<std::complex<double>>().asDiagonal() * sp.vectors.adjoint();
  }
  return out;
}

}  // namespace detail

/// Tr(rho_A^s rho_B^{1-s}); s = 0 (s = 1) needs a finite-support rho_A (rho_B).
/// Truncation error grows like tail_mass^min(s, 1-s).
inline double q_s_fock(const FockMatrix& a, const FockMatrix& b, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::domain, "s must lie in [0, 1]");
  if (s == 0.0) detail::check_finite_support(a, "A");
  if (s == 1.0) detail::check_finite_support(b, "B");
  const std::size_t dim = std::max(a.dim(), b.dim());
  const FockMatrix pa = detail::support_power(padded(a, dim), s);
  const FockMatrix pb = detail::support_power(padded(b, dim), 1.0 - s);
  return (pa.entries * pb.entries).trace().real();
}

/// Fock representation of a single-mode centered thermal or coherent state.
inline std::optional<FockMatrix> representation(const GaussianState& state,
                                                double tail_cap = kDefaultTailCap) {
  if (state.modes() != 1) return std::nullopt;
  const Matrix& v = state.cov().matrix();
  const double nu = v(0, 0);
  const double tol = 1e-12 * std::max(1.0, nu);
  const bool isotropic = std::abs(v(0, 1)) <= tol && std::abs(v(1, 1) - nu) <= tol;
  if (!isotropic) return std::nullopt;
  const bool centered = state.mean().cwiseAbs().maxCoeff() <= 1e-12;
  if (centered) return thermal_fock(std::max(nu, 1.0), tail_cap);
  if (std::abs(nu - 1.0) <= tol) return coherent_fock_auto(state.mean(), tail_cap);
  return std::nullopt;
}

}  // namespace gaussbound::fock
