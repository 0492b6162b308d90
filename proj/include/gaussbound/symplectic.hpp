/*
 * symplectic.hpp: symplectic linear algebra for n-mode covariance matrices.
 *
 * Conventions: quadratures are ordered (q_1, p_1, ..., q_n, p_n) and the
 * symplectic form is the direct sum of n blocks [[0, 1], [-1, 0]]. The vacuum
 * covariance matrix is the identity, so a physical state has every symplectic
 * eigenvalue nu_k >= 1.
 *
 * Williamson decomposition V = S diag(nu_1, nu_1, ..., nu_n, nu_n) S^T:
 *   R = V^{1/2},  A = R Omega R  (real antisymmetric)
 *   i A is Hermitian with eigenvalues +-nu_k; an eigenvector u = a + i b of +nu_k
 *   gives the real pair (sqrt2 b, sqrt2 a) spanning one canonical 2x2 block.
 *   Collecting the pairs into an orthogonal O gives O^T A O = (+) nu_k J, and
 *   S = R O D^{-1/2} is symplectic with S D S^T = V.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gaussbound/error.hpp"

namespace gaussbound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Lower bound slack on nu_k >= 1; pure states sit on the boundary.
inline constexpr double kPhysicalTolerance = 1e-9;
/// Relative symmetry tolerance for covariance input.
inline constexpr double kSymmetryTolerance = 1e-10;
/// Relative tolerance when pairing the +-nu eigenvalues of i R Omega R.
inline constexpr double kPairingTolerance = 1e-8;
/// Williamson residual above which the decomposition is rejected.
inline constexpr double kWilliamsonTolerance = 1e-9;

class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t modes) : modes_(modes) {
    if (modes == 0) {
      throw Error(ErrorKind::invalid_argument, "symplectic form needs at least one mode");
    }
    const auto dim = static_cast<Eigen::Index>(2 * modes);
    matrix_ = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; k += 2) {
      matrix_(k, k + 1) = 1.0;
      matrix_(k + 1, k) = -1.0;
    }
  }

  std::size_t modes() const noexcept { return modes_; }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  std::size_t modes_;
  Matrix matrix_;
};

inline SymplecticForm build_omega(std::size_t modes) { return SymplecticForm(modes); }

/// Symplectic eigenvalues, sorted descending.
struct SymplecticSpectrum {
  std::vector<double> values;

  std::size_t modes() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  double log_product() const {
    double acc = 0.0;
    for (double v : values) acc += std::log(v);
    return acc;
  }

  bool is_pure(double tol = kPhysicalTolerance) const {
    return std::all_of(values.begin(), values.end(),
                       [tol](double v) { return std::abs(v - 1.0) <= tol; });
  }
};

struct WilliamsonDecomposition {
  Matrix S;
  SymplecticSpectrum spectrum;

  /// diag(nu_1, nu_1, ..., nu_n, nu_n)
  Vector doubled_spectrum() const {
    Vector d(static_cast<Eigen::Index>(2 * spectrum.modes()));
    for (std::size_t k = 0; k < spectrum.modes(); ++k) {
      d(static_cast<Eigen::Index>(2 * k)) = spectrum.values[k];
      d(static_cast<Eigen::Index>(2 * k + 1)) = spectrum.values[k];
    }
    return d;
  }
};

namespace detail {

inline std::size_t mode_count(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    std::ostringstream msg;
    msg << "expected a non-empty 2n x 2n matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  return static_cast<std::size_t>(m.rows() / 2);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Cholesky factor L (lower) of a symmetric matrix; only the lower triangle is read.
inline Matrix cholesky_lower(const Matrix& m) {
  const Eigen::Index dim = m.rows();
  Matrix L = Matrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    double pivot = m(j, j) - L.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      std::ostringstream msg;
      msg << "matrix is not positive definite (Cholesky pivot " << j << " = " << pivot << ")";
      throw Error(ErrorKind::not_positive_definite, msg.str());
    }
    const double diag = std::sqrt(pivot);
    L(j, j) = diag;
    for (Eigen::Index i = j + 1; i < dim; ++i) {
      L(i, j) = (m(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / diag;
    }
  }
  return L;
}

struct HermitianPairs {
  Matrix root;                              // V^{1/2}
  Eigen::VectorXd eigenvalues;              // ascending, +-nu
  Eigen::MatrixXcd eigenvectors;
};

}  // namespace detail

/// Symmetric square root via the symmetric eigenproblem.
inline Matrix sym_sqrt(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::invalid_argument, "sym_sqrt needs a square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "symmetric eigensolver did not converge");
  }
  const Vector& w = eig.eigenvalues();
  if (!(w.minCoeff() > 0.0)) {
    std::ostringstream msg;
    msg << "sym_sqrt: smallest eigenvalue " << w.minCoeff() << " is not positive";
    throw Error(ErrorKind::not_positive_definite, msg.str());
  }
  const Matrix& q = eig.eigenvectors();
  Matrix r = q * w.cwiseSqrt().asDiagonal() * q.transpose();
  return 0.5 * (r + r.transpose());
}

struct LogDetSolve {
  double log_det;
  Vector x;
};

/// log det M and the solution of M x = b from one Cholesky factorization.
inline LogDetSolve spd_logdet_and_solve(const Matrix& m, const Vector& b) {
  if (m.rows() != m.cols() || m.rows() != b.size()) {
    throw Error(ErrorKind::invalid_argument, "spd_logdet_and_solve: dimension mismatch");
  }
  const Matrix L = detail::cholesky_lower(m);
  double log_det = 0.0;
  for (Eigen::Index j = 0; j < L.rows(); ++j) log_det += 2.0 * std::log(L(j, j));
  Vector y = L.triangularView<Eigen::Lower>().solve(b);
  Vector x = L.transpose().triangularView<Eigen::Upper>().solve(y);
  return {log_det, std::move(x)};
}

inline double spd_logdet(const Matrix& m) {
  return spd_logdet_and_solve(m, Vector::Zero(m.rows())).log_det;
}

namespace detail {

inline HermitianPairs hermitian_pairs(const Matrix& v) {
  const std::size_t n = mode_count(v);
  cholesky_lower(v);  // reports the failing pivot for non-PD input
  HermitianPairs out;
  out.root = sym_sqrt(v);
  const Matrix a = out.root * build_omega(n).matrix() * out.root;
  const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  }
  out.eigenvalues = eig.eigenvalues();
  out.eigenvectors = eig.eigenvectors();
  return out;
}

inline SymplecticSpectrum pair_spectrum(const Eigen::VectorXd& ev) {
  const auto dim = ev.size();
  const auto n = dim / 2;
  SymplecticSpectrum spec;
  spec.values.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pos = ev(dim - 1 - k);
    const double neg = ev(k);
    const double scale = std::max(std::abs(pos), std::abs(neg));
    if (!(pos > 0.0) || std::abs(pos + neg) > kPairingTolerance * scale) {
      std::ostringstream msg;
      msg << "eigenvalues " << pos << " and " << neg << " of i R Omega R do not pair";
      throw Error(ErrorKind::numerical_degeneracy, msg.str());
    }
    spec.values.push_back(0.5 * (pos - neg));
  }
  return spec;
}

}  // namespace detail

/// Moduli of the eigenvalues of Omega V, one per mode, descending.
/// Accepts any symmetric positive-definite matrix (bona fide or not).
inline SymplecticSpectrum symplectic_spectrum(const Matrix& v) {
  return detail::pair_spectrum(detail::hermitian_pairs(v).eigenvalues);
}

/// max |S Omega S^T - Omega| and max |S D S^T - V| / max |V|.
struct WilliamsonResiduals {
  double symplectic;
  double reconstruction;
};

inline WilliamsonResiduals williamson_residuals(const WilliamsonDecomposition& w, const Matrix& v) {
  const Matrix omega = build_omega(w.spectrum.modes()).matrix();
  const Vector d = w.doubled_spectrum();
  return {detail::max_abs(w.S * omega * w.S.transpose() - omega),
          detail::max_abs(w.S * d.asDiagonal() * w.S.transpose() - v) / detail::max_abs(v)};
}

inline WilliamsonDecomposition williamson(const Matrix& v) {
  const std::size_t n = detail::mode_count(v);
  const auto dim = static_cast<Eigen::Index>(2 * n);
  const detail::HermitianPairs hp = detail::hermitian_pairs(v);
  WilliamsonDecomposition out;
  out.spectrum = detail::pair_spectrum(hp.eigenvalues);

  Matrix o(dim, dim);
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
    const Eigen::VectorXcd u = hp.eigenvectors.col(dim - 1 - k);
    o.col(2 * k) = root2 * u.imag();
    o.col(2 * k + 1) = root2 * u.real();
  }
  const Vector d = out.doubled_spectrum();
  out.S = hp.root * o * d.cwiseSqrt().cwiseInverse().asDiagonal();

  const WilliamsonResiduals r = williamson_residuals(out, v);
  if (!(r.symplectic <= kWilliamsonTolerance) || !(r.reconstruction <= kWilliamsonTolerance)) {
    std::ostringstream msg;
    msg << "Williamson residuals too large (symplectic " << r.symplectic << ", reconstruction "
        << r.reconstruction << ")";
    throw Error(ErrorKind::decomposition_failure, msg.str());
  }
  return out;
}

/// exp(Omega H) for a seeded random symmetric H scaled by `intensity`.
inline Matrix random_symplectic(std::uint64_t seed, std::size_t modes, double intensity) {
  if (!(intensity >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "random_symplectic: intensity must be >= 0");
  }
  const Matrix omega = build_omega(modes).matrix();
  const auto dim = omega.rows();
  if (intensity == 0.0) return Matrix::Identity(dim, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double g = intensity * normal(rng);
      h(i, j) = g;
      h(j, i) = g;
    }
  }
  Matrix gen = omega * h;
  return gen.exp();
}

// ---------------------------------------------------------------------------
// covariance matrices

struct CovViolation {
  enum class Kind { shape, non_finite, asymmetric, not_positive_definite, uncertainty };
  Kind kind;
  std::string message;
};

/// All physicality violations of a candidate covariance matrix, in check order.
/// Positivity and the uncertainty relation are checked on the symmetric part.
inline std::vector<CovViolation> check_covariance(const Matrix& v) {
  std::vector<CovViolation> out;
  if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0) {
    std::ostringstream msg;
    msg << "covariance must be 2n x 2n, got " << v.rows() << "x" << v.cols();
    out.push_back({CovViolation::Kind::shape, msg.str()});
    return out;
  }
  if (!v.allFinite()) {
    out.push_back({CovViolation::Kind::non_finite, "covariance has non-finite entries"});
    return out;
  }
  for (Eigen::Index l = 0; l < v.rows(); ++l) {
    for (Eigen::Index m = l + 1; m < v.cols(); ++m) {
      const double diff = std::abs(v(l, m) - v(m, l));
      if (diff > kSymmetryTolerance * std::max({1.0, std::abs(v(l, m)), std::abs(v(m, l))})) {
        std::ostringstream msg;
        msg << "asymmetric entries V[" << l << "][" << m << "] = " << v(l, m) << " vs V[" << m
            << "][" << l << "] = " << v(m, l);
        out.push_back({CovViolation::Kind::asymmetric, msg.str()});
      }
    }
  }
  const Matrix sym = 0.5 * (v + v.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > 0.0)) {
    std::ostringstream msg;
    msg << "covariance is not positive definite (smallest eigenvalue " << smallest << ")";
    out.push_back({CovViolation::Kind::not_positive_definite, msg.str()});
    return out;
  }
  const SymplecticSpectrum spec = symplectic_spectrum(sym);
  for (std::size_t k = 0; k < spec.modes(); ++k) {
    if (spec.values[k] < 1.0 - kPhysicalTolerance) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "uncertainty principle violated: nu_" << (k + 1) << " = " << spec.values[k]
          << " < 1";
      out.push_back({CovViolation::Kind::uncertainty, msg.str()});
    }
  }
  return out;
}

/// A validated, exactly symmetric covariance matrix.
class CovMatrix {
 public:
  static CovMatrix from(const Matrix& v) {
    const auto violations = check_covariance(v);
    if (!violations.empty()) {
      std::string msg = violations.front().message;
      for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i].message;
      throw Error(ErrorKind::unphysical, msg);
    }
    CovMatrix out;
    out.matrix_ = 0.5 * (v + v.transpose());
    return out;
  }

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t modes() const noexcept { return static_cast<std::size_t>(matrix_.rows() / 2); }

 private:
  CovMatrix() = default;
  Matrix matrix_;
};

inline SymplecticSpectrum symplectic_spectrum(const CovMatrix& v) {
  return symplectic_spectrum(v.matrix());
}
inline WilliamsonDecomposition williamson(const CovMatrix& v) { return williamson(v.matrix()); }

}  // namespace gaussbound
