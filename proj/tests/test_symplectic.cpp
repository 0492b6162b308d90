#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gaussbound/symplectic.hpp"
#include "support/oracles.hpp"

using namespace gaussbound;

namespace {

Matrix omega_of(std::size_t n) { return build_omega(n).matrix(); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SymplecticForm, SingleModeBlock) {
  Matrix expected(2, 2);
  expected << 0, 1, -1, 0;
  EXPECT_EQ(omega_of(1), expected);
}

TEST(SymplecticForm, TwoModesAreBlockDiagonal) {
  const Matrix om = omega_of(2);
  ASSERT_EQ(om.rows(), 4);
  EXPECT_EQ(om.block(0, 2, 2, 2), Matrix::Zero(2, 2));
  EXPECT_EQ(om.block(2, 0, 2, 2), Matrix::Zero(2, 2));
  EXPECT_EQ(om.block(2, 2, 2, 2), omega_of(1));
}

TEST(SymplecticForm, SquaresToMinusIdentity) {
  EXPECT_EQ(omega_of(3) * omega_of(3), -Matrix::Identity(6, 6));
}

TEST(SymplecticForm, ZeroModesRejected) {
  try {
    build_omega(0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(Spectrum, ThermalIsItsOwnSpectrum) {
  const auto spec = symplectic_spectrum(Matrix(2.7 * Matrix::Identity(2, 2)));
  ASSERT_EQ(spec.modes(), 1u);
  EXPECT_NEAR(spec[0], 2.7, 1e-12);
}

TEST(Spectrum, SqueezedVacuumIsPure) {
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = std::exp(1.4);
  v(1, 1) = std::exp(-1.4);
  const auto spec = symplectic_spectrum(v);
  EXPECT_NEAR(spec[0], 1.0, 1e-12);
  EXPECT_TRUE(spec.is_pure());
}

TEST(Spectrum, CorrelatedTwoModeExample) {
  Matrix v(4, 4);
  v << 2, 0, 1, 0,
       0, 2, 0, -1,
       1, 0, 2, 0,
       0, -1, 0, 2;
  const auto spec = symplectic_spectrum(v);
  EXPECT_NEAR(spec[0], std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(spec[1], std::sqrt(3.0), 1e-12);
  const auto brute = oracle::brute_spectrum(v);
  EXPECT_LT(oracle::sorted_rel_diff(spec.values, brute), 1e-12);
}

TEST(Spectrum, SortedDescending) {
  Matrix v = Matrix::Zero(6, 6);
  const double nus[] = {1.5, 7.0, 3.0};
  for (int k = 0; k < 3; ++k) v(2 * k, 2 * k) = v(2 * k + 1, 2 * k + 1) = nus[k];
  const auto spec = symplectic_spectrum(v);
  EXPECT_NEAR(spec[0], 7.0, 1e-12);
  EXPECT_NEAR(spec[1], 3.0, 1e-12);
  EXPECT_NEAR(spec[2], 1.5, 1e-12);
}

TEST(Spectrum, MatchesBruteForceEigenvaluesOfOmegaV) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto rs = oracle::random_state(rng, n, 1.0, 8.0, 0.0, 0.7);
    const auto brute = oracle::brute_spectrum(rs.state.cov().matrix());
    EXPECT_LT(oracle::sorted_rel_diff(symplectic_spectrum(rs.state.cov()).values, brute), 1e-9)
        << "trial " << trial;
    EXPECT_LT(oracle::sorted_rel_diff(rs.state.spectrum().values, rs.nus), 1e-9);
  }
}

TEST(Spectrum, ProductMatchesSquareRootDeterminant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rs = oracle::random_state(rng, 1 + trial % 3);
    const Matrix& v = rs.state.cov().matrix();
    EXPECT_NEAR(rs.state.spectrum().log_product(), 0.5 * std::log(oracle::cofactor_det(v)), 1e-9);
  }
}

TEST(Williamson, IdentityGivesIdentity) {
  const auto w = williamson(Matrix(Matrix::Identity(4, 4)));
  EXPECT_LT(max_abs(w.S * w.S.transpose() - Matrix::Identity(4, 4)), 1e-12);
  EXPECT_TRUE(w.spectrum.is_pure());
}

TEST(Williamson, SqueezedVacuum) {
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = std::exp(1.0);
  v(1, 1) = std::exp(-1.0);
  const auto w = williamson(v);
  EXPECT_NEAR(w.spectrum[0], 1.0, 1e-12);
  EXPECT_LT(max_abs(w.S * omega_of(1) * w.S.transpose() - omega_of(1)), 1e-10);
  EXPECT_LT(max_abs(w.S * w.S.transpose() - v), 1e-10);
}

TEST(Williamson, RecoversConstructedSpectrum) {
  const Matrix s0 = random_symplectic(2024, 2, 0.6);
  Vector d(4);
  d << 2, 2, 3, 3;
  const Matrix v = s0 * d.asDiagonal() * s0.transpose();
  const auto w = williamson(Matrix(0.5 * (v + v.transpose())));
  EXPECT_NEAR(w.spectrum[0], 3.0, 1e-10);
  EXPECT_NEAR(w.spectrum[1], 2.0, 1e-10);
  const auto r = williamson_residuals(w, v);
  EXPECT_LT(r.symplectic, 1e-10);
  EXPECT_LT(r.reconstruction, 1e-10);
}

TEST(Williamson, RandomResidualsAndDegenerateSpectra) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto rs = oracle::random_state(rng, n, 1.0, 10.0, 0.0, 0.5);
    const auto w = williamson(rs.state.cov());
    const auto r = williamson_residuals(w, rs.state.cov().matrix());
    EXPECT_LT(r.symplectic, 1e-10) << trial;
    EXPECT_LT(r.reconstruction, 1e-10) << trial;
  }
  // fully degenerate: any S is acceptable as long as the residuals vanish
  const Matrix s0 = random_symplectic(9, 3, 0.4);
  const Matrix v = 2.5 * s0 * s0.transpose();
  const auto w = williamson(Matrix(0.5 * (v + v.transpose())));
  for (double nu : w.spectrum.values) EXPECT_NEAR(nu, 2.5, 1e-10);
  EXPECT_LT(williamson_residuals(w, v).reconstruction, 1e-10);
}

TEST(Williamson, SpectrumInvariantUnderSymplecticCongruence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto rs = oracle::random_state(rng, n);
    const Matrix s = random_symplectic(rng(), n, 0.5);
    const Matrix v2 = s * rs.state.cov().matrix() * s.transpose();
    EXPECT_LT(oracle::sorted_rel_diff(symplectic_spectrum(Matrix(0.5 * (v2 + v2.transpose()))).values,
                                      rs.state.spectrum().values),
              1e-8);
  }
}

TEST(Williamson, NotPositiveDefiniteRejected) {
  Matrix v(2, 2);
  v << 1, 2, 2, 1;
  try {
    williamson(v);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_positive_definite);
  }
}

TEST(SymSqrt, Examples) {
  EXPECT_LT(max_abs(sym_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)), 1e-14);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 4;
  m(1, 1) = 9;
  const Matrix r = sym_sqrt(m);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-14);
}

TEST(SymSqrt, RandomSquaresBack) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix m = oracle::random_spd(rng, 2 + 2 * (trial % 3));
    const Matrix r = sym_sqrt(m);
    EXPECT_LT((r * r - m).norm() / m.norm(), 1e-10);
    EXPECT_LT(max_abs(r - r.transpose()), 1e-12);
  }
}

TEST(LogDetSolve, Examples) {
  Vector b(2);
  b << 1, 0;
  auto ls = spd_logdet_and_solve(Matrix(2.0 * Matrix::Identity(2, 2)), b);
  EXPECT_NEAR(ls.log_det, 2.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(ls.x(0), 0.5, 1e-14);
  EXPECT_NEAR(ls.x(1), 0.0, 1e-14);

  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = 4;
  b << 2, 2;
  ls = spd_logdet_and_solve(m, b);
  EXPECT_NEAR(ls.log_det, std::log(4.0), 1e-14);
  EXPECT_NEAR(ls.x(0), 2.0, 1e-14);
  EXPECT_NEAR(ls.x(1), 0.5, 1e-14);
}

TEST(LogDetSolve, MatchesCofactorOracle) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index m = 1 + trial % 6;
    const Matrix a = oracle::random_spd(rng, m, 0.5);
    Vector b(m);
    for (Eigen::Index i = 0; i < m; ++i) b(i) = normal(rng);
    const auto ls = spd_logdet_and_solve(a, b);
    EXPECT_NEAR(ls.log_det, std::log(oracle::cofactor_det(a)), 1e-10);
    const Vector x = oracle::cofactor_inverse(a) * b;
    EXPECT_LT((ls.x - x).norm(), 1e-8 * std::max(1.0, x.norm()));
  }
}

TEST(LogDetSolve, NamesFailingPivot) {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  try {
    spd_logdet(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_positive_definite);
    EXPECT_NE(std::string(e.what()).find("pivot 1"), std::string::npos) << e.what();
  }
}

TEST(RandomSymplectic, ZeroIntensityIsIdentity) {
  EXPECT_EQ(random_symplectic(1, 3, 0.0), Matrix::Identity(6, 6));
}

TEST(RandomSymplectic, PreservesForm) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + seed % 4;
    const Matrix s = random_symplectic(seed, n, 0.8);
    EXPECT_LT(max_abs(s * omega_of(n) * s.transpose() - omega_of(n)), 1e-10) << seed;
  }
}

TEST(RandomSymplectic, SeedIsDeterministic) {
  EXPECT_EQ(random_symplectic(42, 2, 0.5), random_symplectic(42, 2, 0.5));
  EXPECT_NE(random_symplectic(42, 2, 0.5), random_symplectic(43, 2, 0.5));
}

TEST(CovarianceCheck, VacuumIsValid) {
  EXPECT_TRUE(check_covariance(Matrix::Identity(2, 2)).empty());
  EXPECT_NO_THROW(CovMatrix::from(Matrix::Identity(4, 4)));
}

TEST(CovarianceCheck, BelowUncertaintyReported) {
  const auto v = check_covariance(Matrix(0.5 * Matrix::Identity(2, 2)));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, CovViolation::Kind::uncertainty);
  EXPECT_NE(v[0].message.find("0.5"), std::string::npos) << v[0].message;
}

TEST(CovarianceCheck, AsymmetryReportedWithValues) {
  Matrix m(2, 2);
  m << 2, 0.3, 0.1, 2;
  const auto v = check_covariance(m);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, CovViolation::Kind::asymmetric);
  EXPECT_NE(v[0].message.find("0.3"), std::string::npos);
}

TEST(CovarianceCheck, ShapeAndFiniteness) {
  EXPECT_EQ(check_covariance(Matrix::Identity(3, 3)).front().kind, CovViolation::Kind::shape);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = std::nan("");
  EXPECT_EQ(check_covariance(m).front().kind, CovViolation::Kind::non_finite);
}

TEST(CovarianceCheck, IndefiniteReported) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  bool found = false;
  for (const auto& v : check_covariance(m)) found |= v.kind == CovViolation::Kind::not_positive_definite;
  EXPECT_TRUE(found);
}

TEST(CovarianceCheck, FromThrowsUnphysical) {
  try {
    CovMatrix::from(Matrix(0.9 * Matrix::Identity(4, 4)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unphysical);
    EXPECT_NE(std::string(e.what()).find("nu_1"), std::string::npos);
  }
}

TEST(CovarianceCheck, PositiveButNotBonaFide) {
  // positive definite, symplectic eigenvalue sqrt(0.5 * 1.5) < 1
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 1.5;
  const auto v = check_covariance(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, CovViolation::Kind::uncertainty);
}

// Appendix inequalities on random positive-definite matrices.
TEST(MatrixInequalities, MinkowskiConcavityAndYoung) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index m = 2 * (1 + trial % 3);
    const Matrix a = oracle::random_spd(rng, m);
    const Matrix b = oracle::random_spd(rng, m);
    const double theta = unit(rng);
    const double md = static_cast<double>(m);
    const double da = std::exp(spd_logdet(a) / md);
    const double db = std::exp(spd_logdet(b) / md);
    const double dab = std::exp(spd_logdet(Matrix(a + b)) / md);
    EXPECT_GE(dab, (da + db) * (1 - 1e-12));
    const Matrix mix = theta * a + (1 - theta) * b;
    EXPECT_GE(std::exp(spd_logdet(mix) / md), (theta * da + (1 - theta) * db) * (1 - 1e-12));
    const double lhs = spd_logdet(mix);
    const double rhs = theta * spd_logdet(a) + (1 - theta) * spd_logdet(b);
    EXPECT_GE(lhs, rhs - 1e-12 * std::max(1.0, std::abs(rhs)));
    const double x = unit(rng) * 10;
    const double y = unit(rng) * 10;
    EXPECT_LE(std::pow(x, theta) * std::pow(y, 1 - theta), (theta * x + (1 - theta) * y) * (1 + 1e-12));
  }
}
