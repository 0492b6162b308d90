/*
 * Scalar functions of a symplectic eigenvalue x >= 1 and a power p >= 0.
 *
 *   Phi^{+-}_p(x) = (x+1)^p +- (x-1)^p
 *   G_p(x)        = 2^p / Phi^-_p(x)              Tr sigma(x)^p for a thermal mode
 *   Lambda_p(x)   = Phi^+_p(x) / Phi^-_p(x)       eigenvalue of the normalized power
 *   Gamma_p(x)    = [Phi^+_p(x) Phi^-_p(x)]^{-1/2}
 *   Psi_p(x, y)   = [Phi^+_p(x) Phi^-_{1-p}(y)]^{1/n}
 *
 * With eta = (x-1)/(x+1) every function is evaluated as (x+1)^p (1 +- eta^p),
 * in log form. (x-1)^p is taken as 0 at x = 1 for every p >= 0, the limit from
 * p > 0, so a pure mode gives Phi^{+-}_0(1) = 1. Inputs within
 * kPhysicalTolerance of 1 count as exactly 1.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "gaussbound/error.hpp"
#include "gaussbound/symplectic.hpp"

namespace gaussbound {

namespace detail {

inline double checked_eigenvalue(double x) {
  if (!(x >= 1.0 - kPhysicalTolerance) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "symplectic eigenvalue " << x << " is below 1";
    throw Error(ErrorKind::domain, msg.str());
  }
  return x <= 1.0 + kPhysicalTolerance ? 1.0 : x;
}

inline void check_power(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "power " << p << " must be finite and >= 0";
    throw Error(ErrorKind::domain, msg.str());
  }
}

/// log Phi^+_p(x); x already checked.
inline double log_phi_plus_unchecked(double p, double x) {
  if (x == 1.0) return p * std::log(2.0);
  const double log_eta = std::log((x - 1.0) / (x + 1.0));
  return p * std::log(x + 1.0) + std::log1p(std::exp(p * log_eta));
}

/// log Phi^-_p(x); -inf exactly when p = 0 and x > 1.
inline double log_phi_minus_unchecked(double p, double x) {
  if (x == 1.0) return p * std::log(2.0);
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  const double log_eta = std::log((x - 1.0) / (x + 1.0));
  return p * std::log(x + 1.0) + std::log(-std::expm1(p * log_eta));
}

inline void check_not_divergent(double p, double x, const char* what) {
  if (p == 0.0 && x > 1.0) {
    std::ostringstream msg;
    msg.precision(12);
    msg << what << " diverges at p = 0 for the mixed eigenvalue " << x;
    throw Error(ErrorKind::divergence, msg.str());
  }
}

}  // namespace detail

inline double phi_plus(double p, double x) {
  detail::check_power(p);
  return std::exp(detail::log_phi_plus_unchecked(p, detail::checked_eigenvalue(x)));
}

inline double phi_minus(double p, double x) {
  detail::check_power(p);
  return std::exp(detail::log_phi_minus_unchecked(p, detail::checked_eigenvalue(x)));
}

inline double log_g_func(double p, double x) {
  detail::check_power(p);
  x = detail::checked_eigenvalue(x);
  detail::check_not_divergent(p, x, "G_p");
  return p * std::log(2.0) - detail::log_phi_minus_unchecked(p, x);
}

inline double g_func(double p, double x) { return std::exp(log_g_func(p, x)); }

inline double lambda_func(double p, double x) {
  detail::check_power(p);
  x = detail::checked_eigenvalue(x);
  detail::check_not_divergent(p, x, "Lambda_p");
  if (x == 1.0) return 1.0;
  const double p_log_eta = p * std::log((x - 1.0) / (x + 1.0));
  return (1.0 + std::exp(p_log_eta)) / -std::expm1(p_log_eta);
}

inline double log_gamma_func(double p, double x) {
  detail::check_power(p);
  x = detail::checked_eigenvalue(x);
  detail::check_not_divergent(p, x, "Gamma_p");
  return -0.5 * (detail::log_phi_plus_unchecked(p, x) + detail::log_phi_minus_unchecked(p, x));
}

inline double gamma_func(double p, double x) { return std::exp(log_gamma_func(p, x)); }

inline double log_psi_func(double p, double x, double y, std::size_t modes) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "Psi_p needs 0 <= p <= 1, got " << p;
    throw Error(ErrorKind::domain, msg.str());
  }
  if (modes == 0) throw Error(ErrorKind::invalid_argument, "Psi_p needs at least one mode");
  x = detail::checked_eigenvalue(x);
  y = detail::checked_eigenvalue(y);
  detail::check_not_divergent(1.0 - p, y, "Psi_p (through Phi^-_{1-p})");
  return (detail::log_phi_plus_unchecked(p, x) + detail::log_phi_minus_unchecked(1.0 - p, y)) /
         static_cast<double>(modes);
}

inline double psi_func(double p, double x, double y, std::size_t modes) {
  return std::exp(log_psi_func(p, x, y, modes));
}

}  // namespace gaussbound
