#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussbound {

enum class ErrorKind {
  invalid_argument,
  not_positive_definite,
  numerical_degeneracy,
  decomposition_failure,
  domain,
  divergence,
  unphysical,
  unsupported,
  precondition,
  tail_mass,
  not_psd,
  numerical,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::numerical_degeneracy: return "numerical-degeneracy";
    case ErrorKind::decomposition_failure: return "decomposition-failure";
    case ErrorKind::domain: return "domain";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::unphysical: return "unphysical";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::tail_mass: return "tail-mass";
    case ErrorKind::not_psd: return "not-psd";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gaussbound
