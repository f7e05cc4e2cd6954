#pragma once

#include <stdexcept>
#include <string>

namespace flagvar {

enum class ErrorKind {
  Configuration,  // unsupported family / rank
  Usage,          // caller passed inconsistent arguments
  Domain,         // value outside the admissible domain (nonpositive metric, ...)
  Consistency,    // two computational paths disagree
  Accuracy,       // truncation or convergence bound exceeded
  Precondition,   // mathematical hypothesis not satisfied (e.g. non-geodesic X)
  Infeasible,     // empty interval where one is guaranteed
  Witness,        // index form is not negative
  Bracket,        // bisection bracket without sign change
  Search,         // event not found along a trajectory
  Parameter,      // parameter outside the admissible window
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Witness: return "witness";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::Search: return "search";
    case ErrorKind::Parameter: return "parameter";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flagvar
