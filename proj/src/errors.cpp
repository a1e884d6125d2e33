#include "susy/errors.hpp"

#include <sstream>

namespace susy {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degenerate: return "degenerate-transformation";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Unsupported: return "unsupported-operation";
    case ErrorKind::InconclusiveFit: return "inconclusive-fit";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Precondition: return "precondition";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

NonConvergenceError::NonConvergenceError(const std::string& message, double where)
    : Error(ErrorKind::NonConvergence, message), where_(where) {}

namespace {
std::string with_location(const std::string& message, double location,
                          std::optional<std::size_t> stage) {
  std::ostringstream os;
  os << message << " (x = " << location;
  if (stage) os << ", stage " << *stage;
  os << ")";
  return os.str();
}
}  // namespace

DegenerateTransformError::DegenerateTransformError(const std::string& message, double location,
                                                   std::optional<std::size_t> stage)
    : Error(ErrorKind::Degenerate, with_location(message, location, stage)),
      location_(location),
      stage_(stage) {}

}  // namespace susy
