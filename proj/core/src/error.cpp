#include "cforge/error.hpp"

namespace cforge {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::verification: return "verification";
    case ErrorKind::input: return "input";
    case ErrorKind::fit: return "fit";
    case ErrorKind::solver: return "solver";
    case ErrorKind::pipeline: return "pipeline";
    case ErrorKind::domain: return "domain";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace cforge
