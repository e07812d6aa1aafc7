#include "lich/error.hpp"

namespace lich {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::order: return "order";
    case ErrorKind::index: return "index";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::capability: return "capability";
    case ErrorKind::solver: return "solver";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace lich
