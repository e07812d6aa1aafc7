#pragma once

#include <stdexcept>
#include <string>

namespace lich {

// Failure categories. The CLI maps them onto exit statuses.
enum class ErrorKind {
  shape,       // dimension/order mismatch between operands
  order,       // tensor order unsuitable for the operation
  index,       // slot or multi-index out of range
  symmetry,    // input violates a required symmetry
  dimension,   // manifold dimension outside the supported range
  degenerate,  // degenerate input (dependent plane, zero field)
  capability,  // request outside what the discretizations support
  solver,      // iterative solver did not converge
  config       // unparseable configuration or catalog string
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace lich
