#pragma once

#include <stdexcept>
#include <string>

namespace charclass {

// Caller broke a documented precondition (bad shape, inhomogeneous input,
// non-primitive class, degenerate form, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would need a degree above the presentation's cap.
class CapExceeded : public std::out_of_range {
 public:
  CapExceeded(int degree, int cap)
      : std::out_of_range("degree " + std::to_string(degree) + " exceeds cap " + std::to_string(cap)),
        degree_(degree),
        cap_(cap) {}
  int degree() const { return degree_; }
  int cap() const { return cap_; }

 private:
  int degree_;
  int cap_;
};

// Input text (polynomial expression or data file) is malformed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation needs an external data file that was not supplied.
class DataRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace charclass
