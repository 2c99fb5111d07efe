#pragma once

#include <stdexcept>
#include <string>

namespace tailcmp {

/// Argument outside the mathematical domain of an operation (e.g. C(n, k) with k > n).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (rationals, distributions, ranges).
class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An identity that must hold exactly was observed to fail. Always a bug.
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace tailcmp
