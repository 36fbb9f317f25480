#pragma once

#include <stdexcept>
#include <string>

namespace bca {

// Bad user input: malformed literals, non-integrable structure equations,
// unknown selectors. CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical invariant failed (e.g. a quotient denominator escaping its
// numerator). Always a bug, never a user problem. CLI maps this to exit 2.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace bca
