#pragma once

#include <stdexcept>
#include <string>

namespace mural {

/// Raised for malformed user input: files that fail schema validation,
/// configs that violate their invariants, stale state handed to a command.
/// The CLI maps this to exit code 2; everything else is an internal error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mural
