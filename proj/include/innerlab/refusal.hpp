#pragma once

#include <stdexcept>
#include <string>

namespace innerlab {

/// A computation declined because its input falls outside the regime the
/// algorithm is valid for (infinite entropy, non-porous support, ...).
/// Distinct from std::invalid_argument, which signals malformed input.
class Refusal : public std::runtime_error {
 public:
  explicit Refusal(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace innerlab
