#ifndef HODT_COMMON_HPP
#define HODT_COMMON_HPP

#include <stdexcept>
#include <string>

namespace hodt {

/// Bad caller-supplied parameters (contradictory flags, out-of-range sizes).
struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested embedding dimension exceeds the configured maximum.
struct DimensionTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A persisted model references rules or fields that do not exist.
struct CorruptModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal invariant violated (e.g. a feasible configuration with no valid root).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace hodt

#endif
