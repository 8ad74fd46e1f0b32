// common.hpp -- shared error type and small helpers
#pragma once

#include <stdexcept>
#include <string>

namespace riskwave {

/// Thrown for all domain errors: bad inputs, contract violations,
/// numerical failures. The message carries the offending location.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) throw Error(message);
}

} // namespace detail
} // namespace riskwave
