#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "clt/error.hpp"

namespace clt {

/// Exact base-10 fixed-point number: `units` counts of 10^(-q).
/// All model parameters (weights, thresholds, margins) live on this grid and
/// every operation on it is exact integer arithmetic; nothing is ever rounded
/// after construction.
struct ScaledValue {
    std::int64_t units = 0;
    std::int32_t q = 0;

    ScaledValue() = default;
    ScaledValue(std::int64_t units_, std::int32_t q_) : units(units_), q(q_) {}

    static ScaledValue zero(std::int32_t q) { return {0, q}; }
    static ScaledValue one(std::int32_t q);

    ScaledValue operator+(const ScaledValue& o) const;
    ScaledValue operator-(const ScaledValue& o) const;
    bool operator==(const ScaledValue& o) const;
    bool operator<(const ScaledValue& o) const;
    bool operator<=(const ScaledValue& o) const;
    bool operator>(const ScaledValue& o) const { return o < *this; }
    bool operator>=(const ScaledValue& o) const { return o <= *this; }

    /// Multiply by 10^k (k >= 0). Exact; throws PrecisionOverflow on overflow.
    ScaledValue scale_pow10(int k) const;
    /// Remainder modulo 10^k units (k >= 0); defined for units >= 0.
    ScaledValue mod_pow10_units(int k) const;

    bool negative() const { return units < 0; }
    double to_double() const;
    /// Decimal string, fraction zero-padded to q digits ("0.467", "1.000").
    std::string to_string() const;
};

/// 10^k as int64; throws PrecisionOverflow for k outside [0, 18].
std::int64_t pow10_i64(int k);

/// Parse a decimal literal ("0.467", "1", "12.5") at precision q.
/// Digits beyond q must be zero, otherwise MoreThanQDigits.
ScaledValue scaled_from_decimal_string(std::string_view text, std::int32_t q);

/// Same, but rejects negative values (parameter contexts).
ScaledValue scaled_param_from_decimal_string(std::string_view text, std::int32_t q);

} // namespace clt
