#include "clt/scaled.hpp"

#include <cctype>
#include <cstdlib>

namespace clt {

namespace {

void check_same_q(const ScaledValue& a, const ScaledValue& b) {
    if (a.q != b.q)
        fail(ErrorCode::PrecisionOverflow,
             "mixed precisions: q=" + std::to_string(a.q) + " vs q=" + std::to_string(b.q));
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        fail(ErrorCode::PrecisionOverflow, "fixed-point addition overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        fail(ErrorCode::PrecisionOverflow, "fixed-point multiplication overflow");
    return r;
}

} // namespace

std::int64_t pow10_i64(int k) {
    if (k < 0 || k > 18)
        fail(ErrorCode::PrecisionOverflow, "10^" + std::to_string(k) + " out of int64 range");
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

ScaledValue ScaledValue::one(std::int32_t q) { return {pow10_i64(q), q}; }

ScaledValue ScaledValue::operator+(const ScaledValue& o) const {
    check_same_q(*this, o);
    return {checked_add(units, o.units), q};
}

ScaledValue ScaledValue::operator-(const ScaledValue& o) const {
    check_same_q(*this, o);
    return {checked_add(units, -o.units), q};
}

bool ScaledValue::operator==(const ScaledValue& o) const {
    check_same_q(*this, o);
    return units == o.units;
}

bool ScaledValue::operator<(const ScaledValue& o) const {
    check_same_q(*this, o);
    return units < o.units;
}

bool ScaledValue::operator<=(const ScaledValue& o) const {
    check_same_q(*this, o);
    return units <= o.units;
}

ScaledValue ScaledValue::scale_pow10(int k) const {
    return {checked_mul(units, pow10_i64(k)), q};
}

ScaledValue ScaledValue::mod_pow10_units(int k) const {
    if (units < 0)
        fail(ErrorCode::Negative, "modulo of a negative fixed-point value");
    return {units % pow10_i64(k), q};
}

double ScaledValue::to_double() const {
    return static_cast<double>(units) / static_cast<double>(pow10_i64(q));
}

std::string ScaledValue::to_string() const {
    std::int64_t u = units;
    std::string sign;
    if (u < 0) {
        sign = "-";
        u = -u;
    }
    const std::int64_t scale = pow10_i64(q);
    std::string whole = std::to_string(u / scale);
    if (q == 0) return sign + whole;
    std::string frac = std::to_string(u % scale);
    frac.insert(frac.begin(), static_cast<size_t>(q) - frac.size(), '0');
    return sign + whole + "." + frac;
}

ScaledValue scaled_from_decimal_string(std::string_view text, std::int32_t q) {
    if (q < 0 || q > 18)
        fail(ErrorCode::PrecisionOverflow, "precision q out of range");
    size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    std::int64_t whole = 0;
    bool any_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = checked_add(checked_mul(whole, 10), text[pos] - '0');
        any_digit = true;
        ++pos;
    }
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            int d = text[pos] - '0';
            if (frac_digits < q) {
                frac = frac * 10 + d;
                ++frac_digits;
            } else if (d != 0) {
                fail(ErrorCode::MoreThanQDigits,
                     "literal '" + std::string(text) + "' needs more than " +
                         std::to_string(q) + " fractional digits");
            }
            any_digit = true;
            ++pos;
        }
    }
    if (!any_digit || pos != text.size())
        fail(ErrorCode::InvalidInput, "not a decimal literal: '" + std::string(text) + "'");
    while (frac_digits < q) {
        frac = checked_mul(frac, 10);
        ++frac_digits;
    }
    std::int64_t u = checked_add(checked_mul(whole, pow10_i64(q)), frac);
    return {neg ? -u : u, q};
}

ScaledValue scaled_param_from_decimal_string(std::string_view text, std::int32_t q) {
    ScaledValue v = scaled_from_decimal_string(text, q);
    if (v.negative())
        fail(ErrorCode::Negative, "negative value '" + std::string(text) + "' not allowed here");
    return v;
}

} // namespace clt
