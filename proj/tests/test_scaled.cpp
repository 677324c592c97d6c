#include <doctest.h>

#include "clt/rng.hpp"
#include "clt/scaled.hpp"

using namespace clt;

TEST_CASE("decimal parsing reads positions exactly") {
    CHECK(scaled_from_decimal_string("0.467", 3).units == 467);
    CHECK(scaled_from_decimal_string("1", 3).units == 1000);
    CHECK(scaled_from_decimal_string("12.5", 3).units == 12500);
    CHECK(scaled_from_decimal_string("0.4670", 3).units == 467); // trailing zero needs no digit
    CHECK(scaled_from_decimal_string("-0.25", 2).units == -25);
    CHECK(scaled_from_decimal_string("0", 1).units == 0);
}

TEST_CASE("literals needing more than q digits are rejected") {
    CHECK_THROWS_AS(scaled_from_decimal_string("0.4675", 3), Error);
    try {
        scaled_from_decimal_string("0.4675", 3);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MoreThanQDigits);
    }
    CHECK_THROWS_AS(scaled_param_from_decimal_string("-0.1", 3), Error);
    try {
        scaled_param_from_decimal_string("-0.1", 3);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Negative);
    }
    CHECK_THROWS_AS(scaled_from_decimal_string("abc", 3), Error);
    CHECK_THROWS_AS(scaled_from_decimal_string("1.2.3", 3), Error);
}

TEST_CASE("string round-trip zero-pads to q digits") {
    CHECK(ScaledValue{467, 3}.to_string() == "0.467");
    CHECK(ScaledValue{1000, 3}.to_string() == "1.000");
    CHECK(ScaledValue{-25, 2}.to_string() == "-0.25");
    CHECK(ScaledValue{5, 0}.to_string() == "5");
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        std::int32_t q = static_cast<std::int32_t>(rng.next_int(0, 6));
        ScaledValue v{rng.next_int(-1000000, 1000000), q};
        CHECK(scaled_from_decimal_string(v.to_string(), q) == v);
    }
}

namespace {

// Independent oracle: exact rational arithmetic in __int128 over the common
// denominator 10^q.
struct Rat128 {
    __int128 num;
    __int128 den;
};

Rat128 rat(std::int64_t units, std::int32_t q) {
    return {static_cast<__int128>(units), static_cast<__int128>(pow10_i64(q))};
}

bool rat_le(const Rat128& a, const Rat128& b) { return a.num * b.den <= b.num * a.den; }

} // namespace

TEST_CASE("fixed-point arithmetic agrees with rational arithmetic on a million triples") {
    Rng rng(11);
    for (int i = 0; i < 1000000; ++i) {
        std::int32_t q = static_cast<std::int32_t>(rng.next_int(1, 6));
        ScaledValue a{rng.next_int(-100000, 100000), q};
        ScaledValue b{rng.next_int(-100000, 100000), q};
        int op = static_cast<int>(rng.next_int(0, 4));
        switch (op) {
            case 0: { // add
                ScaledValue c = a + b;
                Rat128 r{rat(a.units, q).num + rat(b.units, q).num, rat(a.units, q).den};
                REQUIRE(static_cast<__int128>(c.units) == r.num);
                break;
            }
            case 1: { // subtract
                ScaledValue c = a - b;
                REQUIRE(c.units == a.units - b.units);
                break;
            }
            case 2: { // compare
                bool le = a <= b;
                REQUIRE(le == rat_le(rat(a.units, q), rat(b.units, q)));
                break;
            }
            case 3: { // modulo by a power of ten (nonnegative values)
                int k = static_cast<int>(rng.next_int(0, 4));
                std::int64_t u = a.units < 0 ? -a.units : a.units;
                ScaledValue c = ScaledValue{u, q}.mod_pow10_units(k);
                REQUIRE(c.units == u % pow10_i64(k));
                break;
            }
            default: { // scale by a power of ten
                int k = static_cast<int>(rng.next_int(0, 3));
                ScaledValue c = a.scale_pow10(k);
                REQUIRE(static_cast<__int128>(c.units) ==
                        static_cast<__int128>(a.units) * pow10_i64(k));
                break;
            }
        }
    }
}

TEST_CASE("overflow is an error, never silent wraparound") {
    ScaledValue big{std::int64_t{1} << 60, 3};
    CHECK_THROWS_AS(big.scale_pow10(6), Error);
    CHECK_THROWS_AS(pow10_i64(19), Error);
}

TEST_CASE("mixed precisions do not silently combine") {
    ScaledValue a{1, 2}, b{1, 3};
    CHECK_THROWS_AS((void)(a + b), Error);
    CHECK_THROWS_AS((void)(a <= b), Error);
}
