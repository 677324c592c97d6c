#pragma once

#include <cstdint>
#include <vector>

namespace clt {

/// Counter-based deterministic RNG (SplitMix64 output function over a keyed
/// counter). Pure 64-bit integer arithmetic, so streams are reproducible
/// bit-for-bit across platforms and independent of call interleaving: every
/// consumer derives its own substream key instead of sharing mutable state.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    /// Derive an independent substream key, e.g. per node or per sample.
    static std::uint64_t derive(std::uint64_t key, std::uint64_t tag) {
        return mix(key + 0x9E3779B97F4A7C15ULL * (tag + 1));
    }

    Rng substream(std::uint64_t tag) const { return Rng(derive(key_, tag)); }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix(key_ ^ counter_);
    }

    /// Uniform in [0, n); unbiased via masked rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~0ULL;
        std::uint64_t limit = n - 1;
        int bits = 0;
        while (limit >> bits) ++bits;
        mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    /// Choose k distinct indices from [0, n) by partial Fisher-Yates.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k) {
        std::vector<std::uint32_t> idx(n);
        for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
        if (k > n) k = n;
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint32_t j = i + static_cast<std::uint32_t>(next_below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace clt
