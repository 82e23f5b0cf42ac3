#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace pcube {

/// 128-bit mask, wide enough for faces of cubes up to dimension 128.
struct Bits128 {
    uint64_t lo = 0;
    uint64_t hi = 0;

    friend constexpr Bits128 operator&(Bits128 a, Bits128 b) { return {a.lo & b.lo, a.hi & b.hi}; }
    friend constexpr Bits128 operator|(Bits128 a, Bits128 b) { return {a.lo | b.lo, a.hi | b.hi}; }
    friend constexpr Bits128 operator^(Bits128 a, Bits128 b) { return {a.lo ^ b.lo, a.hi ^ b.hi}; }
    constexpr Bits128 operator~() const { return {~lo, ~hi}; }
    constexpr bool operator==(const Bits128&) const = default;

    constexpr bool any() const { return lo != 0 || hi != 0; }
    constexpr bool test(unsigned i) const {
        return i < 64 ? (lo >> i) & 1u : (hi >> (i - 64)) & 1u;
    }
    constexpr void set(unsigned i) {
        if (i < 64) lo |= uint64_t{1} << i; else hi |= uint64_t{1} << (i - 64);
    }
    constexpr void reset(unsigned i) {
        if (i < 64) lo &= ~(uint64_t{1} << i); else hi &= ~(uint64_t{1} << (i - 64));
    }
    constexpr int popcount() const { return std::popcount(lo) + std::popcount(hi); }
    /// Index of lowest set bit; 128 if none.
    constexpr int ctz() const {
        if (lo) return std::countr_zero(lo);
        if (hi) return 64 + std::countr_zero(hi);
        return 128;
    }
    static constexpr Bits128 low_bits(unsigned n) {
        if (n == 0) return {};
        if (n < 64) return {(uint64_t{1} << n) - 1, 0};
        if (n == 64) return {~uint64_t{0}, 0};
        if (n < 128) return {~uint64_t{0}, (uint64_t{1} << (n - 64)) - 1};
        return {~uint64_t{0}, ~uint64_t{0}};
    }
};

inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream. Wraps std::mt19937_64 (bit-exact per the
/// standard) and avoids std::uniform_int_distribution, whose output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() { return eng_(); }

    /// Uniform integer in [0, bound). bound must be nonzero.
    uint64_t uniform_below(uint64_t bound) {
        // rejection sampling to kill modulo bias
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = eng_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Independent stream derived from the original seed and a tag;
    /// insensitive to how much this stream has already been consumed.
    Rng fork(uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag))); }

private:
    uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace pcube
