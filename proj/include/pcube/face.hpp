#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "pcube/bits.hpp"

namespace pcube {

/// A p-face of the N-cube: a word over {0,1,*} with exactly p stars.
/// Storage is two bitmasks so that antipode and shadow generation are pure
/// bit operations; value bits are zero wherever the star bit is set.
struct Face {
    Bits128 stars;   // positions holding *
    Bits128 vals;    // value bits at non-star positions
    uint8_t n = 0;   // word length (cube dimension)

    bool operator==(const Face&) const = default;

    int star_count() const { return stars.popcount(); }

    char symbol(unsigned i) const {
        if (stars.test(i)) return '*';
        return vals.test(i) ? '1' : '0';
    }

    std::string word() const {
        std::string s(n, '0');
        for (unsigned i = 0; i < n; ++i) s[i] = symbol(i);
        return s;
    }

    static Face from_word(const std::string& w) {
        if (w.size() > 128) throw std::invalid_argument("Face: word longer than 128");
        Face f;
        f.n = uint8_t(w.size());
        for (unsigned i = 0; i < w.size(); ++i) {
            switch (w[i]) {
                case '*': f.stars.set(i); break;
                case '1': f.vals.set(i); break;
                case '0': break;
                default: throw std::invalid_argument("Face: bad symbol in word");
            }
        }
        return f;
    }
};

/// Flip every 0<->1, keep stars fixed (the antipodal map x -> x + 1...1 with
/// the convention * + 1 = *). An involution.
inline Face antipode(const Face& f) {
    Face g = f;
    g.vals = (f.vals ^ ~f.stars) & Bits128::low_bits(f.n);
    return g;
}

/// Word order with 0 < 1 < *, leftmost position most significant.
inline bool face_less(const Face& a, const Face& b) {
    Bits128 diff = (a.stars ^ b.stars) | (a.vals ^ b.vals);
    if (!diff.any()) return false;
    unsigned i = unsigned(diff.ctz());
    auto rank = [i](const Face& f) { return f.stars.test(i) ? 2 : int(f.vals.test(i)); };
    return rank(a) < rank(b);
}

struct FaceHash {
    size_t operator()(const Face& f) const {
        uint64_t h = splitmix64(f.stars.lo);
        h = splitmix64(h ^ f.stars.hi);
        h = splitmix64(h ^ f.vals.lo);
        h = splitmix64(h ^ f.vals.hi ^ f.n);
        return size_t(h);
    }
};

/// Canonical representative of the antipodal class {f, antipode(f)}:
/// the lexicographically smaller of the pair.
struct ProjFace {
    Face rep;

    ProjFace() = default;
    explicit ProjFace(const Face& f) {
        Face a = antipode(f);
        rep = face_less(a, f) ? a : f;
    }

    bool operator==(const ProjFace&) const = default;
    std::string word() const { return rep.word(); }
};

inline bool proj_less(const ProjFace& a, const ProjFace& b) { return face_less(a.rep, b.rep); }

struct ProjFaceHash {
    size_t operator()(const ProjFace& f) const { return FaceHash{}(f.rep); }
};

/// All (p-1)-faces obtained by fixing one star to 0 or 1. Requires p >= 1.
inline std::vector<Face> lower_shadow(const Face& f) {
    if (f.star_count() == 0) throw std::invalid_argument("lower_shadow: face has no stars");
    std::vector<Face> out;
    out.reserve(size_t(2 * f.star_count()));
    Bits128 s = f.stars;
    while (s.any()) {
        unsigned i = unsigned(s.ctz());
        s.reset(i);
        Face g = f;
        g.stars.reset(i);
        out.push_back(g);          // star -> 0
        g.vals.set(i);
        out.push_back(g);          // star -> 1
    }
    return out;
}

/// All (p+1)-faces obtained by starring one fixed position. Requires p <= n-1.
inline std::vector<Face> upper_shadow(const Face& f) {
    Bits128 fixed = ~f.stars & Bits128::low_bits(f.n);
    if (!fixed.any()) throw std::invalid_argument("upper_shadow: face is all stars");
    std::vector<Face> out;
    out.reserve(size_t(f.n - f.star_count()));
    while (fixed.any()) {
        unsigned i = unsigned(fixed.ctz());
        fixed.reset(i);
        Face g = f;
        g.stars.set(i);
        g.vals.reset(i);
        out.push_back(g);
    }
    return out;
}

enum class ShadowDir { Up, Down };

/// Shadow of a single antipodal class, as a deduplicated set of classes.
inline std::vector<ProjFace> proj_shadow(const ProjFace& f, ShadowDir dir) {
    std::vector<Face> raw = dir == ShadowDir::Up ? upper_shadow(f.rep) : lower_shadow(f.rep);
    std::unordered_set<ProjFace, ProjFaceHash> seen;
    std::vector<ProjFace> out;
    for (const Face& g : raw) {
        ProjFace pg(g);
        if (seen.insert(pg).second) out.push_back(pg);
    }
    return out;
}

/// Shadow of a set of classes of equal dimension, deduplicated across the set.
inline std::vector<ProjFace> proj_shadow_of_set(const std::vector<ProjFace>& a, ShadowDir dir) {
    if (a.empty()) return {};
    int p = a.front().rep.star_count();
    std::unordered_set<ProjFace, ProjFaceHash> seen;
    std::vector<ProjFace> out;
    for (const ProjFace& f : a) {
        if (f.rep.star_count() != p)
            throw std::invalid_argument("proj_shadow_of_set: mixed face dimensions");
        std::vector<Face> raw =
            dir == ShadowDir::Up ? upper_shadow(f.rep) : lower_shadow(f.rep);
        for (const Face& g : raw) {
            ProjFace pg(g);
            if (seen.insert(pg).second) out.push_back(pg);
        }
    }
    return out;
}

/// Exact nonnegative rational, for expansion ratios.
struct Ratio {
    uint64_t num = 0;
    uint64_t den = 1;

    Ratio() = default;
    Ratio(uint64_t n, uint64_t d) : num(n), den(d) {
        if (d == 0) throw std::invalid_argument("Ratio: zero denominator");
        uint64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return double(num) / double(den); }

    friend bool operator==(const Ratio& a, const Ratio& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Ratio& a, const Ratio& b) {
        return (unsigned __int128)a.num * b.den < (unsigned __int128)b.num * a.den;
    }
    friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
};

/// |shadow(A)| / |A| as an exact rational. A must be non-empty and of uniform
/// dimension.
inline Ratio expansion_ratio(const std::vector<ProjFace>& a, ShadowDir dir) {
    if (a.empty()) throw std::invalid_argument("expansion_ratio: empty set");
    return Ratio(proj_shadow_of_set(a, dir).size(), a.size());
}

/// Number of antipodal classes of p-faces: C(n,p) 2^(n-p) / 2 for p < n,
/// 1 for p = n. Throws if the count does not fit in 64 bits.
inline uint64_t proj_face_count(int n, int p) {
    if (n < 1 || n > 128 || p < 0 || p > n)
        throw std::invalid_argument("proj_face_count: p out of range");
    if (p == n) return 1;
    unsigned __int128 c = 1;
    for (int k = 1; k <= p; ++k) {
        c = c * (unsigned __int128)(n - k + 1) / (unsigned __int128)k;
        if (c > (unsigned __int128)1 << 100) throw std::overflow_error("proj_face_count: overflow");
    }
    for (int k = 0; k < n - p - 1; ++k) {  // 2^(n-p) / 2
        c <<= 1;
        if (c > (unsigned __int128)~uint64_t{0}) throw std::overflow_error("proj_face_count: overflow");
    }
    return uint64_t(c);
}

/// Every antipodal class of p-faces exactly once, ordered by representative
/// word. Count is C(N,p) 2^(N-p) / 2 for p < N and 1 for p = N.
inline std::vector<ProjFace> enumerate_proj_faces(int n, int p) {
    if (n < 1 || n > 128 || p < 0 || p > n)
        throw std::invalid_argument("enumerate_proj_faces: p out of range");
    uint64_t count = proj_face_count(n, p);
    if (count > (uint64_t{1} << 26))
        throw std::length_error("enumerate_proj_faces: face count infeasible");
    std::vector<ProjFace> out;
    out.reserve(count);
    // iterate star-position combinations, then values on the free positions
    std::vector<int> comb(p);
    std::iota(comb.begin(), comb.end(), 0);
    for (;;) {
        Face base;
        base.n = uint8_t(n);
        for (int i : comb) base.stars.set(unsigned(i));
        std::vector<unsigned> free_pos;
        for (int i = 0; i < n; ++i)
            if (!base.stars.test(unsigned(i))) free_pos.push_back(unsigned(i));
        uint64_t combos = uint64_t{1} << free_pos.size();
        for (uint64_t v = 0; v < combos; ++v) {
            Face f = base;
            for (size_t j = 0; j < free_pos.size(); ++j)
                if ((v >> j) & 1) f.vals.set(free_pos[j]);
            if (!face_less(antipode(f), f)) out.push_back(ProjFace{f});
        }
        // next p-combination of [0, n)
        if (p == 0) break;
        int i = p - 1;
        while (i >= 0 && comb[i] == n - p + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < p; ++j) comb[j] = comb[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(), proj_less);
    return out;
}

}  // namespace pcube
