#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcube/bits.hpp"
#include "pcube/code.hpp"

namespace pcube {

/// A random family of base-check subsets with OR semantics: an amplified
/// check is violated iff any of its constituents is. Base checks are
/// numbered 0..m_x-1 (X checks) then m_x..m-1 (Z checks).
struct AmplifiedCheckSet {
    std::vector<std::vector<uint32_t>> subsets;  // each sorted, size subset_size
    size_t subset_size = 0;
    size_t m_base = 0;
    uint64_t seed = 0;

    size_t m_prime() const { return subsets.size(); }
    bool empty() const { return subsets.empty(); }

    /// One line per subset, preceded by a header with seed and sizes.
    std::string to_text() const {
        std::ostringstream os;
        os << "amplified m_prime=" << subsets.size() << " subset_size=" << subset_size
           << " m_base=" << m_base << " seed=" << seed << '\n';
        for (const auto& s : subsets) {
            for (size_t i = 0; i < s.size(); ++i) {
                if (i) os << ' ';
                os << s[i];
            }
            os << '\n';
        }
        return os.str();
    }
};

/// m_prime subsets of subset_size distinct base checks, uniform and
/// independent across subsets. Reproducible from the seed.
inline AmplifiedCheckSet amplify(const CssCode& code, size_t subset_size, size_t m_prime,
                                 uint64_t seed) {
    if (subset_size < 1 || m_prime < 1)
        throw std::invalid_argument("amplify: subset_size and m_prime must be positive");
    size_t m_base = code.m();
    if (subset_size > m_base)
        throw std::invalid_argument("amplify: subset_size exceeds base check count");
    AmplifiedCheckSet amp;
    amp.subset_size = subset_size;
    amp.m_base = m_base;
    amp.seed = seed;
    amp.subsets.reserve(m_prime);
    Rng rng(seed);
    std::vector<uint32_t> cur;
    for (size_t s = 0; s < m_prime; ++s) {
        cur.clear();
        while (cur.size() < subset_size) {
            // repeats add nothing under OR; resample duplicates
            auto c = uint32_t(rng.uniform_below(m_base));
            if (std::find(cur.begin(), cur.end(), c) == cur.end()) cur.push_back(c);
        }
        std::sort(cur.begin(), cur.end());
        amp.subsets.push_back(cur);
    }
    return amp;
}

/// The paper-scale defaults: subset size ceil(1/s), family size ceil(n log^2 n).
struct AmplifyDefaults {
    size_t subset_size;
    size_t m_prime;
};
inline AmplifyDefaults amplify_defaults(double soundness, size_t n) {
    if (soundness <= 0) throw std::invalid_argument("amplify_defaults: soundness must be positive");
    double logn = std::log(double(n));
    return AmplifyDefaults{size_t(std::ceil(1.0 / soundness)),
                           size_t(std::ceil(double(n) * logn * logn))};
}

/// Number of subsets intersecting the violated-check set.
inline size_t amplified_violations(const AmplifiedCheckSet& amp, const BitVector& base_violated) {
    if (base_violated.size() != amp.m_base)
        throw std::invalid_argument("amplified_violations: length mismatch");
    size_t count = 0;
    for (const auto& s : amp.subsets)
        for (uint32_t c : s)
            if (base_violated.get(c)) {
                ++count;
                break;
            }
    return count;
}

}  // namespace pcube
