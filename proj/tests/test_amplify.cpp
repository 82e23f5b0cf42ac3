#include <catch2/catch_amalgamated.hpp>

#include "pcube/amplify.hpp"
#include "pcube/check_system.hpp"

using namespace pcube;

namespace {

PauliError random_error(size_t n, double rate, Rng& rng) {
    PauliError e(n);
    for (size_t q = 0; q < n; ++q) {
        if (rng.bernoulli(rate)) e.x.set(q, true);
        if (rng.bernoulli(rate)) e.z.set(q, true);
    }
    return e;
}

}  // namespace

TEST_CASE("amplified families are reproducible and well formed", "[amplify]") {
    auto code = build_projective_code(4);
    auto a1 = amplify(*code, 4, 50, 99);
    auto a2 = amplify(*code, 4, 50, 99);
    REQUIRE(a1.subsets == a2.subsets);
    REQUIRE(a1.m_prime() == 50);
    for (const auto& s : a1.subsets) {
        REQUIRE(s.size() == 4);
        for (size_t i = 1; i < s.size(); ++i) REQUIRE(s[i - 1] < s[i]);
        REQUIRE(s.back() < code->m());
    }
    auto a3 = amplify(*code, 4, 50, 100);
    REQUIRE(a1.subsets != a3.subsets);

    REQUIRE_THROWS_AS(amplify(*code, 0, 10, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(amplify(*code, 21, 10, 1), std::invalid_argument);
}

TEST_CASE("paper-scale defaults", "[amplify]") {
    auto d = amplify_defaults(0.3, 1000);
    REQUIRE(d.subset_size == 4);  // ceil(1/0.3)
    double l = std::log(1000.0);
    REQUIRE(d.m_prime == size_t(std::ceil(1000.0 * l * l)));
}

TEST_CASE("amplified violation counting", "[amplify]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 3, 64, 7);
    BitVector none(code->m());
    REQUIRE(amplified_violations(amp, none) == 0);

    BitVector all(code->m());
    for (size_t c = 0; c < code->m(); ++c) all.set(c, true);
    REQUIRE(amplified_violations(amp, all) == amp.m_prime());

    // single violated check: counted once per containing subset
    for (uint32_t c : {0u, 7u, 19u}) {
        BitVector one(code->m());
        one.set(c, true);
        size_t direct = 0;
        for (const auto& s : amp.subsets)
            direct += std::count(s.begin(), s.end(), c) > 0 ? 1 : 0;
        REQUIRE(amplified_violations(amp, one) == direct);
    }

    REQUIRE_THROWS_AS(amplified_violations(amp, BitVector(3)), std::invalid_argument);
}

TEST_CASE("subset size one resamples the base checks", "[amplify]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 1, 30, 3);
    CheckSystem sys = union_system(code, amp);
    CheckSystem base(code);
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        PauliError e = random_error(code->n(), 0.15, rng);
        BitVector viol = base_violations(base, e);
        size_t expect = energy(base, e);
        for (const auto& s : amp.subsets) expect += viol.get(s[0]) ? 1 : 0;
        REQUIRE(energy(sys, e) == expect);
    }
}

TEST_CASE("union system energy is additive", "[amplify]") {
    auto code = build_projective_code(4);
    CheckSystem empty_union = union_system(code, AmplifiedCheckSet{});
    REQUIRE(empty_union.m_total() == code->m());
    REQUIRE(empty_union.lambda() == Ratio(code->m(), code->n()));

    auto amp = amplify(*code, 4, 80, 11);
    CheckSystem sys = union_system(code, amp);
    REQUIRE(sys.m_total() == code->m() + 80);
    CheckSystem base(code);
    Rng rng(13);
    for (int t = 0; t < 50; ++t) {
        PauliError e = random_error(code->n(), 0.2, rng);
        REQUIRE(energy(sys, e) ==
                energy(base, e) + amplified_violations(amp, base_violations(base, e)));
    }

    auto other = build_projective_code(6);
    REQUIRE_THROWS_AS(union_system(other, amp), std::invalid_argument);
}

TEST_CASE("union preserves the ground space exhaustively at N=4", "[amplify]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 3, 60, 17);
    CheckSystem sys = union_system(code, amp);
    size_t n = code->n();
    // parts are independent: zero union energy iff both part syndromes vanish
    for (uint64_t v = 0; v < (uint64_t{1} << n); ++v) {
        PauliError ex(n), ez(n);
        for (size_t q = 0; q < n; ++q)
            if ((v >> q) & 1) {
                ex.x.set(q, true);
                ez.z.set(q, true);
            }
        bool zero_base_x = syndrome(*code, ex).none();
        REQUIRE((energy(sys, ex) == 0) == zero_base_x);
        bool zero_base_z = syndrome(*code, ez).none();
        REQUIRE((energy(sys, ez) == 0) == zero_base_z);
    }
}

TEST_CASE("OR-violations are monotone in the violated set", "[amplify][prop]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 4, 70, 23);
    Rng rng(29);
    for (int t = 0; t < 100; ++t) {
        BitVector small(code->m()), big(code->m());
        for (size_t c = 0; c < code->m(); ++c) {
            bool b = rng.bernoulli(0.3);
            if (b) big.set(c, true);
            if (b && rng.bernoulli(0.5)) small.set(c, true);
        }
        REQUIRE(amplified_violations(amp, small) <= amplified_violations(amp, big));
    }
}

TEST_CASE("amplified soundness dominates the base at small weights", "[amplify]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 5, 200, 31);
    CheckSystem base(code);
    CheckSystem sys = union_system(code, amp);
    size_t n = code->n();
    double mb = double(base.m_total()), mu = double(sys.m_total());
    // exhaustive over all weight-1 and weight-2 errors
    for (size_t w : {size_t{1}, size_t{2}}) {
        double base_min = HUGE_VAL, amp_min = HUGE_VAL;
        std::vector<uint32_t> qs(w);
        auto scan = [&](const std::vector<uint32_t>& support) {
            size_t combos = 1;
            for (size_t i = 0; i < support.size(); ++i) combos *= 3;
            for (size_t types = 0; types < combos; ++types) {
                PauliError e(n);
                size_t t = types;
                for (uint32_t q : support) {
                    switch (t % 3) {
                        case 0: e.x.set(q, true); break;
                        case 1: e.x.set(q, true); e.z.set(q, true); break;
                        default: e.z.set(q, true); break;
                    }
                    t /= 3;
                }
                double ratio_b = (double(energy(base, e)) / mb) / (double(w) / double(n));
                double ratio_a = (double(energy(sys, e)) / mu) / (double(w) / double(n));
                base_min = std::min(base_min, ratio_b);
                amp_min = std::min(amp_min, ratio_a);
            }
        };
        if (w == 1) {
            for (uint32_t q = 0; q < n; ++q) scan({q});
        } else {
            for (uint32_t a = 0; a < n; ++a)
                for (uint32_t b = a + 1; b < n; ++b) scan({a, b});
        }
        INFO("weight " << w);
        REQUIRE(amp_min >= base_min);
    }
}

TEST_CASE("subset export format", "[amplify]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 2, 3, 41);
    std::string text = amp.to_text();
    REQUIRE(text.find("m_prime=3") != std::string::npos);
    REQUIRE(text.find("seed=41") != std::string::npos);
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 4);
}
