#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcube/gibbs.hpp"

using namespace pcube;

namespace {

double tv_distance(const std::map<size_t, double>& a, const std::map<size_t, double>& b) {
    std::set<size_t> keys;
    for (const auto& [k, _] : a) keys.insert(k);
    for (const auto& [k, _] : b) keys.insert(k);
    double tv = 0.0;
    for (size_t k : keys) {
        double pa = a.count(k) ? a.at(k) : 0.0;
        double pb = b.count(k) ? b.at(k) : 0.0;
        tv += std::abs(pa - pb);
    }
    return tv / 2.0;
}

std::map<size_t, double> energy_histogram(const CheckSystem& sys, const ChainConfig& cfg) {
    std::map<size_t, uint64_t> hist;
    uint64_t total = 0;
    run_chain(sys, cfg, [&](const ChainSample& s) {
        ++hist[s.energy];
        ++total;
    });
    std::map<size_t, double> out;
    for (const auto& [e, c] : hist) out[e] = double(c) / double(total);
    return out;
}

}  // namespace

TEST_CASE("energy tracker matches full recomputation", "[gibbs][prop]") {
    auto code = build_projective_code(4);
    auto amp = amplify(*code, 3, 40, 19);
    CheckSystem sys = union_system(code, amp);
    EnergyTracker tracker(sys);
    Rng rng(3);
    PauliError e(code->n());
    tracker.reset(e);
    for (int t = 0; t < 500; ++t) {
        auto q = uint32_t(rng.uniform_below(code->n()));
        bool fx = rng.bernoulli(0.5);
        bool fz = fx ? rng.bernoulli(0.5) : true;
        if (fx) e.x.flip(q);
        if (fz) e.z.flip(q);
        tracker.flip(q, fx, fz);
        REQUIRE(tracker.energy() == energy(sys, e));
        REQUIRE(tracker.weight() == e.weight());
    }
}

TEST_CASE("acceptance probability of a single Z flip", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    const double beta = 2.0;
    const double lambda = 20.0 / 12.0;
    PauliError identity(code->n());
    // flipping Z on any qubit from the identity violates N checks
    double acc = mh_acceptance_probability(sys, identity, 5, false, true, beta);
    REQUIRE(acc == Catch::Approx(std::exp(-beta * 4.0 / lambda)).epsilon(1e-12));
    // energy-lowering moves are always accepted
    PauliError ze(code->n());
    ze.z.set(5, true);
    REQUIRE(mh_acceptance_probability(sys, ze, 5, false, true, beta) == 1.0);
}

TEST_CASE("beta zero accepts every untruncated proposal", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    ChainConfig cfg;
    cfg.beta = 0.0;
    cfg.steps = 2000;
    cfg.seed = 11;
    GibbsChain chain(sys, cfg);
    for (int t = 0; t < 2000; ++t) chain.step();
    REQUIRE(chain.accepted() == chain.proposed());
}

TEST_CASE("run_chain contract", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    ChainConfig cfg;
    cfg.beta = 1.0;
    cfg.steps = 0;
    cfg.seed = 17;
    auto run = run_chain(sys, cfg);
    REQUIRE(run.samples.size() == 1);
    REQUIRE(run.samples[0].weight == 0);
    REQUIRE(run.samples[0].energy == 0);

    cfg.steps = 5000;
    cfg.burn_in = 100;
    cfg.thin = 10;
    auto r1 = run_chain(sys, cfg);
    auto r2 = run_chain(sys, cfg);
    REQUIRE(r1.samples.size() == r2.samples.size());
    for (size_t i = 0; i < r1.samples.size(); ++i) {
        REQUIRE(r1.samples[i].step == r2.samples[i].step);
        REQUIRE(r1.samples[i].energy == r2.samples[i].energy);
        REQUIRE(r1.samples[i].weight == r2.samples[i].weight);
    }
    REQUIRE(r1.final_state.error == r2.final_state.error);
    REQUIRE(r1.acceptance_rate == r2.acceptance_rate);
}

TEST_CASE("mh_step agrees with the chain on the same stream", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    for (ProposalSet prop : {ProposalSet::XZ, ProposalSet::XYZ}) {
        ChainConfig cfg;
        cfg.beta = 1.2;
        cfg.seed = 23;
        cfg.proposal = prop;
        GibbsChain chain(sys, cfg);
        Rng rng(23);  // same stream as the chain consumes
        ChainState st{PauliError(code->n()), 0, 0};
        for (int t = 0; t < 300; ++t) {
            st = mh_step(st, sys, cfg, rng);
            chain.step();
            REQUIRE(st.error == chain.error());
            REQUIRE(st.energy == chain.energy());
        }
    }
}

TEST_CASE("empirical energy distribution matches the exact oracle", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    const double beta = 1.5;  // acceptance rate ~ 0.35 here
    auto exact = exact_gibbs_oracle(sys, beta).energy_marginal();
    ChainConfig cfg;
    cfg.beta = beta;
    cfg.steps = 1'000'000;
    cfg.burn_in = 20'000;
    cfg.seed = 29;
    REQUIRE(tv_distance(exact, energy_histogram(sys, cfg)) < 0.02);
}

TEST_CASE("oracle limits", "[gibbs]") {
    auto code = build_projective_code(2);
    auto amp = amplify(*code, 2, 5, 37);
    CheckSystem sys = union_system(code, amp);

    // beta = 0: uniform over all 4^n raw errors
    auto flat = exact_gibbs_oracle(sys, 0.0);
    REQUIRE(flat.z == Catch::Approx(16.0));
    double p0 = 0.0;
    for (const auto& [ew, p] : flat.joint)
        if (ew.first == 0) p0 += p;
    size_t zero_energy_count = 0;
    for (uint64_t v = 0; v < 16; ++v) {
        PauliError e(2);
        if (v & 1) e.x.set(0, true);
        if (v & 2) e.x.set(1, true);
        if (v & 4) e.z.set(0, true);
        if (v & 8) e.z.set(1, true);
        if (energy(sys, e) == 0) ++zero_energy_count;
    }
    REQUIRE(p0 == Catch::Approx(double(zero_energy_count) / 16.0));

    // large beta: all mass on the zero-energy sector
    auto cold = exact_gibbs_oracle(sys, 1e4 * sys.lambda().value());
    double cold_p0 = 0.0;
    for (const auto& [ew, p] : cold.joint)
        if (ew.first == 0) cold_p0 += p;
    REQUIRE(cold_p0 == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("N=2 partition function has the closed form", "[gibbs]") {
    auto code = build_projective_code(2);
    CheckSystem sys(code);
    const double beta = 0.7, lambda = 1.5;
    // energy levels 0..3, each with 4 raw errors
    double expect = 4.0 * (1.0 + std::exp(-beta / lambda) + std::exp(-2.0 * beta / lambda) +
                           std::exp(-3.0 * beta / lambda));
    REQUIRE(exact_gibbs_oracle(sys, beta).z == Catch::Approx(expect).epsilon(1e-12));
    REQUIRE_THROWS_AS(exact_gibbs_oracle(CheckSystem(build_projective_code(6)), 1.0),
                      std::invalid_argument);
}

TEST_CASE("factorized energy marginal matches the full oracle", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    auto full = exact_gibbs_oracle(sys, 1.0).energy_marginal();
    auto fact = exact_energy_marginal_factorized(sys, 1.0);
    REQUIRE(tv_distance(full, fact) < 1e-12);
    auto amp = amplify(*code, 2, 5, 1);
    REQUIRE_THROWS_AS(exact_energy_marginal_factorized(union_system(code, amp), 1.0),
                      std::invalid_argument);
}

TEST_CASE("detailed balance residuals are round-off only", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    REQUIRE(detailed_balance_check(sys, 1.7, 1000, 41) < 1e-12);
    REQUIRE(detailed_balance_check(sys, 0.0, 200, 43) == 0.0);  // equal energies exactly

    // truncated chain: straddling pairs contribute zero on both sides
    REQUIRE(detailed_balance_check(sys, 1.7, 1000, 47, size_t{2}) < 1e-12);
}

TEST_CASE("truncated chains never exceed the weight cap", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    ChainConfig cfg;
    cfg.beta = 0.2;  // hot chain pushes against the cap
    cfg.truncation_k = 3;
    cfg.steps = 50'000;
    cfg.seed = 53;
    size_t max_w = 0;
    run_chain(sys, cfg, [&](const ChainSample& s) { max_w = std::max(max_w, s.weight); });
    REQUIRE(max_w <= 3);
}

TEST_CASE("truncated chain tracks the conditioned Gibbs law", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    const double beta = 1.5;
    const size_t k = 4;
    auto conditioned = exact_gibbs_oracle(sys, beta).conditioned_weight_le(k);
    ChainConfig cfg;
    cfg.beta = beta;
    cfg.truncation_k = k;
    cfg.steps = 1'000'000;
    cfg.burn_in = 20'000;
    cfg.seed = 59;
    REQUIRE(tv_distance(conditioned.energy_marginal(), energy_histogram(sys, cfg)) < 0.02);
}

TEST_CASE("analytic truncation tail bound", "[gibbs]") {
    auto b = truncation_tail_bound(100.0, 1.0, 0.499, 1000);
    REQUIRE(b.log_value ==
            Catch::Approx(std::log(2000.0) - 2000.0 * std::log(1.0 / 0.499) * 0.499));
    REQUIRE(b.value < 1e-300);  // astronomically small; kept in log space
    REQUIRE(b.beta_ok);

    REQUIRE_FALSE(truncation_tail_bound(1.0, 0.5, 0.1, 100).beta_ok);  // beta < 5 ln(10)/0.5
    REQUIRE(truncation_tail_bound(24.0, 0.5, 0.1, 100).beta_ok);

    REQUIRE_THROWS_AS(truncation_tail_bound(1.0, 1.0, 0.6, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(truncation_tail_bound(1.0, 1.0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("exact tails obey the analytic bound when the flag holds", "[gibbs]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    size_t n = sys.n();
    // exact soundness over coset-minimal weights, from the full oracle's coset data
    auto oracle = exact_gibbs_oracle(sys, 1.0);
    // s = min over cosets with w >= 1 of (E/m) / (w/n); recompute from joint data
    double s = HUGE_VAL;
    {
        // coset marginal alone does not expose E, so scan raw level data instead:
        // every raw error of coset weight w >= 1 has some energy E >= s m w / n
        // (conservative: use raw weights below half the centralizer, where they
        // coincide with coset weights)
        for (const auto& [ew, p] : oracle.joint) {
            if (p == 0.0 || ew.second == 0) continue;
            if (ew.first == 0) continue;
            double ratio = (double(ew.first) / double(sys.m_total())) /
                           (double(ew.second) / double(n));
            s = std::min(s, ratio);
        }
    }
    for (double delta : {0.25, 0.33, 0.4}) {
        auto k = size_t(std::ceil(delta * double(n)));
        for (double beta : {5.0 * std::log(1.0 / delta) / s, 8.0 * std::log(1.0 / delta) / s}) {
            auto bound = truncation_tail_bound(beta, s, delta, n);
            if (!bound.beta_ok) continue;
            double tail = exact_gibbs_oracle(sys, beta).tail_coset_weight(k);
            REQUIRE(tail <= bound.value + 1e-12);
        }
    }
}

TEST_CASE("beta window arithmetic", "[gibbs]") {
    auto w = beta_window_from(1.0, 1.0, M_E, 10.0, 100);
    REQUIRE(w.beta_low == Catch::Approx(10.0));
    REQUIRE(w.beta_high == Catch::Approx(10.0 / std::log(100.0)));
    REQUIRE(w.empty());

    // beta_low shrinks as soundness grows
    REQUIRE(beta_window_from(0.5, 2.0, 20.0, 5.0, 50).beta_low <
            beta_window_from(0.5, 1.0, 20.0, 5.0, 50).beta_low);

    auto code = build_projective_code(8);
    auto amp = amplify(*code, 4, 1120, 61);
    CheckSystem sys = union_system(code, amp);
    auto win = beta_window(sys, 0.5, 1.5);
    REQUIRE(win.degree >= 36);  // at least the base interaction degree
    REQUIRE(win.beta_low == Catch::Approx((10.0 / 0.5) * std::log(win.degree) / 1.5));
    REQUIRE(win.beta_high == Catch::Approx(sys.lambda().value() / std::log(560.0)));
}

TEST_CASE("weight distribution is stochastically decreasing in beta", "[gibbs][prop]") {
    auto code = build_projective_code(4);
    CheckSystem sys(code);
    double prev_mean = HUGE_VAL;
    for (double beta : {0.2, 0.8, 2.0, 5.0}) {
        ChainConfig cfg;
        cfg.beta = beta;
        cfg.steps = 200'000;
        cfg.burn_in = 10'000;
        cfg.seed = 67;
        double sum = 0.0;
        uint64_t count = 0;
        run_chain(sys, cfg, [&](const ChainSample& s) {
            sum += double(s.weight);
            ++count;
        });
        double mean = sum / double(count);
        REQUIRE(mean < prev_mean);
        prev_mean = mean;
    }
}
