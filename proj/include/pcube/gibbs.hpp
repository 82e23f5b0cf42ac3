#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pcube/bits.hpp"
#include "pcube/check_system.hpp"

namespace pcube {

enum class ProposalSet { XZ, XYZ };

struct ChainConfig {
    double beta = 1.0;
    std::optional<size_t> truncation_k;  // max raw error weight, absolute
    uint64_t steps = 0;                  // steps after burn-in
    uint64_t burn_in = 0;
    ProposalSet proposal = ProposalSet::XZ;
    uint64_t seed = 0;
    uint64_t thin = 1;
};

struct ChainState {
    PauliError error;
    size_t energy = 0;  // cached, unscaled violated-check count
    uint64_t step = 0;
};

/// Incremental energy bookkeeping: flipping one qubit re-touches only its
/// incident checks and their amplified subsets, O(degree) per step.
class EnergyTracker {
public:
    explicit EnergyTracker(const CheckSystem& sys)
        : sys_(&sys),
          err_(sys.n()),
          violated_(sys.m_base(), 0),
          amp_count_(sys.amplified().m_prime(), 0) {}

    void reset(const PauliError& e) {
        if (e.n() != sys_->n()) throw std::invalid_argument("EnergyTracker: length mismatch");
        err_ = PauliError(sys_->n());
        std::fill(violated_.begin(), violated_.end(), 0);
        std::fill(amp_count_.begin(), amp_count_.end(), 0);
        energy_ = 0;
        weight_ = 0;
        for (uint32_t q : e.x.ones()) flip(q, true, false);
        for (uint32_t q : e.z.ones()) flip(q, false, true);
    }

    const PauliError& error() const { return err_; }
    size_t energy() const { return energy_; }
    size_t weight() const { return weight_; }

    /// Multiply the error by a single-qubit Pauli; returns the energy change.
    /// Involution: a second identical call undoes the first.
    long flip(uint32_t q, bool flip_x, bool flip_z) {
        long before = long(energy_);
        bool had = err_.x.get(q) || err_.z.get(q);
        if (flip_x) {
            err_.x.flip(q);
            for (uint32_t r : sys_->base().z_checks_of(q)) toggle(sys_->base().m_x() + r);
        }
        if (flip_z) {
            err_.z.flip(q);
            for (uint32_t r : sys_->base().x_checks_of(q)) toggle(r);
        }
        bool has = err_.x.get(q) || err_.z.get(q);
        weight_ += size_t(has) - size_t(had);
        return long(energy_) - before;
    }

private:
    void toggle(size_t check) {
        if (violated_[check]) {
            violated_[check] = 0;
            --energy_;
            for (uint32_t s : sys_->subsets_of(check))
                if (--amp_count_[s] == 0) --energy_;
        } else {
            violated_[check] = 1;
            ++energy_;
            for (uint32_t s : sys_->subsets_of(check))
                if (amp_count_[s]++ == 0) ++energy_;
        }
    }

    const CheckSystem* sys_;
    PauliError err_;
    std::vector<uint8_t> violated_;
    std::vector<uint32_t> amp_count_;
    size_t energy_ = 0;
    size_t weight_ = 0;
};

/// One Metropolis-Hastings chain over raw Pauli errors with stationary law
/// proportional to exp(-beta E / lambda). XYZ proposals reproduce the
/// 1/(4n) transition kernel (the unproposed 1/4 is a lazy self-loop); XZ
/// proposals flip only X or Z parts.
class GibbsChain {
public:
    GibbsChain(const CheckSystem& sys, const ChainConfig& cfg)
        : sys_(&sys), cfg_(cfg), tracker_(sys), rng_(cfg.seed) {
        if (cfg.beta < 0) throw std::invalid_argument("GibbsChain: beta must be nonnegative");
        if (cfg.truncation_k && *cfg.truncation_k > sys.n())
            throw std::invalid_argument("GibbsChain: truncation_k exceeds n");
        lambda_ = sys.lambda().value();
        tracker_.reset(PauliError(sys.n()));
    }

    const PauliError& error() const { return tracker_.error(); }
    size_t energy() const { return tracker_.energy(); }
    size_t weight() const { return tracker_.weight(); }
    uint64_t step_count() const { return step_; }
    uint64_t proposed() const { return proposed_; }
    uint64_t accepted() const { return accepted_; }
    double acceptance_rate() const {
        return proposed_ ? double(accepted_) / double(proposed_) : 0.0;
    }

    ChainState state() const { return ChainState{tracker_.error(), tracker_.energy(), step_}; }

    void step() {
        ++step_;
        bool flip_x = false, flip_z = false;
        if (cfg_.proposal == ProposalSet::XYZ) {
            if (rng_.uniform01() < 0.25) return;  // lazy mass of the 1/(4n) kernel
            auto q = uint32_t(rng_.uniform_below(sys_->n()));
            switch (rng_.uniform_below(3)) {
                case 0: flip_x = true; break;             // X
                case 1: flip_x = flip_z = true; break;    // Y
                default: flip_z = true; break;            // Z
            }
            attempt(q, flip_x, flip_z);
        } else {
            auto q = uint32_t(rng_.uniform_below(sys_->n()));
            if (rng_.uniform_below(2) == 0) flip_x = true; else flip_z = true;
            attempt(q, flip_x, flip_z);
        }
#ifndef NDEBUG
        if ((step_ & 0xfff) == 0)
            assert(tracker_.energy() == pcube::energy(*sys_, tracker_.error()));
#endif
    }

private:
    void attempt(uint32_t q, bool fx, bool fz) {
        ++proposed_;
        long delta = tracker_.flip(q, fx, fz);
        if (cfg_.truncation_k && tracker_.weight() > *cfg_.truncation_k) {
            tracker_.flip(q, fx, fz);  // rejected: mass returns to the self-loop
            return;
        }
        if (delta > 0) {
            // log-space acceptance; avoids underflow at large beta
            double log_acc = -cfg_.beta * double(delta) / lambda_;
            if (std::log(rng_.uniform01() + 1e-300) >= log_acc) {
                tracker_.flip(q, fx, fz);
                return;
            }
        }
        ++accepted_;
    }

    const CheckSystem* sys_;
    ChainConfig cfg_;
    EnergyTracker tracker_;
    Rng rng_;
    double lambda_ = 1.0;
    uint64_t step_ = 0, proposed_ = 0, accepted_ = 0;
};

/// Single MH transition from an explicit state; the convenience form of
/// GibbsChain::step for contract-level tests.
inline ChainState mh_step(const ChainState& state, const CheckSystem& sys,
                          const ChainConfig& cfg, Rng& rng) {
    EnergyTracker tracker(sys);
    tracker.reset(state.error);
    double lambda = sys.lambda().value();
    bool flip_x = false, flip_z = false;
    uint32_t q = 0;
    if (cfg.proposal == ProposalSet::XYZ) {
        if (rng.uniform01() < 0.25)
            return ChainState{state.error, tracker.energy(), state.step + 1};
        q = uint32_t(rng.uniform_below(sys.n()));
        switch (rng.uniform_below(3)) {
            case 0: flip_x = true; break;
            case 1: flip_x = flip_z = true; break;
            default: flip_z = true; break;
        }
    } else {
        q = uint32_t(rng.uniform_below(sys.n()));
        if (rng.uniform_below(2) == 0) flip_x = true; else flip_z = true;
    }
    long delta = tracker.flip(q, flip_x, flip_z);
    bool reject = false;
    if (cfg.truncation_k && tracker.weight() > *cfg.truncation_k) reject = true;
    else if (delta > 0 &&
             std::log(rng.uniform01() + 1e-300) >= -cfg.beta * double(delta) / lambda)
        reject = true;
    if (reject) tracker.flip(q, flip_x, flip_z);
    return ChainState{tracker.error(), tracker.energy(), state.step + 1};
}

/// min(1, exp(-beta (E_new - E_old) / lambda)) for one single-qubit move.
inline double mh_acceptance_probability(const CheckSystem& sys, const PauliError& e, uint32_t q,
                                        bool flip_x, bool flip_z, double beta) {
    EnergyTracker tracker(sys);
    tracker.reset(e);
    long delta = tracker.flip(q, flip_x, flip_z);
    if (delta <= 0) return 1.0;
    return std::exp(-beta * double(delta) / sys.lambda().value());
}

struct ChainSample {
    uint64_t step;
    size_t weight;
    size_t energy;
};

struct ChainRun {
    std::vector<ChainSample> samples;
    double acceptance_rate = 0.0;
    ChainState final_state;
};

/// Deterministic given the seed: burn in, then emit every thin-th state.
inline ChainRun run_chain(const CheckSystem& sys, const ChainConfig& cfg) {
    GibbsChain chain(sys, cfg);
    ChainRun run;
    for (uint64_t t = 0;; ++t) {
        if (t >= cfg.burn_in && (t - cfg.burn_in) % std::max<uint64_t>(cfg.thin, 1) == 0)
            run.samples.push_back(ChainSample{t, chain.weight(), chain.energy()});
        if (t == cfg.burn_in + cfg.steps) break;
        chain.step();
    }
    run.acceptance_rate = chain.acceptance_rate();
    run.final_state = chain.state();
    return run;
}

/// Streaming variant for long chains; the callback sees (step, weight, energy).
inline ChainRun run_chain(const CheckSystem& sys, const ChainConfig& cfg,
                          const std::function<void(const ChainSample&)>& on_sample) {
    GibbsChain chain(sys, cfg);
    for (uint64_t t = 0;; ++t) {
        if (t >= cfg.burn_in && (t - cfg.burn_in) % std::max<uint64_t>(cfg.thin, 1) == 0)
            on_sample(ChainSample{t, chain.weight(), chain.energy()});
        if (t == cfg.burn_in + cfg.steps) break;
        chain.step();
    }
    ChainRun run;
    run.acceptance_rate = chain.acceptance_rate();
    run.final_state = chain.state();
    return run;
}

/// Exact Gibbs distribution by enumeration of all 4^n raw errors (or of the
/// two 2^n parts separately when the system has no amplified checks and only
/// energy marginals are needed).
struct GibbsOracle {
    double beta = 0.0;
    double lambda = 1.0;
    double z = 0.0;                             // partition sum over raw errors
    std::map<std::pair<size_t, size_t>, double> joint;  // (energy, raw weight) -> prob
    // minimal weight modulo the centralizer (stabilizers and logicals both
    // leave the uniform code mixture fixed, so they delimit error classes)
    std::vector<double> coset_weight_prob;
    bool full = true;

    // per-part centralizer reduction tables and coset minimal weights,
    // indexed by the packed part words; usable for classifying samples
    std::vector<uint32_t> red_x, red_z;
    std::unordered_map<uint64_t, std::pair<size_t, size_t>> coset_info;  // id -> (E, min w)

    size_t coset_weight(const PauliError& e) const {
        uint32_t xw = 0, zw = 0;
        for (uint32_t q : e.x.ones()) xw |= uint32_t{1} << q;
        for (uint32_t q : e.z.ones()) zw |= uint32_t{1} << q;
        uint64_t id = (uint64_t(red_x.at(xw)) << 32) | red_z.at(zw);
        return coset_info.at(id).second;
    }

    std::map<size_t, double> energy_marginal() const {
        std::map<size_t, double> out;
        for (const auto& [ew, p] : joint) out[ew.first] += p;
        return out;
    }
    std::vector<double> weight_marginal(size_t n) const {
        std::vector<double> out(n + 1, 0.0);
        for (const auto& [ew, p] : joint) out[ew.second] += p;
        return out;
    }
    double tail_weight(size_t k) const {
        double t = 0.0;
        for (const auto& [ew, p] : joint)
            if (ew.second >= k) t += p;
        return t;
    }
    double tail_coset_weight(size_t k) const {
        double t = 0.0;
        for (size_t w = k; w < coset_weight_prob.size(); ++w) t += coset_weight_prob[w];
        return t;
    }
    /// Distribution conditioned on raw weight <= k.
    GibbsOracle conditioned_weight_le(size_t k) const {
        GibbsOracle out = *this;
        out.joint.clear();
        double mass = 0.0;
        for (const auto& [ew, p] : joint)
            if (ew.second <= k) mass += p;
        if (mass <= 0.0) throw std::runtime_error("conditioned_weight_le: empty restriction");
        for (const auto& [ew, p] : joint)
            if (ew.second <= k) out.joint[ew] = p / mass;
        out.coset_weight_prob.clear();
        return out;
    }
};

inline GibbsOracle exact_gibbs_oracle(const CheckSystem& sys, double beta) {
    size_t n = sys.n();
    if (n > 12) throw std::invalid_argument("exact_gibbs_oracle: n too large for enumeration");
    if (sys.m_base() > 64)
        throw std::invalid_argument("exact_gibbs_oracle: too many base checks");
    GibbsOracle oracle;
    oracle.beta = beta;
    oracle.lambda = sys.lambda().value();
    oracle.full = true;

    const CssCode& code = sys.base();
    size_t mx = code.m_x();
    uint64_t part = uint64_t{1} << n;

    // per-part violated-check masks (X checks in low bits, Z checks above)
    std::vector<uint64_t> viol_from_z(part, 0), viol_from_x(part, 0);
    for (uint64_t v = 0; v < part; ++v) {
        uint64_t mz = 0, mx_mask = 0;
        for (size_t q = 0; q < n; ++q)
            if ((v >> q) & 1) {
                for (uint32_t r : code.x_checks_of(q)) mx_mask ^= uint64_t{1} << r;
                for (uint32_t r : code.z_checks_of(q)) mz ^= uint64_t{1} << (mx + r);
            }
        viol_from_z[v] = mx_mask;  // z-part trips X checks
        viol_from_x[v] = mz;
    }
    std::vector<uint64_t> subset_masks;
    for (const auto& s : sys.amplified().subsets) {
        uint64_t m = 0;
        for (uint32_t c : s) m |= uint64_t{1} << c;
        subset_masks.push_back(m);
    }

    // centralizer reduction tables: the x-part is defined modulo ker(h_z),
    // the z-part modulo ker(h_x)
    oracle.red_x.resize(part);
    oracle.red_z.resize(part);
    {
        RowBasis cent_x(code.z_stabilizers().kernel_basis(), n);
        RowBasis cent_z(code.x_stabilizers().kernel_basis(), n);
        auto reduce = [&](const RowBasis& basis, uint64_t v) -> uint32_t {
            BitVector b(n);
            for (size_t q = 0; q < n; ++q)
                if ((v >> q) & 1) b.set(q, true);
            uint32_t out = 0;
            for (uint32_t q : basis.reduced(b).ones()) out |= uint32_t{1} << q;
            return out;
        };
        for (uint64_t v = 0; v < part; ++v) {
            oracle.red_x[v] = reduce(cent_x, v);
            oracle.red_z[v] = reduce(cent_z, v);
        }
    }

    std::map<std::pair<size_t, size_t>, uint64_t> level_counts;  // (E, w) -> count
    auto& coset = oracle.coset_info;
    for (uint64_t x = 0; x < part; ++x) {
        uint64_t vx = viol_from_x[x];
        for (uint64_t zv = 0; zv < part; ++zv) {
            uint64_t viol = vx | viol_from_z[zv];
            size_t e = size_t(std::popcount(viol));
            for (uint64_t sm : subset_masks)
                if (sm & viol) ++e;
            auto w = size_t(std::popcount(x | zv));
            ++level_counts[{e, w}];
            uint64_t id = (uint64_t(oracle.red_x[x]) << 32) | oracle.red_z[zv];
            auto it = coset.find(id);
            if (it == coset.end()) coset.emplace(id, std::make_pair(e, w));
            else it->second.second = std::min(it->second.second, w);
        }
    }

    double z_sum = 0.0;
    for (const auto& [ew, count] : level_counts)
        z_sum += double(count) * std::exp(-beta * double(ew.first) / oracle.lambda);
    oracle.z = z_sum;
    for (const auto& [ew, count] : level_counts)
        oracle.joint[ew] = double(count) * std::exp(-beta * double(ew.first) / oracle.lambda) / z_sum;

    // coset marginal: equal coset sizes, so each coset carries e^{-beta E/lambda}
    oracle.coset_weight_prob.assign(n + 1, 0.0);
    double zc = 0.0;
    for (const auto& [_, ew] : coset) zc += std::exp(-beta * double(ew.first) / oracle.lambda);
    for (const auto& [_, ew] : coset)
        oracle.coset_weight_prob[ew.second] +=
            std::exp(-beta * double(ew.first) / oracle.lambda) / zc;
    return oracle;
}

/// Energy marginal of the Gibbs state for a base-only system, by enumerating
/// the two parts separately and convolving their level counts.
inline std::map<size_t, double> exact_energy_marginal_factorized(const CheckSystem& sys,
                                                                 double beta) {
    if (!sys.amplified().empty())
        throw std::invalid_argument("factorized oracle requires a base-only system");
    size_t n = sys.n();
    if (n > 20) throw std::invalid_argument("factorized oracle: n too large");
    const CssCode& code = sys.base();
    std::vector<uint64_t> lvl_x(code.m_z() + 1, 0), lvl_z(code.m_x() + 1, 0);
    uint64_t part = uint64_t{1} << n;
    for (uint64_t v = 0; v < part; ++v) {
        BitVector b(n);
        for (size_t q = 0; q < n; ++q)
            if ((v >> q) & 1) b.set(q, true);
        ++lvl_x[code.h_z().mul(b).popcount()];
        ++lvl_z[code.h_x().mul(b).popcount()];
    }
    double lambda = sys.lambda().value();
    std::map<size_t, double> out;
    double z_sum = 0.0;
    for (size_t a = 0; a < lvl_x.size(); ++a)
        for (size_t b = 0; b < lvl_z.size(); ++b) {
            if (!lvl_x[a] || !lvl_z[b]) continue;
            double mass = double(lvl_x[a]) * double(lvl_z[b]) *
                          std::exp(-beta * double(a + b) / lambda);
            out[a + b] += mass;
            z_sum += mass;
        }
    for (auto& [_, p] : out) p /= z_sum;
    return out;
}

/// Max |pi_i M_ij - pi_j M_ji| over sampled adjacent pairs, pi = e^{-beta E/lambda}.
inline double detailed_balance_check(const CheckSystem& sys, double beta, size_t pairs,
                                     uint64_t seed,
                                     std::optional<size_t> truncation_k = std::nullopt,
                                     ProposalSet proposal = ProposalSet::XYZ) {
    Rng rng(seed);
    EnergyTracker tracker(sys);
    size_t n = sys.n();
    double lambda = sys.lambda().value();
    double per_edge = proposal == ProposalSet::XYZ ? 1.0 / (4.0 * double(n))
                                                   : 1.0 / (2.0 * double(n));
    double max_residual = 0.0;
    for (size_t t = 0; t < pairs; ++t) {
        PauliError e(n);
        size_t w = rng.uniform_below(5);
        for (size_t i = 0; i < w; ++i) {
            auto q = uint32_t(rng.uniform_below(n));
            switch (rng.uniform_below(3)) {
                case 0: e.x.set(q, true); break;
                case 1: e.x.set(q, true); e.z.set(q, true); break;
                default: e.z.set(q, true); break;
            }
        }
        tracker.reset(e);
        size_t e_i = tracker.energy();
        size_t w_i = tracker.weight();
        auto q = uint32_t(rng.uniform_below(n));
        bool fx = false, fz = false;
        if (proposal == ProposalSet::XYZ) {
            switch (rng.uniform_below(3)) {
                case 0: fx = true; break;
                case 1: fx = fz = true; break;
                default: fz = true; break;
            }
        } else {
            if (rng.uniform_below(2) == 0) fx = true; else fz = true;
        }
        tracker.flip(q, fx, fz);
        size_t e_j = tracker.energy();
        size_t w_j = tracker.weight();

        bool valid_i = !truncation_k || w_i <= *truncation_k;
        bool valid_j = !truncation_k || w_j <= *truncation_k;
        double m_ij = 0.0, m_ji = 0.0;
        if (valid_i && valid_j) {
            m_ij = per_edge * std::min(1.0, std::exp(-beta * (double(e_j) - double(e_i)) / lambda));
            m_ji = per_edge * std::min(1.0, std::exp(-beta * (double(e_i) - double(e_j)) / lambda));
        }
        double pi_i = std::exp(-beta * double(e_i) / lambda);
        double pi_j = std::exp(-beta * double(e_j) / lambda);
        max_residual = std::max(max_residual, std::abs(pi_i * m_ij - pi_j * m_ji));
    }
    return max_residual;
}

/// Analytic tail bound 2n exp(-2n ln(1/delta) delta), valid for
/// beta >= 5 ln(1/delta) / s.
struct TailBound {
    double value = 0.0;
    double log_value = 0.0;
    bool beta_ok = false;
};

inline TailBound truncation_tail_bound(double beta, double soundness, double delta, size_t n) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("truncation_tail_bound: delta out of range");
    if (soundness <= 0.0) throw std::invalid_argument("truncation_tail_bound: bad soundness");
    TailBound b;
    b.log_value = std::log(2.0 * double(n)) - 2.0 * double(n) * std::log(1.0 / delta) * delta;
    b.value = std::exp(b.log_value);
    b.beta_ok = beta >= 5.0 * std::log(1.0 / delta) / soundness;
    return b;
}

/// Admissible beta interval (10/alpha) ln(D)/s <= beta <= lambda/ln(n).
/// May be empty at small n; that is reported, not an error.
struct BetaWindow {
    double beta_low = 0.0;
    double beta_high = 0.0;
    double soundness = 0.0;
    double degree = 0.0;
    bool empty() const { return beta_low > beta_high; }
};

inline BetaWindow beta_window_from(double alpha, double soundness, double degree, double lambda,
                                   size_t n) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("beta_window: bad alpha");
    if (soundness <= 0.0) throw std::invalid_argument("beta_window: bad soundness");
    BetaWindow w;
    w.soundness = soundness;
    w.degree = degree;
    w.beta_low = (10.0 / alpha) * std::log(degree) / soundness;
    w.beta_high = lambda / std::log(double(n));
    return w;
}

inline BetaWindow beta_window(const CheckSystem& sys, double alpha, double soundness) {
    Graph g = interaction_graph(sys);
    return beta_window_from(alpha, soundness, double(g.max_degree), sys.lambda().value(),
                            sys.n());
}

}  // namespace pcube
