#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "pcube/amplify.hpp"
#include "pcube/code.hpp"
#include "pcube/graph.hpp"

namespace pcube {

/// A base code plus (optionally) a family of amplified checks. The amplified
/// checks participate in energies but never in decoding; both sets share the
/// same ground space.
class CheckSystem {
public:
    explicit CheckSystem(CssCodePtr code) : code_(std::move(code)) { init(); }
    CheckSystem(CssCodePtr code, AmplifiedCheckSet amp)
        : code_(std::move(code)), amp_(std::move(amp)) {
        if (!amp_.empty() && amp_.m_base != code_->m())
            throw std::invalid_argument("CheckSystem: amplified set built over a different base");
        init();
    }

    const CssCode& base() const { return *code_; }
    CssCodePtr base_ptr() const { return code_; }
    const AmplifiedCheckSet& amplified() const { return amp_; }

    size_t n() const { return code_->n(); }
    size_t m_base() const { return code_->m(); }
    size_t m_total() const { return m_base() + amp_.m_prime(); }
    Ratio lambda() const { return Ratio(m_total(), n()); }

    /// Subsets containing base check c.
    const std::vector<uint32_t>& subsets_of(size_t c) const { return subsets_of_[c]; }

private:
    void init() {
        subsets_of_.assign(code_->m(), {});
        for (size_t s = 0; s < amp_.subsets.size(); ++s)
            for (uint32_t c : amp_.subsets[s]) subsets_of_[c].push_back(uint32_t(s));
    }
    CssCodePtr code_;
    AmplifiedCheckSet amp_;
    std::vector<std::vector<uint32_t>> subsets_of_;
};

/// Union construction: base checks plus amplified checks as one system.
inline CheckSystem union_system(CssCodePtr code, AmplifiedCheckSet amp) {
    return CheckSystem(std::move(code), std::move(amp));
}

/// Violated base checks, X rows first then Z rows.
inline BitVector base_violations(const CheckSystem& sys, const PauliError& e) {
    Syndrome s = syndrome(sys.base(), e);
    BitVector v(sys.m_base());
    size_t mx = sys.base().m_x();
    for (uint32_t r : s.x_syndrome.ones()) v.set(r, true);
    for (uint32_t r : s.z_syndrome.ones()) v.set(mx + r, true);
    return v;
}

/// Violated base checks plus amplified subsets containing at least one
/// violated constituent. Unscaled count; Boltzmann factors divide by lambda.
inline size_t energy(const CheckSystem& sys, const PauliError& e) {
    BitVector v = base_violations(sys, e);
    size_t base = v.popcount();
    if (sys.amplified().empty()) return base;
    return base + amplified_violations(sys.amplified(), v);
}

/// Qubits as vertices; an edge wherever two qubits share a base or amplified
/// check.
inline Graph interaction_graph(const CheckSystem& sys) {
    const CssCode& code = sys.base();
    std::vector<std::set<uint32_t>> adj(code.n());
    auto link = [&adj](const std::vector<uint32_t>& sup) {
        for (size_t i = 0; i < sup.size(); ++i)
            for (size_t j = i + 1; j < sup.size(); ++j) {
                adj[sup[i]].insert(sup[j]);
                adj[sup[j]].insert(sup[i]);
            }
    };
    for (size_t r = 0; r < code.m_x(); ++r) link(code.h_x().row(r));
    for (size_t r = 0; r < code.m_z(); ++r) link(code.h_z().row(r));
    for (const auto& s : sys.amplified().subsets) {
        std::vector<uint32_t> sup;
        for (uint32_t c : s) {
            const auto& row = c < code.m_x() ? code.h_x().row(c) : code.h_z().row(c - code.m_x());
            sup.insert(sup.end(), row.begin(), row.end());
        }
        std::sort(sup.begin(), sup.end());
        sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
        link(sup);
    }
    Graph g;
    g.adj.reserve(adj.size());
    for (auto& s : adj) g.adj.emplace_back(s.begin(), s.end());
    g.finalize();
    return g;
}

/// Empirical lower estimate of the soundness parameter: per error weight w,
/// min and mean over samples of (violated fraction) / (w/n).
struct SoundnessStats {
    struct WeightStat {
        size_t weight = 0;
        double min_ratio = 0.0;
        double mean_ratio = 0.0;
        size_t samples = 0;
    };
    std::vector<WeightStat> per_weight;
    double overall_min = 0.0;
};

/// Samples `trials` errors at each weight 1..max_weight (uniform support,
/// uniform non-identity Pauli per qubit). max_weight must stay below half the
/// minimal centralizer weight so raw weight equals coset weight; pass that
/// bound in min_weight_hint for systems too large to exhaust.
inline SoundnessStats soundness_probe(const CheckSystem& sys, size_t trials, size_t max_weight,
                                      uint64_t seed, size_t min_weight_hint = 0) {
    size_t d = min_weight_hint;
    if (d == 0) d = min_centralizer_weight(sys.base());
    // raw weight w is coset-minimal as long as d - w >= w
    if (2 * max_weight > d)
        throw std::invalid_argument("soundness_probe: max_weight above d/2 refused");
    SoundnessStats stats;
    stats.overall_min = HUGE_VAL;
    Rng rng(seed);
    size_t n = sys.n();
    double m_total = double(sys.m_total());
    for (size_t w = 1; w <= max_weight; ++w) {
        SoundnessStats::WeightStat ws;
        ws.weight = w;
        ws.samples = trials;
        ws.min_ratio = HUGE_VAL;
        double sum = 0.0;
        for (size_t t = 0; t < trials; ++t) {
            PauliError e(n);
            std::vector<uint32_t> support;
            while (support.size() < w) {
                auto q = uint32_t(rng.uniform_below(n));
                if (std::find(support.begin(), support.end(), q) == support.end())
                    support.push_back(q);
            }
            for (uint32_t q : support) {
                switch (rng.uniform_below(3)) {
                    case 0: e.x.set(q, true); break;
                    case 1: e.x.set(q, true); e.z.set(q, true); break;
                    default: e.z.set(q, true); break;
                }
            }
            double violated_fraction = double(energy(sys, e)) / m_total;
            double ratio = violated_fraction / (double(w) / double(n));
            ws.min_ratio = std::min(ws.min_ratio, ratio);
            sum += ratio;
        }
        ws.mean_ratio = trials ? sum / double(trials) : 0.0;
        stats.overall_min = std::min(stats.overall_min, ws.min_ratio);
        stats.per_weight.push_back(ws);
    }
    return stats;
}

/// Bipartite qubit/check incidence graph of the base code: qubits are
/// vertices 0..n-1, X checks n..n+m_x-1, Z checks after those.
inline Graph tanner_graph(const CssCode& code) {
    Graph g;
    g.adj.assign(code.n() + code.m(), {});
    auto add = [&g](size_t a, size_t b) {
        g.adj[a].push_back(uint32_t(b));
        g.adj[b].push_back(uint32_t(a));
    };
    for (size_t r = 0; r < code.m_x(); ++r)
        for (uint32_t q : code.h_x().row(r)) add(q, code.n() + r);
    for (size_t r = 0; r < code.m_z(); ++r)
        for (uint32_t q : code.h_z().row(r)) add(q, code.n() + code.m_x() + r);
    for (auto& v : g.adj) std::sort(v.begin(), v.end());
    g.finalize();
    return g;
}

}  // namespace pcube
