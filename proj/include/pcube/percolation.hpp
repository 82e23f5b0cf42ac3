#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "pcube/graph.hpp"

namespace pcube {

/// Cluster statistics of a vertex set X on a host graph.
/// maxconn_lower == maxconn_upper and exact == true when the search certified
/// the optimum; otherwise the pair brackets it.
struct ClusterReport {
    std::map<size_t, size_t> component_sizes;  // size -> count (alpha = 1 components)
    size_t maxconn_lower = 0;
    size_t maxconn_upper = 0;
    double alpha = 1.0;
    bool exact = true;

    size_t maxconn() const { return maxconn_lower; }
};

/// Components of the subgraph induced on X (the alpha = 1 case), via
/// union-find.
inline ClusterReport connected_components(const Graph& g, const std::vector<uint32_t>& x) {
    ClusterReport rep;
    rep.alpha = 1.0;
    if (x.empty()) return rep;
    std::vector<uint32_t> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.back() >= g.vertex_count())
        throw std::out_of_range("connected_components: vertex out of range");

    std::vector<uint32_t> local(g.vertex_count(), UINT32_MAX);
    for (size_t i = 0; i < sorted.size(); ++i) local[sorted[i]] = uint32_t(i);
    UnionFind uf(sorted.size());
    for (uint32_t v : sorted)
        for (uint32_t u : g.adj[v])
            if (local[u] != UINT32_MAX) uf.merge(local[v], local[u]);

    std::map<uint32_t, size_t> roots;
    for (size_t i = 0; i < sorted.size(); ++i) ++roots[uf.find(uint32_t(i))];
    for (const auto& [_, size] : roots) {
        ++rep.component_sizes[size];
        rep.maxconn_lower = std::max(rep.maxconn_lower, size);
    }
    rep.maxconn_upper = rep.maxconn_lower;
    return rep;
}

struct MaxconnOptions {
    size_t size_cap = 30;
    uint64_t node_budget = 20'000'000;
};

namespace detail {

/// Duplicate-free enumeration of connected vertex sets containing `root`,
/// avoiding `forbidden`, pruned by the best achievable alpha-subset size.
/// Returns false if the node budget ran out.
class AlphaSubsetSearch {
public:
    AlphaSubsetSearch(const Graph& g, const std::vector<char>& in_x,
                      const std::vector<char>& forbidden, double alpha, size_t cap,
                      uint64_t budget)
        : g_(g), in_x_(in_x), forbidden_(forbidden), alpha_(alpha), cap_(cap), budget_(budget),
          state_(g.vertex_count(), Free) {}

    size_t run(uint32_t root, size_t x_remaining, size_t best_so_far) {
        best_ = best_so_far;
        x_remaining_ = x_remaining;
        sub_.clear();
        state_.assign(g_.vertex_count(), Free);
        for (size_t v = 0; v < state_.size(); ++v)
            if (forbidden_[v]) state_[v] = Banned;
        add_vertex(root);
        std::vector<uint32_t> ext;
        for (uint32_t u : g_.adj[root])
            if (state_[u] == Free) {
                state_[u] = Seen;
                ext.push_back(u);
            }
        extend(ext);
        for (uint32_t u : ext) state_[u] = Free;
        remove_vertex(root);
        return best_;
    }

    bool exhausted() const { return budget_ == 0; }

private:
    enum State : char { Free, Seen, InSub, Banned };

    void add_vertex(uint32_t v) {
        state_[v] = InSub;
        sub_.push_back(v);
        if (in_x_[v]) {
            ++x_in_sub_;
            --x_remaining_;
        }
    }
    void remove_vertex(uint32_t v) {
        state_[v] = Seen;
        sub_.pop_back();
        if (in_x_[v]) {
            --x_in_sub_;
            ++x_remaining_;
        }
    }

    void extend(const std::vector<uint32_t>& ext) {
        if (budget_ == 0) return;
        --budget_;
        if (double(x_in_sub_) >= alpha_ * double(sub_.size()))
            best_ = std::max(best_, sub_.size());
        if (sub_.size() >= cap_) return;
        // no extension can beat the current best
        size_t reachable = std::min(cap_, size_t(std::floor(
            double(x_in_sub_ + x_remaining_) / alpha_ + 1e-9)));
        if (reachable <= best_) return;

        for (size_t i = 0; i < ext.size(); ++i) {
            uint32_t w = ext[i];
            add_vertex(w);
            std::vector<uint32_t> next(ext.begin() + i + 1, ext.end());
            size_t added_from = next.size();
            for (uint32_t u : g_.adj[w])
                if (state_[u] == Free) {
                    state_[u] = Seen;
                    next.push_back(u);
                }
            extend(next);
            for (size_t j = added_from; j < next.size(); ++j) state_[next[j]] = Free;
            remove_vertex(w);
            state_[w] = Banned;  // sets containing w were all enumerated
        }
        for (size_t i = 0; i < ext.size(); ++i)
            if (state_[ext[i]] == Banned) state_[ext[i]] = Seen;
    }

    const Graph& g_;
    const std::vector<char>& in_x_;
    const std::vector<char>& forbidden_;
    double alpha_;
    size_t cap_;
    uint64_t budget_;
    std::vector<char> state_;
    std::vector<uint32_t> sub_;
    size_t x_in_sub_ = 0;
    size_t x_remaining_ = 0;
    size_t best_ = 0;
};

/// Partition X into groups no alpha-subset can span: two X vertices farther
/// apart than 1 + |X| (1-alpha)/alpha cannot be bridged within the non-X
/// budget of any alpha-subset.
inline std::vector<std::vector<uint32_t>> distance_groups(const Graph& g,
                                                          const std::vector<uint32_t>& x,
                                                          size_t threshold) {
    std::vector<char> in_x(g.vertex_count(), 0);
    for (uint32_t v : x) in_x[v] = 1;
    UnionFind uf(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        auto dist = g.bfs_distances({x[i]}, threshold);
        for (size_t j = i + 1; j < x.size(); ++j)
            if (dist[x[j]] != SIZE_MAX) uf.merge(uint32_t(i), uint32_t(j));
    }
    std::map<uint32_t, std::vector<uint32_t>> groups;
    for (size_t i = 0; i < x.size(); ++i) groups[uf.find(uint32_t(i))].push_back(x[i]);
    std::vector<std::vector<uint32_t>> out;
    for (auto& [_, grp] : groups) out.push_back(std::move(grp));
    return out;
}

}  // namespace detail

/// Largest connected S with |S intersect X| >= alpha |S|. Exact (by seeded
/// branch-and-bound) when the certified optimum fits under size_cap;
/// otherwise reports the best found as lower bound and the
/// distance-ceil(1/alpha) clustering estimate as upper bound.
inline ClusterReport maxconn_alpha(const Graph& g, const std::vector<uint32_t>& x, double alpha,
                                   MaxconnOptions opts = {}) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("maxconn_alpha: bad alpha");
    if (opts.size_cap < 1) throw std::invalid_argument("maxconn_alpha: bad size_cap");
    ClusterReport rep = connected_components(g, x);
    rep.alpha = alpha;
    if (x.empty() || alpha == 1.0) return rep;

    std::vector<uint32_t> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<char> in_x(g.vertex_count(), 0);
    for (uint32_t v : sorted) in_x[v] = 1;

    size_t span_threshold =
        1 + size_t(std::floor(double(sorted.size()) * (1.0 - alpha) / alpha + 1e-9));
    auto groups = detail::distance_groups(g, sorted, span_threshold);

    size_t best = rep.maxconn_lower;  // any X component is an alpha-subset
    bool certified = true;
    for (const auto& grp : groups) {
        size_t group_cap = size_t(std::floor(double(grp.size()) / alpha + 1e-9));
        if (group_cap > opts.size_cap) certified = false;
        size_t cap = std::min(group_cap, opts.size_cap);

        std::vector<char> forbidden(g.vertex_count(), 0);
        for (uint32_t v : sorted) forbidden[v] = 1;  // other groups' X vertices
        for (uint32_t v : grp) forbidden[v] = 0;

        detail::AlphaSubsetSearch search(g, in_x, forbidden, alpha, cap, opts.node_budget);
        for (uint32_t root : grp) {
            best = std::max(best, search.run(root, grp.size(), best));
            if (search.exhausted()) {
                certified = false;
                break;
            }
            forbidden[root] = 1;  // every set containing root is done
        }
    }

    rep.maxconn_lower = best;
    if (certified) {
        rep.maxconn_upper = best;
        rep.exact = true;
        return rep;
    }
    // fallback estimate: distance-ceil(1/alpha) clusters of X, inflated
    size_t inflate = size_t(std::ceil(1.0 / alpha - 1e-9));
    size_t upper = 0;
    for (const auto& grp : detail::distance_groups(g, sorted, inflate))
        upper = std::max(upper, grp.size() * inflate);
    rep.maxconn_upper = std::max(upper, best);
    rep.exact = false;
    return rep;
}

/// Tail bound for cluster sizes of locally-stochastic noise:
/// P(maxconn_alpha >= t) <= 2n (2 D e p^alpha)^t, applicable when p < c/D.
struct PercolationBound {
    double value = 0.0;
    double log_value = 0.0;  // natural log; meaningful even when value underflows
    bool applicable = false;
};

inline PercolationBound percolation_bound(double degree, double alpha, double p, size_t t,
                                          size_t n, double c = 1.0 / (2.0 * M_E)) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("percolation_bound: bad p");
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("percolation_bound: bad alpha");
    if (degree <= 0.0 || n == 0) throw std::invalid_argument("percolation_bound: bad inputs");
    PercolationBound b;
    b.applicable = p < c / degree;
    if (p == 0.0) {
        b.value = t == 0 ? 2.0 * double(n) : 0.0;
        b.log_value = t == 0 ? std::log(2.0 * double(n)) : -HUGE_VAL;
        return b;
    }
    b.log_value = std::log(2.0 * double(n)) +
                  double(t) * (std::log(2.0 * degree * M_E) + alpha * std::log(p));
    b.value = std::exp(b.log_value);
    return b;
}

/// Containment-frequency estimates over probe sets, with Wilson intervals and
/// the implied per-set local-stochasticity parameter p_hat^(1/|S|).
struct ProbeStat {
    std::vector<uint32_t> probe;
    size_t hits = 0;
    size_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double implied = 0.0;       // p_hat^(1/|S|)
    double implied_high = 0.0;  // ci_high^(1/|S|)
};

inline std::pair<double, double> wilson_interval(size_t hits, size_t trials, double z = 1.96) {
    if (trials == 0) return {0.0, 1.0};
    double ph = double(hits) / double(trials);
    double n = double(trials);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = ph + z2 / (2.0 * n);
    double margin = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - margin) / denom), std::min(1.0, (center + margin) / denom)};
}

inline std::vector<ProbeStat> local_stochasticity_estimate(
    const std::vector<std::vector<uint32_t>>& samples,
    const std::vector<std::vector<uint32_t>>& probes) {
    if (samples.empty())
        throw std::invalid_argument("local_stochasticity_estimate: no samples");
    std::vector<ProbeStat> out;
    out.reserve(probes.size());
    for (const auto& probe : probes) {
        ProbeStat st;
        st.probe = probe;
        st.trials = samples.size();
        for (const auto& s : samples) {
            bool contained = true;
            for (uint32_t v : probe)
                if (!std::binary_search(s.begin(), s.end(), v)) {
                    contained = false;
                    break;
                }
            if (contained) ++st.hits;
        }
        st.p_hat = double(st.hits) / double(st.trials);
        auto [lo, hi] = wilson_interval(st.hits, st.trials);
        st.ci_low = lo;
        st.ci_high = hi;
        if (probe.empty()) {
            st.implied = st.implied_high = 1.0;
        } else {
            double inv = 1.0 / double(probe.size());
            st.implied = std::pow(st.p_hat, inv);
            st.implied_high = std::pow(st.ci_high, inv);
        }
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace pcube
