#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pcube {

/// Undirected simple graph, adjacency lists sorted.
struct Graph {
    std::vector<std::vector<uint32_t>> adj;
    size_t max_degree = 0;

    size_t vertex_count() const { return adj.size(); }

    void finalize() {
        max_degree = 0;
        for (auto& nb : adj) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            max_degree = std::max(max_degree, nb.size());
        }
    }

    bool has_edge(uint32_t a, uint32_t b) const {
        const auto& nb = adj.at(a);
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    /// BFS distances from `sources`; SIZE_MAX marks unreachable vertices.
    /// Stops expanding past `radius` when radius > 0.
    std::vector<size_t> bfs_distances(const std::vector<uint32_t>& sources,
                                      size_t radius = 0) const {
        std::vector<size_t> dist(adj.size(), SIZE_MAX);
        std::queue<uint32_t> q;
        for (uint32_t s : sources) {
            if (s >= adj.size()) throw std::out_of_range("bfs_distances: vertex out of range");
            if (dist[s] == SIZE_MAX) {
                dist[s] = 0;
                q.push(s);
            }
        }
        while (!q.empty()) {
            uint32_t v = q.front();
            q.pop();
            if (radius > 0 && dist[v] >= radius) continue;
            for (uint32_t u : adj[v])
                if (dist[u] == SIZE_MAX) {
                    dist[u] = dist[v] + 1;
                    q.push(u);
                }
        }
        return dist;
    }
};

/// Union-find with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    uint32_t find(uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void merge(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    size_t component_size(uint32_t v) { return size_[find(v)]; }

private:
    std::vector<uint32_t> parent_;
    std::vector<size_t> size_;
};

}  // namespace pcube
