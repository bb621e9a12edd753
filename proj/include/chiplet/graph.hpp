#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace chiplet {

using Edge = std::pair<int, int>;

/// Undirected simple graph over vertices 0..n-1. Edges are stored once with
/// first < second, sorted; neighbor lists are sorted ascending.
class AdjacencyGraph {
public:
    AdjacencyGraph() = default;
    AdjacencyGraph(int n_vertices, std::vector<Edge> edges);

    int n_vertices() const noexcept { return n_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const int> neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
    bool has_edge(int a, int b) const;

    /// Hop distances from `source`; unreachable vertices get -1.
    std::vector<int> bfs_distances(int source) const;
    bool connected() const;

    friend bool operator==(const AdjacencyGraph& a, const AdjacencyGraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

}  // namespace chiplet
