#include "chiplet/graph.hpp"

#include <algorithm>
#include <queue>

#include "chiplet/errors.hpp"

namespace chiplet {

AdjacencyGraph::AdjacencyGraph(int n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), adj_(static_cast<std::size_t>(std::max(n_vertices, 0))) {
    require(n_vertices >= 0, "vertex count must be non-negative");
    for (auto& [a, b] : edges) {
        require(a >= 0 && b >= 0 && a < n_ && b < n_, "edge endpoint out of range");
        require(a != b, "self-loops are not allowed");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (const auto& [a, b] : edges_) {
        adj_[static_cast<std::size_t>(a)].push_back(b);
        adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

bool AdjacencyGraph::has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
    const auto& list = adj_[static_cast<std::size_t>(a)];
    return std::binary_search(list.begin(), list.end(), b);
}

std::vector<int> AdjacencyGraph::bfs_distances(int source) const {
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::queue<int> frontier;
    dist[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int w : neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                frontier.push(w);
            }
        }
    }
    return dist;
}

bool AdjacencyGraph::connected() const {
    if (n_ <= 1) return true;
    const auto dist = bfs_distances(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

}  // namespace chiplet
