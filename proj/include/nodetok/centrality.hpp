#pragma once

#include <cstddef>
#include <vector>

#include "nodetok/graph.hpp"

namespace nodetok::centrality {

std::vector<double> degree(const Graph& g);

/// Closeness within each node's component, scaled by the reachable
/// fraction: ((r-1)/(n-1)) * ((r-1)/sum_dist). Isolated nodes score 0.
std::vector<double> closeness(const Graph& g);

struct PowerIterationOptions {
  std::size_t max_iterations = 1000;
  double tolerance = 1e-12;
};

/// Principal eigenvector of A + I (the shift keeps bipartite graphs from
/// oscillating), L2-normalized with non-negative entries. Throws on
/// non-convergence.
std::vector<double> eigenvector(const Graph& g, const PowerIterationOptions& opts = {});

/// PageRank with uniform teleport; dangling mass is spread uniformly.
std::vector<double> pagerank(const Graph& g, double damping = 0.85, const PowerIterationOptions& opts = {});

/// Brandes' algorithm, unnormalized, each unordered pair counted once.
std::vector<double> betweenness(const Graph& g);

/// Node ids sorted by descending score, ties by ascending id. Scores equal
/// to within 1e-12 relative are treated as ties.
std::vector<NodeId> rank_descending(const std::vector<double>& scores);

}  // namespace nodetok::centrality
