#include "nodetok/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nodetok::centrality {

std::vector<double> degree(const Graph& g) {
  std::vector<double> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) out[v] = static_cast<double>(g.degree(v));
  return out;
}

std::vector<double> closeness(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  std::vector<Hops> dist(n);
  BfsScratch scratch(n);
  for (NodeId v = 0; v < n; ++v) {
    scratch.run(g, v, dist);
    double total = 0.0;
    std::size_t reached = 0;
    for (NodeId w : scratch.visited()) {
      total += dist[w];
      ++reached;
    }
    if (total > 0.0) {
      const double r1 = static_cast<double>(reached - 1);
      out[v] = (r1 / static_cast<double>(n - 1)) * (r1 / total);
    }
  }
  return out;
}

namespace {

double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace

std::vector<double> eigenvector(const Graph& g, const PowerIterationOptions& opts) {
  const std::size_t n = g.node_count();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1))));
  std::vector<double> next(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double s = x[v];
      for (NodeId w : g.neighbors(v)) s += x[w];
      next[v] = s;
    }
    double norm = 0.0;
    for (double val : next) norm += val * val;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error("eigenvector: power iteration collapsed to zero");
    for (double& val : next) val /= norm;
    const double delta = l1_diff(x, next);
    x.swap(next);
    if (delta < opts.tolerance * static_cast<double>(n)) return x;
  }
  throw Error("eigenvector: power iteration did not converge within " + std::to_string(opts.max_iterations) +
              " iterations");
}

std::vector<double> pagerank(const Graph& g, double damping, const PowerIterationOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) == 0) dangling += rank[v];
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    for (NodeId v = 0; v < n; ++v) {
      double s = 0.0;
      for (NodeId w : g.neighbors(v)) s += rank[w] / static_cast<double>(g.degree(w));
      next[v] = base + damping * s;
    }
    const double delta = l1_diff(rank, next);
    rank.swap(next);
    if (delta < opts.tolerance) return rank;
  }
  throw Error("pagerank: power iteration did not converge within " + std::to_string(opts.max_iterations) +
              " iterations");
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  std::vector<NodeId> stack;
  std::vector<Hops> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> queue(n);
  stack.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    stack.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const NodeId v = queue[head++];
      stack.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Predecessors of w are neighbors one hop closer to s.
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] != kUnreachable && dist[v] + 1 == dist[w]) {
          delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  for (double& b : bc) b *= 0.5;
  return bc;
}

std::vector<NodeId> rank_descending(const std::vector<double>& scores) {
  const double scale = scores.empty() ? 1.0 : std::max(1e-300, *std::max_element(scores.begin(), scores.end()));
  std::vector<long long> key(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) key[i] = std::llround(scores[i] / scale * 1e12);
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return key[a] > key[b]; });
  return order;
}

}  // namespace nodetok::centrality
