#include "nodetok/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "nodetok/optim.hpp"
#include "nodetok/serialize.hpp"
#include "nodetok/simd/kernels.hpp"

namespace nodetok {

namespace {

double pair_distance(const Matrix& pts, NodeId a, NodeId b) {
  return std::sqrt(simd::active().squared_distance(pts.row(a).data(), pts.row(b).data(), pts.cols()));
}

bool orders_agree(Hops d1, Hops d2, double e1, double e2) { return (d1 > d2) ? e1 > e2 : e1 < e2; }

}  // namespace

double order_agreement(const Matrix& points, const AnchorEncoding& enc, std::size_t sample, std::uint64_t seed) {
  if (points.rows() != enc.node_count()) {
    throw Error("embedding has " + std::to_string(points.rows()) + " rows but the encoding has " +
                std::to_string(enc.node_count()) + " nodes");
  }
  std::uint64_t agree = 0, total = 0;
  if (sample == 0) {
    struct Pair {
      Hops d;
      double e;
    };
    std::vector<Pair> pairs;
    for (NodeId u = 0; u < enc.node_count(); ++u) {
      for (NodeId v = u + 1; v < enc.node_count(); ++v) {
        const Hops d = enc.estimate(u, v);
        if (is_reachable(d)) pairs.push_back({d, pair_distance(points, u, v)});
      }
    }
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        if (pairs[a].d == pairs[b].d) continue;
        ++total;
        agree += orders_agree(pairs[a].d, pairs[b].d, pairs[a].e, pairs[b].e);
      }
    }
  } else {
    QuadrupleSampler sampler(enc, seed, /*skip_ties=*/true);
    for (std::size_t s = 0; s < sample; ++s) {
      const Quadruple q = sampler.next();
      ++total;
      agree += orders_agree(q.d_uv, q.d_ij, pair_distance(points, q.u, q.v), pair_distance(points, q.i, q.j));
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total);
}

double order_agreement(const EmbeddingMatrix& emb, const AnchorEncoding& enc, std::size_t sample, std::uint64_t seed) {
  if (emb.graph_hash != 0 && emb.graph_hash != enc.graph_hash()) {
    throw Error("embedding graph_hash " + to_hex(emb.graph_hash) + " differs from encoding graph_hash " +
                to_hex(enc.graph_hash()));
  }
  if (emb.anchor_hash != 0 && emb.anchor_hash != anchor_hash(enc.anchor_ids())) {
    throw Error("embedding was trained on a different anchor set than the encoding");
  }
  return order_agreement(emb.values, enc, sample, seed);
}

namespace {

AnchorSet anchors_for_bound(const AnchorEncoding& enc, Hops c, std::uint64_t graph_hash) {
  AnchorSet s;
  s.anchors.assign(enc.anchor_ids().begin(), enc.anchor_ids().end());
  s.config.c = c;
  s.graph_hash = graph_hash;
  return s;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string StrategyReport::csv() const {
  std::string out = "strategy,seed,anchors,ratio,agreement,mean_err\n";
  for (const auto& r : rows) {
    out += std::string(strategy_name(r.strategy)) + "," + std::to_string(r.seed) + "," + std::to_string(r.anchors) +
           "," + fmt_double(r.ratio) + "," + fmt_double(r.agreement) + "," + fmt_double(r.mean_err) + "\n";
  }
  return out;
}

StrategyReport strategy_report(const Graph& g, std::span<const AnchorStrategy> strategies, Hops c, double cr,
                               std::span<const std::uint64_t> seeds, const EvalOptions& opts) {
  StrategyReport rep;
  const std::uint64_t gh = g.hash();
  for (AnchorStrategy s : strategies) {
    StrategySummary sum;
    sum.strategy = s;
    for (std::uint64_t seed : seeds) {
      AnchorConfig cfg;
      cfg.c = c;
      cfg.cr = cr;
      cfg.strategy = s;
      cfg.seed = seed;
      const AnchorSet set = select_anchors(g, cfg);
      const AnchorEncoding enc = encode_all(g, set);
      const BoundReport bound = verify_error_bound(g, enc, anchors_for_bound(enc, c, gh), opts.error_sampling);

      TrainConfig tc = opts.train;
      tc.seed = seed;
      const TrainResult trained = train(enc, tc);

      StrategyRow row;
      row.strategy = s;
      row.seed = seed;
      row.anchors = set.anchors.size();
      row.ratio = set.achieved_ratio;
      row.no_progress = set.no_progress;
      row.agreement = order_agreement(trained.embeddings, enc, opts.agreement_sample, opts.agreement_seed);
      row.mean_err = bound.mean_error_all_pairs;
      rep.rows.push_back(row);

      sum.anchors += static_cast<double>(row.anchors);
      sum.ratio += row.ratio;
      sum.agreement += row.agreement;
      sum.mean_err += row.mean_err;
      sum.contract_ok = sum.contract_ok && (row.ratio + 1e-12 >= cr || row.no_progress);
    }
    const double k = seeds.empty() ? 1.0 : static_cast<double>(seeds.size());
    sum.anchors /= k;
    sum.ratio /= k;
    sum.agreement /= k;
    sum.mean_err /= k;
    rep.summary.push_back(sum);
  }
  return rep;
}

std::string SweepTable::csv() const {
  std::string out = "c,cr,anchors,agreement,mean_err\n";
  for (const auto& cell : cells) {
    out += std::to_string(cell.c) + "," + fmt_double(cell.cr) + "," + std::to_string(cell.anchors) + "," +
           fmt_double(cell.agreement) + "," + fmt_double(cell.mean_err) + "\n";
  }
  return out;
}

const SweepCell& SweepTable::at(Hops c, double cr) const {
  for (const auto& cell : cells) {
    if (cell.c == c && cell.cr == cr) return cell;
  }
  throw Error("sweep has no cell for c=" + std::to_string(c) + ", cr=" + fmt_double(cr));
}

SweepTable hyperparameter_sweep(const Graph& g, std::span<const Hops> c_values, std::span<const double> cr_values,
                                const EvalOptions& opts, bool train_embeddings) {
  if (c_values.empty() || cr_values.empty()) throw Error("sweep grids must be nonempty");
  SweepTable table;
  const std::uint64_t gh = g.hash();
  for (Hops c : c_values) {
    for (double cr : cr_values) {
      AnchorConfig cfg;
      cfg.c = c;
      cfg.cr = cr;
      cfg.seed = opts.train.seed;
      const AnchorSet set = select_greedy(g, cfg);
      const AnchorEncoding enc = encode_all(g, set);
      const BoundReport bound = verify_error_bound(g, enc, anchors_for_bound(enc, c, gh), opts.error_sampling);

      SweepCell cell;
      cell.c = c;
      cell.cr = cr;
      cell.anchors = set.anchors.size();
      cell.ratio = set.achieved_ratio;
      cell.no_progress = set.no_progress;
      cell.mean_err = bound.mean_error_all_pairs;
      cell.mean_err_covered = bound.mean_error_covered_pairs;
      cell.max_err_covered = bound.max_error_covered_pairs;
      if (train_embeddings) {
        const TrainResult trained = train(enc, opts.train);
        cell.agreement = order_agreement(trained.embeddings, enc, opts.agreement_sample, opts.agreement_seed);
      }
      table.cells.push_back(cell);
    }
  }
  return table;
}

double community_probe(const Matrix& features, std::span<const int> labels, std::uint64_t seed,
                       const ProbeOptions& opts) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (labels.size() != n) throw Error("community_probe needs one label per node");
  if (n < 2) throw Error("community_probe needs at least 2 nodes");

  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() == 1) return 1.0;
  const std::size_t num_classes = classes.size();
  auto class_index = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  const std::size_t n_train =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(opts.train_fraction * static_cast<double>(n))), 1,
                              n - 1);
  const std::span<const std::size_t> train_idx(order.data(), n_train);
  const std::span<const std::size_t> test_idx(order.data() + n_train, n - n_train);

  std::vector<char> seen(num_classes, 0);
  for (std::size_t i : train_idx) seen[class_index(labels[i])] = 1;
  for (std::size_t k = 0; k < num_classes; ++k) {
    if (!seen[k]) {
      throw Error("class " + std::to_string(classes[k]) +
                  " is absent from the training split; try a different seed");
    }
  }

  // Standardize with training statistics.
  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (std::size_t i : train_idx) {
    for (std::size_t f = 0; f < d; ++f) mean[f] += features(i, f);
  }
  for (double& m : mean) m /= static_cast<double>(n_train);
  for (std::size_t i : train_idx) {
    for (std::size_t f = 0; f < d; ++f) scale[f] += (features(i, f) - mean[f]) * (features(i, f) - mean[f]);
  }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(n_train));
    s = s > 1e-12 ? 1.0 / s : 0.0;
  }
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) x(i, f) = (features(i, f) - mean[f]) * scale[f];
  }

  // Parameters: weights (num_classes x d) followed by biases.
  std::vector<double> params(num_classes * d + num_classes, 0.0), grad(params.size());
  Adam adam(params.size(), AdamOptions{.learning_rate = opts.learning_rate});
  const auto& k = simd::active();
  std::vector<double> logits(num_classes);
  auto compute_logits = [&](std::size_t i) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      logits[c] = k.dot(params.data() + c * d, x.row(i).data(), d) + params[num_classes * d + c];
    }
  };
  const double inv_n = 1.0 / static_cast<double>(n_train);
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i : train_idx) {
      compute_logits(i);
      const double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0.0;
      for (double& l : logits) z += (l = std::exp(l - mx));
      const std::size_t target = class_index(labels[i]);
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double g = (logits[c] / z - (c == target ? 1.0 : 0.0)) * inv_n;
        k.axpy(g, x.row(i).data(), grad.data() + c * d, d);
        grad[num_classes * d + c] += g;
      }
    }
    for (std::size_t w = 0; w < num_classes * d; ++w) grad[w] += opts.l2 * params[w];
    adam.step(params, grad);
  }

  std::size_t correct = 0;
  for (std::size_t i : test_idx) {
    compute_logits(i);
    const auto pred = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    correct += pred == class_index(labels[i]);
  }
  return static_cast<double>(correct) / static_cast<double>(test_idx.size());
}

Projection pca_project(const Matrix& data, std::size_t dims) {
  const std::size_t n = data.rows();
  const std::size_t w = data.cols();
  if (dims > w) throw Error("cannot project " + std::to_string(w) + "-wide data onto " + std::to_string(dims) + " dims");
  if (n == 0) throw Error("cannot project an empty matrix");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(w));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < w; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data(i, j);
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < evecs.cols(); ++c) {
    Eigen::Index arg = 0;
    evecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (evecs(arg, c) < 0) evecs.col(c) *= -1.0;
  }
  const auto kept = static_cast<Eigen::Index>(dims);
  const Eigen::MatrixXd basis = evecs.leftCols(kept);
  const Eigen::MatrixXd proj = x * basis;
  const Eigen::MatrixXd residual = x - proj * basis.transpose();

  Projection out;
  out.coords = Matrix(n, dims);
  out.components = Matrix(dims, w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dims; ++c) out.coords(i, c) = proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
  }
  for (std::size_t c = 0; c < dims; ++c) {
    for (std::size_t j = 0; j < w; ++j) {
      out.components(c, j) = basis(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
    }
  }
  for (Eigen::Index c = 0; c < evals.size(); ++c) out.eigenvalues.push_back(std::max(0.0, evals(c)));
  out.variances.assign(out.eigenvalues.begin(), out.eigenvalues.begin() + static_cast<std::ptrdiff_t>(dims));
  out.reconstruction_error = residual.squaredNorm() / static_cast<double>(n);
  return out;
}

std::string projection_csv(const Projection& p, std::span<const NodeId> anchors) {
  std::set<NodeId> anchor_set(anchors.begin(), anchors.end());
  std::string out = "node";
  for (std::size_t c = 0; c < p.coords.cols(); ++c) out += ",pc" + std::to_string(c + 1);
  out += ",is_anchor\n";
  for (std::size_t i = 0; i < p.coords.rows(); ++i) {
    out += std::to_string(i);
    for (std::size_t c = 0; c < p.coords.cols(); ++c) out += "," + fmt_double(p.coords(i, c));
    out += anchor_set.count(static_cast<NodeId>(i)) ? ",1\n" : ",0\n";
  }
  return out;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["note"] =
      "order_agreement and community probes are desk-scale proxies for downstream model accuracy; "
      "they measure rank preservation of estimated graph distances, not task performance";
  j["order_agreement"] = r.order_agreement;
  j["agreement_sample"] = r.agreement_sample;
  j["anchor_count"] = r.anchor_count;
  j["node_count"] = r.node_count;
  if (r.coverage_ratio) j["coverage_ratio"] = *r.coverage_ratio;
  if (r.distance) {
    const auto& b = *r.distance;
    j["distance_error"] = {{"mean", b.mean_error_all_pairs},
                           {"max", b.max_error_all_pairs},
                           {"histogram", b.error_histogram},
                           {"pairs", b.pairs_checked}};
    j["bound"] = to_json(b);
  }
  j["config"] = r.config;
  return j;
}

}  // namespace nodetok
