#include "nodetok/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <tuple>

#include "nodetok/simd/kernels.hpp"

namespace nodetok {

void TrainConfig::validate() const {
  if (dim < 2) throw Error("embedding dim must be >= 2");
  if (hidden == 0 || epochs == 0 || quadruples_per_epoch == 0 || batch_size == 0) {
    throw Error("hidden width, epochs, quadruples per epoch and batch size must be positive");
  }
  if (!(learning_rate > 0.0) || !(eps_norm > 0.0)) throw Error("learning rate and eps_norm must be positive");
}

std::uint64_t anchor_hash(std::span<const NodeId> anchors) {
  std::string text;
  for (NodeId a : anchors) {
    text += std::to_string(a);
    text += '\n';
  }
  return fnv1a64(text);
}

Matrix normalize_encoding(const AnchorEncoding& enc) {
  Matrix out(enc.node_count(), enc.anchor_count());
  const auto vals = enc.values();
  auto dst = out.data();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    dst[i] = is_reachable(vals[i]) ? 1.0 / (1.0 + static_cast<double>(vals[i])) : 0.0;
  }
  return out;
}

namespace {

// -[y ln s(x) + (1-y) ln(1 - s(x))] written to avoid overflow for large |x|.
double bce_with_logit(double x, int y) { return std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

QuadrupleLoss quadruple_loss(std::span<const double> e_u, std::span<const double> e_v, std::span<const double> e_i,
                             std::span<const double> e_j, int y, double eps_norm) {
  const std::size_t n = e_u.size();
  if (e_v.size() != n || e_i.size() != n || e_j.size() != n) throw Error("quadruple_loss: embedding widths differ");
  if (!all_finite(e_u) || !all_finite(e_v) || !all_finite(e_i) || !all_finite(e_j)) {
    throw Error("quadruple_loss: non-finite embedding entry");
  }
  const auto& k = simd::active();
  const double d1 = std::sqrt(k.squared_distance(e_u.data(), e_v.data(), n) + eps_norm);
  const double d2 = std::sqrt(k.squared_distance(e_i.data(), e_j.data(), n) + eps_norm);
  const double x = d1 - d2;

  QuadrupleLoss out;
  out.margin = x;
  out.loss = bce_with_logit(x, y);
  const double dx = sigmoid(x) - static_cast<double>(y);
  for (auto& g : out.grads) g.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const double g1 = dx * (e_u[t] - e_v[t]) / d1;
    const double g2 = -dx * (e_i[t] - e_j[t]) / d2;
    out.grads[0][t] = g1;
    out.grads[1][t] = -g1;
    out.grads[2][t] = g2;
    out.grads[3][t] = -g2;
  }
  return out;
}

QuadrupleSampler::QuadrupleSampler(const AnchorEncoding& enc, std::uint64_t seed, bool skip_ties)
    : enc_(&enc), rng_(seed), skip_ties_(skip_ties) {
  if (enc.node_count() < 2) throw Error("quadruple sampling needs at least 2 nodes");
}

std::pair<NodeId, NodeId> QuadrupleSampler::draw_pair() {
  const auto n = enc_->node_count();
  const auto a = static_cast<NodeId>(rng_() % n);
  auto b = static_cast<NodeId>(rng_() % (n - 1));
  if (b >= a) ++b;
  return {a, b};
}

Quadruple QuadrupleSampler::next() {
  while (true) {
    if (window_draws_ == kWindow) {
      if (window_accepts_ * 100 < kWindow) {
        throw Error("quadruple sampler rejected more than 99% of " + std::to_string(kWindow) +
                    " draws; the graph is too fragmented to sample reachable pairs");
      }
      window_draws_ = 0;
      window_accepts_ = 0;
    }
    ++window_draws_;
    Quadruple q;
    std::tie(q.u, q.v) = draw_pair();
    std::tie(q.i, q.j) = draw_pair();
    q.d_uv = enc_->estimate(q.u, q.v);
    q.d_ij = enc_->estimate(q.i, q.j);
    if (!is_reachable(q.d_uv) || !is_reachable(q.d_ij)) {
      ++rejected_unreachable_;
      continue;
    }
    if (skip_ties_ && q.d_uv == q.d_ij) {
      ++rejected_ties_;
      continue;
    }
    q.y = q.d_uv > q.d_ij ? 1 : 0;
    ++window_accepts_;
    return q;
  }
}

QuadrupleBatch sample_quadruples(const AnchorEncoding& enc, std::size_t count, std::uint64_t seed, bool skip_ties) {
  QuadrupleSampler sampler(enc, seed, skip_ties);
  QuadrupleBatch out;
  out.items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.items.push_back(sampler.next());
  out.rejected_unreachable = sampler.rejected_unreachable();
  out.rejected_ties = sampler.rejected_ties();
  return out;
}

namespace {

// Distinct nodes referenced by a batch and their rows gathered from features.
struct BatchNodes {
  std::vector<NodeId> ids;
  Matrix features;

  std::size_t slot(NodeId v) const {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  }
};

BatchNodes gather(const Matrix& features, std::span<const Quadruple> batch) {
  BatchNodes out;
  out.ids.reserve(batch.size() * 4);
  for (const auto& q : batch) out.ids.insert(out.ids.end(), {q.u, q.v, q.i, q.j});
  std::sort(out.ids.begin(), out.ids.end());
  out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
  for (NodeId v : out.ids) {
    if (v >= features.rows()) throw Error("quadruple references node " + std::to_string(v) + " beyond the features");
  }
  out.features = Matrix(out.ids.size(), features.cols());
  for (std::size_t s = 0; s < out.ids.size(); ++s) {
    std::copy_n(features.row(out.ids[s]).begin(), features.cols(), out.features.row(s).begin());
  }
  return out;
}

}  // namespace

double batch_loss(const MlpParams& params, const Matrix& features, std::span<const Quadruple> batch,
                  double eps_norm, MlpParams* grad) {
  if (batch.empty()) return 0.0;
  const BatchNodes nodes = gather(features, batch);
  const ForwardCache cache = forward_cached(params, nodes.features);
  const Matrix& emb = cache.output;
  const double scale = 1.0 / static_cast<double>(batch.size());
  Matrix grad_emb(emb.rows(), emb.cols());
  double total = 0.0;
  const auto& k = simd::active();
  for (const auto& q : batch) {
    const std::size_t su = nodes.slot(q.u), sv = nodes.slot(q.v), si = nodes.slot(q.i), sj = nodes.slot(q.j);
    const auto ql = quadruple_loss(emb.row(su), emb.row(sv), emb.row(si), emb.row(sj), q.y, eps_norm);
    total += ql.loss;
    if (grad != nullptr) {
      const std::size_t w = emb.cols();
      k.axpy(scale, ql.grads[0].data(), grad_emb.row(su).data(), w);
      k.axpy(scale, ql.grads[1].data(), grad_emb.row(sv).data(), w);
      k.axpy(scale, ql.grads[2].data(), grad_emb.row(si).data(), w);
      k.axpy(scale, ql.grads[3].data(), grad_emb.row(sj).data(), w);
    }
  }
  if (grad != nullptr) backward(params, cache, grad_emb, *grad);
  return total * scale;
}

Trainer::Trainer(const MlpParams& init, const TrainConfig& cfg)
    : cfg_(cfg),
      params_(init),
      grad_(MlpParams::zeros_like(init)),
      adam_(init.parameter_count(), AdamOptions{.learning_rate = cfg.learning_rate}) {}

double Trainer::step(const Matrix& features, std::span<const Quadruple> batch) {
  std::fill(grad_.flat().begin(), grad_.flat().end(), 0.0);
  const double loss = batch_loss(params_, features, batch, cfg_.eps_norm, &grad_);
  if (!std::isfinite(loss)) throw Error("non-finite batch loss");
  adam_.step(params_.flat(), grad_.flat());
  return loss;
}

TrainResult train(const AnchorEncoding& enc, const TrainConfig& cfg) {
  cfg.validate();
  const Matrix features = normalize_encoding(enc);
  Trainer trainer(MlpParams::init_uniform(enc.anchor_count(), cfg.hidden, cfg.dim, cfg.seed), cfg);
  // Separate stream from initialization so changing widths leaves sampling intact.
  QuadrupleSampler sampler(enc, cfg.seed ^ 0x9e3779b97f4a7c15ULL, cfg.skip_ties);

  TrainResult out;
  out.loss_history.reserve(cfg.epochs);
  std::vector<Quadruple> batch;
  batch.reserve(cfg.batch_size);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_total = 0.0;
    std::size_t remaining = cfg.quadruples_per_epoch;
    std::size_t batch_index = 0;
    while (remaining > 0) {
      const std::size_t b = std::min(remaining, cfg.batch_size);
      batch.clear();
      for (std::size_t i = 0; i < b; ++i) batch.push_back(sampler.next());
      double loss = 0.0;
      try {
        loss = trainer.step(features, batch);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "training aborted at epoch " << epoch << ", batch " << batch_index << ": " << e.what();
        throw Error(msg.str());
      }
      epoch_total += loss * static_cast<double>(b);
      remaining -= b;
      ++batch_index;
    }
    out.loss_history.push_back(epoch_total / static_cast<double>(cfg.quadruples_per_epoch));
  }

  out.params = trainer.params();
  if (!out.params.all_finite()) throw Error("training produced non-finite parameters");
  out.embeddings.values = forward(out.params, features);
  out.embeddings.graph_hash = enc.graph_hash();
  out.embeddings.anchor_hash = anchor_hash(enc.anchor_ids());
  out.embeddings.config = cfg;
  return out;
}

namespace {

std::vector<char> rectifier_pattern(const MlpParams& params, const Matrix& features) {
  const auto cache = forward_cached(params, features);
  std::vector<char> out;
  for (const auto& pre : cache.pre) {
    for (double v : pre.data()) out.push_back(v > 0.0);
  }
  return out;
}

}  // namespace

GradCheckResult grad_check(const MlpParams& params, const Matrix& features, std::span<const Quadruple> batch,
                           double eps_norm, double step) {
  GradCheckResult res;
  MlpParams analytic = MlpParams::zeros_like(params);
  batch_loss(params, features, batch, eps_norm, &analytic);

  const BatchNodes nodes = gather(features, batch);
  MlpParams probe = params;
  const auto base_pattern = rectifier_pattern(params, nodes.features);
  auto flat = probe.flat();
  for (std::size_t p = 0; p < flat.size(); ++p) {
    const double saved = flat[p];
    flat[p] = saved + step;
    const double plus = batch_loss(probe, features, batch, eps_norm, nullptr);
    const bool kink_plus = rectifier_pattern(probe, nodes.features) != base_pattern;
    flat[p] = saved - step;
    const double minus = batch_loss(probe, features, batch, eps_norm, nullptr);
    const bool kink_minus = rectifier_pattern(probe, nodes.features) != base_pattern;
    flat[p] = saved;
    if (kink_plus || kink_minus) {
      ++res.skipped_kinks;
      continue;
    }
    const double numeric = (plus - minus) / (2.0 * step);
    const double a = analytic.flat()[p];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
    res.max_relative_error = std::max(res.max_relative_error, std::abs(a - numeric) / denom);
    res.max_abs_analytic = std::max(res.max_abs_analytic, std::abs(a));
    res.max_abs_numeric = std::max(res.max_abs_numeric, std::abs(numeric));
    ++res.checked;
  }
  return res;
}

}  // namespace nodetok
