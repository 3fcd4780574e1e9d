#include "nodetok/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nodetok/error.hpp"
#include "nodetok/simd/kernels.hpp"

namespace nodetok {

MlpParams::MlpParams(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim)
    : dims_{input_dim, hidden_dim, hidden_dim, output_dim} {
  std::size_t off = 0;
  for (std::size_t l = 0; l < kLayers; ++l) {
    w_off_[l] = off;
    off += layer_out(l) * layer_in(l);
    b_off_[l] = off;
    off += layer_out(l);
  }
  flat_.assign(off, 0.0);
}

MlpParams MlpParams::init_uniform(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                                  std::uint64_t seed) {
  MlpParams p(input_dim, hidden_dim, output_dim);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < kLayers; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.layer_in(l)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : p.weight(l)) w = dist(rng);
    for (double& b : p.bias(l)) b = dist(rng);
  }
  return p;
}

MlpParams MlpParams::zeros_like(const MlpParams& other) {
  return MlpParams(other.input_dim(), other.hidden_dim(), other.output_dim());
}

bool MlpParams::all_finite() const {
  for (double v : flat_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

void affine(const MlpParams& p, std::size_t l, const Matrix& in, Matrix& out) {
  const auto& k = simd::active();
  const std::size_t n_out = p.layer_out(l);
  const std::size_t n_in = p.layer_in(l);
  const auto bias = p.bias(l);
  out = Matrix(in.rows(), n_out);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const double* x = in.row(r).data();
    double* y = out.row(r).data();
    for (std::size_t o = 0; o < n_out; ++o) y[o] = k.dot(p.weight_row(l, o).data(), x, n_in) + bias[o];
  }
}

void relu(const Matrix& in, Matrix& out) {
  out = in;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
}

// grad_in may be null for the first layer.
void affine_backward(const MlpParams& p, std::size_t l, const Matrix& in, const Matrix& grad_out, MlpParams& grad,
                     Matrix* grad_in) {
  const auto& k = simd::active();
  const std::size_t n_out = p.layer_out(l);
  const std::size_t n_in = p.layer_in(l);
  if (grad_in != nullptr) *grad_in = Matrix(in.rows(), n_in);
  auto gbias = grad.bias(l);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const double* x = in.row(r).data();
    for (std::size_t o = 0; o < n_out; ++o) {
      const double g = grad_out(r, o);
      if (g == 0.0) continue;
      k.axpy(g, x, grad.weight_row(l, o).data(), n_in);
      gbias[o] += g;
      if (grad_in != nullptr) k.axpy(g, p.weight_row(l, o).data(), grad_in->row(r).data(), n_in);
    }
  }
}

}  // namespace

ForwardCache forward_cached(const MlpParams& params, const Matrix& features) {
  if (features.cols() != params.input_dim()) {
    throw Error("feature width " + std::to_string(features.cols()) + " does not match network input width " +
                std::to_string(params.input_dim()));
  }
  ForwardCache c;
  c.input = features;
  affine(params, 0, c.input, c.pre[0]);
  relu(c.pre[0], c.post[0]);
  affine(params, 1, c.post[0], c.pre[1]);
  relu(c.pre[1], c.post[1]);
  affine(params, 2, c.post[1], c.output);
  return c;
}

Matrix forward(const MlpParams& params, const Matrix& features) { return forward_cached(params, features).output; }

void backward(const MlpParams& params, const ForwardCache& cache, const Matrix& grad_output, MlpParams& grad) {
  Matrix g2, g1;
  affine_backward(params, 2, cache.post[1], grad_output, grad, &g2);
  for (std::size_t i = 0; i < g2.data().size(); ++i) {
    if (cache.pre[1].data()[i] <= 0.0) g2.data()[i] = 0.0;
  }
  affine_backward(params, 1, cache.post[0], g2, grad, &g1);
  for (std::size_t i = 0; i < g1.data().size(); ++i) {
    if (cache.pre[0].data()[i] <= 0.0) g1.data()[i] = 0.0;
  }
  affine_backward(params, 0, cache.input, g1, grad, nullptr);
}

}  // namespace nodetok
