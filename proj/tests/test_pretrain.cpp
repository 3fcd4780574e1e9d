#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nodetok/eval.hpp"
#include "nodetok/generators.hpp"
#include "nodetok/pretrain.hpp"

using namespace nodetok;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

AnchorEncoding p5_encoding() {
  const std::vector<NodeId> anchors{1, 3};
  return encode_all(gen::path(5), anchors);
}

Matrix random_features(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (double& x : m.data()) x = d(rng);
  return m;
}

std::vector<Quadruple> random_batch(std::mt19937_64& rng, std::size_t nodes, std::size_t count) {
  std::vector<Quadruple> batch;
  for (std::size_t b = 0; b < count; ++b) {
    Quadruple q;
    q.u = static_cast<NodeId>(rng() % nodes);
    q.v = static_cast<NodeId>((q.u + 1 + rng() % (nodes - 1)) % nodes);
    q.i = static_cast<NodeId>(rng() % nodes);
    q.j = static_cast<NodeId>((q.i + 1 + rng() % (nodes - 1)) % nodes);
    q.y = static_cast<int>(rng() % 2);
    batch.push_back(q);
  }
  return batch;
}

}  // namespace

TEST_CASE("normalize_encoding") {
  const Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {4, 5}});
  const std::vector<NodeId> anchors{0};
  const Matrix f = normalize_encoding(encode_all(g, anchors));
  CHECK(f(0, 0) == 1.0);
  CHECK(f(3, 0) == 0.25);
  CHECK(f(4, 0) == 0.0);
}

TEST_CASE("forward") {
  SUBCASE("zero parameters give zero embeddings") {
    const MlpParams p(3, 4, 2);
    const Matrix out = forward(p, Matrix(5, 3, 0.7));
    for (double v : out.data()) CHECK(v == 0.0);
  }
  SUBCASE("hand-evaluated single path") {
    MlpParams p(1, 1, 1);
    p.weight(0)[0] = 2.0;
    p.bias(0)[0] = -0.5;
    p.weight(1)[0] = 3.0;
    p.bias(1)[0] = 0.1;
    p.weight(2)[0] = -1.0;
    p.bias(2)[0] = 0.25;
    const Matrix out = forward(p, Matrix(2, 1, std::vector<double>{0.5, 0.1}));
    // 0.5: relu(0.5) = 0.5 -> relu(1.6) = 1.6 -> -1.35
    CHECK(out(0, 0) == doctest::Approx(-1.35).epsilon(1e-15));
    // 0.1: relu(-0.3) = 0 -> relu(0.1) = 0.1 -> 0.15
    CHECK(out(1, 0) == doctest::Approx(0.15).epsilon(1e-15));
  }
  SUBCASE("single rows match the full batch") {
    std::mt19937_64 rng(1);
    const auto p = MlpParams::init_uniform(4, 8, 3, 5);
    const Matrix x = random_features(rng, 6, 4);
    const Matrix full = forward(p, x);
    for (std::size_t r = 0; r < 6; ++r) {
      Matrix one(1, 4, std::vector<double>(x.row(r).begin(), x.row(r).end()));
      const Matrix single = forward(p, one);
      for (std::size_t c = 0; c < 3; ++c) CHECK(single(0, c) == full(r, c));
    }
  }
  SUBCASE("width mismatch") { CHECK_THROWS_AS(forward(MlpParams(3, 4, 2), Matrix(1, 2)), Error); }
  SUBCASE("initialization respects fan-in bounds") {
    const auto p = MlpParams::init_uniform(4, 16, 3, 9);
    for (std::size_t l = 0; l < 3; ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(p.layer_in(l)));
      for (double w : p.weight(l)) CHECK(std::abs(w) <= bound);
    }
    CHECK(p == MlpParams::init_uniform(4, 16, 3, 9));
  }
}

TEST_CASE("quadruple_loss values") {
  const std::vector<double> a{0.3, -1.0}, b{1.3, 0.5};
  const auto equal = quadruple_loss(a, b, b, a, 1);
  CHECK(equal.loss == doctest::Approx(0.693147180559945309).epsilon(1e-14));
  CHECK(quadruple_loss(a, b, b, a, 0).loss == doctest::Approx(0.693147180559945309).epsilon(1e-14));

  // |(11,0)-(0,0)| - |(0,0)-(1,0)| = 10 up to the eps term.
  const std::vector<double> eu{11, 0}, z{0, 0}, ej{1, 0};
  const auto far = quadruple_loss(eu, z, z, ej, 1);
  CHECK(far.margin == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(far.loss == doctest::Approx(4.53988992168852821643525711074e-5).epsilon(1e-10));

  const std::vector<double> bad{std::nan(""), 0};
  CHECK_THROWS_AS(quadruple_loss(bad, z, z, ej, 1), Error);
  const std::vector<double> wide{1, 2, 3};
  CHECK_THROWS_AS(quadruple_loss(wide, z, z, ej, 1), Error);
}

TEST_CASE("quadruple_loss gradient matches central differences") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<std::vector<double>, 4> e;
    for (auto& v : e) v = random_vec(rng, 8);
    const int y = trial % 2;
    const auto ql = quadruple_loss(e[0], e[1], e[2], e[3], y);
    const double h = 1e-5;
    for (std::size_t which = 0; which < 4; ++which) {
      for (std::size_t t = 0; t < 8; ++t) {
        auto plus = e, minus = e;
        plus[which][t] += h;
        minus[which][t] -= h;
        const double num = (quadruple_loss(plus[0], plus[1], plus[2], plus[3], y).loss -
                            quadruple_loss(minus[0], minus[1], minus[2], minus[3], y).loss) /
                           (2 * h);
        const double ana = ql.grads[which][t];
        const double rel = std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), 1e-6});
        REQUIRE(rel <= 1e-6);
      }
    }
  }
}

TEST_CASE("quadruple_loss positivity and role antisymmetry") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::vector<double>, 4> e;
    for (auto& v : e) v = random_vec(rng, 5);
    const int y = static_cast<int>(rng() % 2);
    const auto fwd = quadruple_loss(e[0], e[1], e[2], e[3], y);
    const auto swapped = quadruple_loss(e[2], e[3], e[0], e[1], 1 - y);
    CHECK(fwd.loss >= 0.0);
    CHECK(fwd.loss == doctest::Approx(swapped.loss).epsilon(1e-12));
  }
}

TEST_CASE("sample_quadruples") {
  const auto enc = p5_encoding();
  SUBCASE("connected graph never rejects") {
    const auto batch = sample_quadruples(enc, 2000, 3, false);
    CHECK(batch.items.size() == 2000);
    CHECK(batch.rejected_unreachable == 0);
    for (const auto& q : batch.items) {
      REQUIRE(q.u != q.v);
      REQUIRE(q.i != q.j);
      REQUIRE(q.d_uv == enc.estimate(q.u, q.v));
      REQUIRE(q.y == (q.d_uv > q.d_ij ? 1 : 0));
    }
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto a = sample_quadruples(enc, 500, 8, false);
    const auto b = sample_quadruples(enc, 500, 8, false);
    REQUIRE(a.items.size() == b.items.size());
    for (std::size_t k = 0; k < a.items.size(); ++k) {
      CHECK(a.items[k].u == b.items[k].u);
      CHECK(a.items[k].j == b.items[k].j);
    }
  }
  SUBCASE("skip_ties removes equal estimates") {
    const auto batch = sample_quadruples(enc, 2000, 5, true);
    CHECK(batch.rejected_ties > 0);
    for (const auto& q : batch.items) REQUIRE(q.d_uv != q.d_ij);
  }
  SUBCASE("unreachable pairs are redrawn") {
    const Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}, {4, 5}});
    const std::vector<NodeId> anchors{0, 3};
    const auto e2 = encode_all(g, anchors);
    const auto batch = sample_quadruples(e2, 500, 1, false);
    CHECK(batch.rejected_unreachable > 0);
    for (const auto& q : batch.items) REQUIRE(is_reachable(q.d_uv));
  }
  SUBCASE("degenerate graphs raise") {
    const Graph g = Graph::from_edges(400, std::vector<Edge>{{0, 1}});
    const std::vector<NodeId> anchors{0};
    const auto e2 = encode_all(g, anchors);
    CHECK_THROWS_AS(sample_quadruples(e2, 1, 1, false), Error);
    const std::vector<NodeId> one{0};
    CHECK_THROWS_AS(sample_quadruples(encode_all(Graph::from_edges(1, {}), one), 1, 1, false), Error);
  }
}

TEST_CASE("grad_check") {
  SUBCASE("random setup, seed 0") {
    std::mt19937_64 rng(0);
    const auto p = MlpParams::init_uniform(6, 12, 8, 0);
    const Matrix x = random_features(rng, 10, 6);
    const auto batch = random_batch(rng, 10, 16);
    const auto res = grad_check(p, x, batch);
    CHECK(res.checked > p.parameter_count() / 2);
    CHECK(res.max_relative_error <= 1e-4);
  }
  SUBCASE("zero-gradient point") {
    // Output weights at zero make every embedding equal to the output bias.
    auto p = MlpParams::init_uniform(3, 4, 3, 2);
    for (double& w : p.weight(2)) w = 0.0;
    std::mt19937_64 rng(3);
    const Matrix x = random_features(rng, 4, 3);
    std::vector<Quadruple> batch{{0, 1, 2, 3, 1, 1, 0}, {2, 3, 0, 1, 1, 1, 1}};
    const auto res = grad_check(p, x, batch);
    CHECK(res.max_abs_analytic <= 1e-8);
    CHECK(res.max_abs_numeric <= 1e-8);
  }
  SUBCASE("eps_norm doubling barely moves the loss") {
    std::mt19937_64 rng(4);
    const auto p = MlpParams::init_uniform(5, 8, 4, 4);
    const Matrix x = random_features(rng, 8, 5);
    const auto batch = random_batch(rng, 8, 32);
    const double a = batch_loss(p, x, batch, 1e-12, nullptr);
    const double b = batch_loss(p, x, batch, 2e-12, nullptr);
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("train on P5") {
  const auto enc = p5_encoding();
  TrainConfig cfg;
  cfg.dim = 8;
  const auto res = train(enc, cfg);
  REQUIRE(res.loss_history.size() == cfg.epochs);
  CHECK(res.loss_history.back() < res.loss_history.front());
  CHECK(res.embeddings.node_count() == 5);
  CHECK(res.embeddings.dim() == 8);
  CHECK(res.params.all_finite());
  CHECK(order_agreement(res.embeddings, enc, 0, 0) >= 0.95);
  CHECK(order_agreement(res.embeddings, enc, 5000, 99) >= 0.95);

  TrainConfig quick = cfg;
  quick.epochs = 5;
  quick.hidden = 32;
  const auto r1 = train(enc, quick);
  const auto r2 = train(enc, quick);
  CHECK(r1.loss_history == r2.loss_history);
  CHECK(r1.embeddings.values == r2.embeddings.values);

  TrainConfig bad = cfg;
  bad.dim = 1;
  CHECK_THROWS_AS(train(enc, bad), Error);
}

TEST_CASE("training is equivariant under node relabeling") {
  const Graph g = gen::erdos_renyi(30, 0.15, 12);
  std::vector<NodeId> perm(30);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::mt19937_64 rng(6);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  const Graph h = gen::permute(g, perm);

  AnchorConfig acfg;
  const auto set = select_greedy(g, acfg);
  std::vector<NodeId> mapped;
  for (NodeId a : set.anchors) mapped.push_back(perm[a]);
  const auto enc_g = encode_all(g, set.anchors);
  const auto enc_h = encode_all(h, mapped);
  const Matrix fg = normalize_encoding(enc_g);
  const Matrix fh = normalize_encoding(enc_h);
  for (NodeId v = 0; v < 30; ++v) {
    for (std::size_t k = 0; k < fg.cols(); ++k) REQUIRE(fg(v, k) == fh(perm[v], k));
  }

  TrainConfig cfg;
  cfg.dim = 4;
  cfg.hidden = 16;
  cfg.learning_rate = 1e-2;
  const auto init = MlpParams::init_uniform(fg.cols(), cfg.hidden, cfg.dim, 1);
  Trainer tg(init, cfg), th(init, cfg);
  QuadrupleSampler sampler(enc_g, 2, false);
  for (int step = 0; step < 20; ++step) {
    std::vector<Quadruple> bg, bh;
    for (int b = 0; b < 32; ++b) {
      const Quadruple q = sampler.next();
      bg.push_back(q);
      Quadruple r = q;
      r.u = perm[q.u];
      r.v = perm[q.v];
      r.i = perm[q.i];
      r.j = perm[q.j];
      bh.push_back(r);
    }
    const double lg = tg.step(fg, bg);
    const double lh = th.step(fh, bh);
    REQUIRE(lg == doctest::Approx(lh).epsilon(1e-12));
  }
  const Matrix eg = forward(tg.params(), fg);
  const Matrix eh = forward(th.params(), fh);
  for (NodeId v = 0; v < 30; ++v) {
    for (std::size_t c = 0; c < cfg.dim; ++c) REQUIRE(std::abs(eg(v, c) - eh(perm[v], c)) <= 1e-9);
  }
}
