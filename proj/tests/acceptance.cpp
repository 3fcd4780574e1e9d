// Acceptance suite: one PASS/FAIL line per criterion, with wall time and
// the time limit each criterion must finish within.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "golden_fixtures.hpp"
#include "nodetok/anchors.hpp"
#include "nodetok/encoding.hpp"
#include "nodetok/eval.hpp"
#include "nodetok/generators.hpp"
#include "nodetok/ntpe.hpp"
#include "nodetok/pretrain.hpp"

using namespace nodetok;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = out.pass && secs < limit_seconds;
  if (!ok) ++failures;
  std::printf("%s  %-32s %8.2fs (limit %4.0fs)  %s\n", ok ? "PASS" : "FAIL", name, secs, limit_seconds,
              out.detail.c_str());
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 50 seeded graphs, 20 <= n <= 200, mean degree between 2 and 6, each with
// its own radius and target ratio.
struct CorpusItem {
  Graph g;
  AnchorConfig cfg;
};

std::vector<CorpusItem> er_corpus() {
  std::vector<CorpusItem> out;
  std::mt19937_64 rng(20240501);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 20 + rng() % 181;
    const double mean_degree = 2.0 + static_cast<double>(rng() % 401) / 100.0;
    CorpusItem item{gen::erdos_renyi(n, mean_degree / static_cast<double>(n - 1), 1000 + k), {}};
    item.cfg.c = static_cast<Hops>(1 + k % 3);
    item.cfg.cr = 0.5 + 0.1 * static_cast<double>(k % 5);
    out.push_back(std::move(item));
  }
  return out;
}

TrainConfig sbm_train_config() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.hidden = 64;
  cfg.epochs = 60;
  cfg.quadruples_per_epoch = 4096;
  cfg.skip_ties = true;
  cfg.learning_rate = 3e-3;
  return cfg;
}

gen::LabeledGraph sbm_fixture() { return gen::stochastic_block_model({30, 30}, 0.3, 0.01, 7); }

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  const auto corpus = er_corpus();

  criterion("greedy fixtures", 1, [] {
    AnchorConfig cfg;
    const auto p5 = select_greedy(gen::path(5), cfg).anchors;
    const auto c5 = select_greedy(gen::cycle(5), cfg).anchors;
    cfg.cr = 1.0;
    const auto s4 = select_greedy(gen::star(4), cfg).anchors;
    const bool ok = p5 == std::vector<NodeId>{1, 3} && c5 == std::vector<NodeId>{0, 2} && s4 == std::vector<NodeId>{0};
    return Outcome{ok, "P5/C5/S4 anchors match"};
  });

  criterion("distance oracle soundness", 30, [&] {
    std::uint64_t pairs = 0, bad = 0;
    for (const auto& item : corpus) {
      const auto set = select_greedy(item.g, item.cfg);
      const auto enc = encode_all(item.g, set);
      const auto truth = all_pairs_distances(item.g);
      std::vector<char> is_anchor(item.g.node_count(), 0);
      for (NodeId a : set.anchors) is_anchor[a] = 1;
      for (NodeId u = 0; u < item.g.node_count(); ++u) {
        for (NodeId v = 0; v < item.g.node_count(); ++v) {
          const Hops est = enc.estimate(u, v);
          const Hops t = truth(u, v);
          ++pairs;
          if (est != enc.estimate(v, u)) ++bad;
          if (is_reachable(est) && (!is_reachable(t) || est < t)) ++bad;
          if ((is_anchor[u] || is_anchor[v]) && est != t) ++bad;
        }
      }
    }
    return Outcome{bad == 0, fmt("%llu ordered pairs, %llu failures", (unsigned long long)pairs, (unsigned long long)bad)};
  });

  criterion("2c error bound", 30, [&] {
    std::uint64_t covered_pairs = 0, bad = 0;
    for (const auto& item : corpus) {
      const auto set = select_greedy(item.g, item.cfg);
      const auto enc = encode_all(item.g, set);
      const auto rep = verify_error_bound(item.g, enc, set);
      covered_pairs += rep.covered_pairs_checked;
      if (!rep.ok()) ++bad;
      const std::uint64_t n = item.g.node_count();
      const std::uint64_t uncovered = n - set.covered.size();
      if (rep.both_uncovered_pairs != uncovered * uncovered || rep.total_ordered_pairs != n * n) ++bad;
      // Exact rational comparison: uncovered^2 / n^2 vs (1 - covered/n)^2.
      const double expected = std::pow(1.0 - set.achieved_ratio, 2.0);
      if (std::abs(rep.fraction_both_uncovered - expected) > 1e-12) ++bad;
    }
    return Outcome{bad == 0, fmt("%llu covered pairs, %llu failing graphs", (unsigned long long)covered_pairs,
                                 (unsigned long long)bad)};
  });

  criterion("gradient check", 10, [] {
    std::mt19937_64 rng(42);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t k = 1 + rng() % 6, hidden = 2 + rng() % 10, dim = 2 + rng() % 6, nodes = 4 + rng() % 8;
      const auto params = MlpParams::init_uniform(k, hidden, dim, rng());
      Matrix x(nodes, k);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& v : x.data()) v = u(rng);
      std::vector<Quadruple> batch;
      for (int b = 0; b < 8; ++b) {
        Quadruple q;
        q.u = static_cast<NodeId>(rng() % nodes);
        q.v = static_cast<NodeId>((q.u + 1 + rng() % (nodes - 1)) % nodes);
        q.i = static_cast<NodeId>(rng() % nodes);
        q.j = static_cast<NodeId>((q.i + 1 + rng() % (nodes - 1)) % nodes);
        q.y = static_cast<int>(rng() % 2);
        batch.push_back(q);
      }
      const auto res = grad_check(params, x, batch);
      worst = std::max(worst, res.max_relative_error);
      checked += res.checked;
    }
    return Outcome{worst <= 1e-4, fmt("max relative error %.3e over %zu parameters", worst, checked)};
  });

  criterion("rank transfer: P5", 60, [] {
    const std::vector<NodeId> anchors{1, 3};
    const auto enc = encode_all(gen::path(5), anchors);
    TrainConfig cfg;
    cfg.dim = 8;
    const auto res = train(enc, cfg);
    const double a = order_agreement(res.embeddings, enc, 20000, 0xabcdef);
    return Outcome{a >= 0.95, fmt("agreement %.4f (need >= 0.95)", a)};
  });

  criterion("rank transfer: SBM n=60", 60, [] {
    const auto sbm = sbm_fixture();
    const auto set = select_greedy(sbm.graph, AnchorConfig{});
    const auto enc = encode_all(sbm.graph, set);
    const auto res = train(enc, sbm_train_config());
    const double a = order_agreement(res.embeddings, enc, 20000, 0xabcdef);
    return Outcome{a >= 0.85, fmt("agreement %.4f with %zu anchors (need >= 0.85)", a, set.anchors.size())};
  });

  criterion("rank transfer: random baseline", 60, [] {
    const auto sbm = sbm_fixture();
    const auto enc = encode_all(sbm.graph, select_greedy(sbm.graph, AnchorConfig{}));
    Matrix pts(60, 16);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    for (double& x : pts.data()) x = d(rng);
    const double a = order_agreement(pts, enc, 20000, 0xabcdef);
    return Outcome{std::abs(a - 0.5) <= 0.05, fmt("agreement %.4f (need 0.5 +- 0.05)", a)};
  });

  criterion("community probe", 120, [] {
    const auto sbm = sbm_fixture();
    const auto set = select_greedy(sbm.graph, AnchorConfig{});
    const auto enc = encode_all(sbm.graph, set);
    const auto res = train(enc, sbm_train_config());
    const Matrix raw = normalize_encoding(enc);
    std::vector<double> trained, untrained;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      trained.push_back(community_probe(res.embeddings.values, sbm.labels, seed));
      untrained.push_back(community_probe(raw, sbm.labels, seed));
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    };
    const double first = trained.front();
    const double mt = median(trained), mu = median(untrained);
    return Outcome{first >= 0.9 && mt >= mu,
                   fmt("seed-0 accuracy %.3f, median trained %.3f vs untrained %.3f", first, mt, mu)};
  });

  criterion("sweep monotonicity", 120, [] {
    const Graph g = gen::erdos_renyi(200, 0.02, 200);
    const std::vector<Hops> cs{1, 2, 3};
    const std::vector<double> crs{0.5, 0.7, 0.9};
    const auto table = hyperparameter_sweep(g, cs, crs, EvalOptions{}, false);
    int bad = 0;
    for (double cr : crs)
      for (std::size_t k = 1; k < cs.size(); ++k)
        if (table.at(cs[k], cr).anchors > table.at(cs[k - 1], cr).anchors) ++bad;
    for (Hops c : cs)
      for (std::size_t k = 1; k < crs.size(); ++k)
        if (table.at(c, crs[k]).anchors < table.at(c, crs[k - 1]).anchors) ++bad;
    std::string counts;
    for (const auto& cell : table.cells) counts += std::to_string(cell.anchors) + " ";
    return Outcome{bad == 0, fmt("anchor counts (c-major) %s", counts.c_str())};
  });

  criterion("greedy vs random anchors", 60, [] {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Graph g = gen::erdos_renyi(100, 0.05, 500 + seed);
      AnchorConfig cfg;
      cfg.cr = 0.9;
      const auto greedy = select_greedy(g, cfg);
      cfg.strategy = AnchorStrategy::kRandom;
      cfg.seed = seed;
      const auto random = select_anchors(g, cfg);
      if (greedy.anchors.size() <= random.anchors.size()) ++wins;
    }
    return Outcome{wins >= 18, fmt("greedy <= random in %d/20 seeds (need >= 18)", wins)};
  });

  criterion("NTPE round trip", 1, [] {
    const fs::path dir = fs::temp_directory_path() / "nodetok_acceptance";
    fs::create_directories(dir);
    int bad = 0;
    std::mt19937_64 rng(8);
    std::vector<std::uint32_t> u(7 * 5);
    for (auto& x : u) x = (rng() % 4 == 0) ? kUnreachable : static_cast<std::uint32_t>(rng());
    std::vector<float> f(6 * 3);
    std::uniform_real_distribution<float> d(-1e6f, 1e6f);
    for (auto& x : f) x = d(rng);
    f[0] = -0.0f;
    ntpe::Meta m;
    m.created = golden::kCreated;
    m.kind = ntpe::Kind::kDistance;
    m.rows = 7;
    m.cols = 5;
    ntpe::write_u32((dir / "u.ntpe").string(), 7, 5, u, m);
    m.kind = ntpe::Kind::kEmbedding;
    m.rows = 6;
    m.cols = 3;
    ntpe::write_f32((dir / "f.ntpe").string(), 6, 3, f, m);
    if (ntpe::read((dir / "u.ntpe").string()).u32 != u) ++bad;
    const auto back = ntpe::read((dir / "f.ntpe").string()).f32;
    if (back.size() != f.size() || std::memcmp(back.data(), f.data(), f.size() * 4) != 0) ++bad;
    std::size_t golden_files = 0;
    for (const auto& fx : golden::valid_fixtures()) {
      const fs::path p = fs::path(NODETOK_GOLDEN_DIR) / fx.name;
      if (slurp(p) != fx.bytes) ++bad;
      const auto side = slurp(ntpe::sidecar_path(p.string()));
      if (std::string(side.begin(), side.end()) != ntpe::sidecar_text(fx.meta)) ++bad;
      ++golden_files;
    }
    return Outcome{bad == 0, fmt("%zu golden files, %d mismatches", golden_files, bad)};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
