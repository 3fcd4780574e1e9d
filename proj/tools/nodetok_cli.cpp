// nodetok: anchor-distance node tokenizer command-line front end.
//
// Exit codes: 0 success, 1 validation or runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodetok/anchors.hpp"
#include "nodetok/encoding.hpp"
#include "nodetok/eval.hpp"
#include "nodetok/graph.hpp"
#include "nodetok/pretrain.hpp"
#include "nodetok/serialize.hpp"
#include "nodetok/simd/kernels.hpp"

namespace {

using namespace nodetok;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

struct GraphInput {
  std::string path;
  std::string format = "edgelist";

  void add_to(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--graph", path, "Edge-list file");
    if (required) opt->required();
    cmd->add_option("--format", format, "edgelist or csv")->check(CLI::IsMember({"edgelist", "csv"}));
  }
  LoadResult load() const { return load_edge_list_file(path, parse_edge_format(format)); }
};

void add_train_flags(CLI::App* cmd, TrainConfig& tc) {
  cmd->add_option("--dim", tc.dim, "Embedding dimension")->capture_default_str();
  cmd->add_option("--hidden", tc.hidden, "Hidden width")->capture_default_str();
  cmd->add_option("--epochs", tc.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", tc.learning_rate, "Learning rate")->capture_default_str();
  cmd->add_option("--quads", tc.quadruples_per_epoch, "Quadruples per epoch")->capture_default_str();
  cmd->add_option("--batch", tc.batch_size, "Quadruples per batch")->capture_default_str();
  cmd->add_option("--seed", tc.seed, "Seed")->capture_default_str();
  cmd->add_flag("--skip-ties", tc.skip_ties, "Redraw quadruples with tied estimates");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<int> read_labels(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    labels.push_back(std::stoi(line));
  }
  return labels;
}

void check_graph(const AnchorSet& set, const Graph& g) {
  if (set.graph_hash != g.hash()) {
    throw Error("anchor file was built for graph " + to_hex(set.graph_hash) + " but the supplied graph is " +
                to_hex(g.hash()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-distance node tokenizer: select anchors, encode nodes, pretrain embeddings"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and canonicalize an edge list");
  std::string ingest_edges, ingest_format = "edgelist", ingest_out, ingest_remap;
  ingest->add_option("--edges", ingest_edges, "Input edge list")->required();
  ingest->add_option("--format", ingest_format, "edgelist or csv")->check(CLI::IsMember({"edgelist", "csv"}));
  ingest->add_option("-o,--output", ingest_out, "Write the canonical edge list here");
  ingest->add_option("--remap", ingest_remap, "Write the dense-id -> original-id map (JSON)");

  // anchors
  auto* anchors = app.add_subcommand("anchors", "Select anchor nodes");
  GraphInput anchors_graph;
  anchors_graph.add_to(anchors);
  AnchorConfig acfg;
  std::string strategy = "greedy", anchors_out;
  std::size_t k_override = 0;
  anchors->add_option("--c", acfg.c, "Coverage radius (hops)")->capture_default_str();
  anchors->add_option("--cr", acfg.cr, "Target coverage ratio")->capture_default_str();
  anchors->add_option("--strategy", strategy, "greedy|degree|random|closeness|eigenvector|pagerank|betweenness")
      ->capture_default_str();
  anchors->add_option("--seed", acfg.seed, "Seed (random strategy)")->capture_default_str();
  anchors->add_option("--k", k_override, "Fixed anchor count for non-greedy strategies");
  anchors->add_option("-o,--output", anchors_out, "Anchor JSON output")->required();

  // encode
  auto* encode = app.add_subcommand("encode", "Encode every node by its hop distances to the anchors");
  GraphInput encode_graph;
  encode_graph.add_to(encode);
  std::string encode_anchors, encode_out;
  encode->add_option("--anchors", encode_anchors, "Anchor JSON")->required();
  encode->add_option("-o,--output", encode_out, "NTPE output (kind 0)")->required();

  // pretrain
  auto* pretrain = app.add_subcommand("pretrain", "Train the rank-preserving embedding");
  TrainConfig tcfg;
  std::string pretrain_enc, pretrain_out, pretrain_loss;
  pretrain->add_option("--enc", pretrain_enc, "Encoding NTPE file")->required();
  add_train_flags(pretrain, tcfg);
  pretrain->add_option("-o,--output", pretrain_out, "NTPE output (kind 1)")->required();
  pretrain->add_option("--loss-csv", pretrain_loss, "Write per-epoch loss history");

  // eval
  auto* eval = app.add_subcommand("eval", "Score an embedding against its encoding");
  std::string eval_emb, eval_enc, eval_out, eval_labels, eval_pca, eval_pca_raw;
  GraphInput eval_graph;
  std::size_t eval_sample = 20000;
  std::uint64_t eval_seed = 1;
  eval->add_option("--emb", eval_emb, "Embedding NTPE file")->required();
  eval->add_option("--enc", eval_enc, "Encoding NTPE file")->required();
  eval->add_option("-o,--output", eval_out, "Report JSON output")->required();
  eval_graph.add_to(eval, false);
  eval->add_option("--sample", eval_sample, "Quadruples for order agreement (0 = exhaustive)")->capture_default_str();
  eval->add_option("--seed", eval_seed, "Sampling seed")->capture_default_str();
  eval->add_option("--labels", eval_labels, "One integer class label per line, node order");
  eval->add_option("--pca", eval_pca, "2-D PCA of the embedding with anchor flags (CSV)");
  eval->add_option("--pca-raw", eval_pca_raw, "2-D PCA of the normalized encoding (CSV)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep (c, cr) or compare anchor strategies");
  GraphInput sweep_graph;
  sweep_graph.add_to(sweep);
  std::vector<Hops> sweep_c{1, 2, 3};
  std::vector<double> sweep_cr{0.5, 0.7, 0.9};
  std::vector<std::string> sweep_strategies;
  std::size_t sweep_seeds = 5;
  std::string sweep_out;
  bool sweep_no_train = false;
  TrainConfig sweep_tc;
  sweep_tc.dim = 16;
  sweep_tc.hidden = 64;
  sweep_tc.epochs = 20;
  sweep_tc.quadruples_per_epoch = 2048;
  sweep->add_option("--c", sweep_c, "Coverage radii")->delimiter(',')->capture_default_str();
  sweep->add_option("--cr", sweep_cr, "Coverage ratios")->delimiter(',')->capture_default_str();
  sweep->add_option("--strategies", sweep_strategies, "Compare these strategies at the first c and cr instead")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "Seeds per strategy (0..N-1)")->capture_default_str();
  sweep->add_flag("--no-train", sweep_no_train, "Skip embedding training (agreement column left at 0)");
  add_train_flags(sweep, sweep_tc);
  sweep->add_option("-o,--output", sweep_out, "CSV output")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Check the 2c error bound of the distance estimates");
  std::string verify_enc, verify_anchors, verify_out;
  GraphInput verify_graph;
  std::size_t verify_sources = 0;
  verify->add_option("--enc", verify_enc, "Encoding NTPE file")->required();
  verify_graph.add_to(verify);
  verify->add_option("--anchors", verify_anchors, "Anchor JSON")->required();
  verify->add_option("--sources", verify_sources, "BFS sources to sample (0 = all pairs)")->capture_default_str();
  verify->add_option("-o,--output", verify_out, "Report JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) {
      const auto res = load_edge_list_file(ingest_edges, parse_edge_format(ingest_format));
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
      if (!ingest_out.empty()) write_text_file(ingest_out, res.graph.canonical_edge_list());
      if (!ingest_remap.empty()) write_text_file(ingest_remap, nlohmann::json(res.original_ids).dump() + "\n");
      nlohmann::json summary = {{"nodes", res.graph.node_count()},
                                {"edges", res.graph.edge_count()},
                                {"self_loops_dropped", res.self_loops_dropped},
                                {"duplicate_edges", res.duplicate_edges},
                                {"graph_hash", to_hex(res.graph.hash())}};
      std::cout << summary.dump(2) << "\n";
      return kExitOk;
    }

    if (*anchors) {
      const auto loaded = anchors_graph.load();
      acfg.strategy = parse_strategy(strategy);
      if (k_override > 0) acfg.k_override = k_override;
      const AnchorSet set = select_anchors(loaded.graph, acfg);
      save_anchor_set(anchors_out, set);
      std::cerr << set.anchors.size() << " anchors, coverage " << set.achieved_ratio << "\n";
      return kExitOk;
    }

    if (*encode) {
      const auto loaded = encode_graph.load();
      const AnchorSet set = load_anchor_set(encode_anchors);
      check_graph(set, loaded.graph);
      const AnchorEncoding enc = encode_all(loaded.graph, set);
      save_encoding(encode_out, enc, set);
      return kExitOk;
    }

    if (*pretrain) {
      const auto enc = load_encoding(pretrain_enc);
      const TrainResult res = train(enc.encoding, tcfg);
      save_embedding(pretrain_out, res.embeddings, enc.meta);
      if (!pretrain_loss.empty()) {
        std::string csv = "epoch,loss\n";
        for (std::size_t e = 0; e < res.loss_history.size(); ++e) {
          csv += std::to_string(e) + "," + std::to_string(res.loss_history[e]) + "\n";
        }
        write_text_file(pretrain_loss, csv);
      }
      std::cerr << "final epoch loss " << res.loss_history.back() << " (kernels: " << simd::active().name << ")\n";
      return kExitOk;
    }

    if (*eval) {
      const auto emb = load_embedding(eval_emb);
      const auto enc = load_encoding(eval_enc);
      EvalReport rep;
      rep.order_agreement = order_agreement(emb.embedding, enc.encoding, eval_sample, eval_seed);
      rep.agreement_sample = eval_sample;
      rep.anchor_count = enc.encoding.anchor_count();
      rep.node_count = enc.encoding.node_count();
      rep.config = {{"encoding", ntpe::meta_to_json(enc.meta)}, {"embedding", ntpe::meta_to_json(emb.meta)}};
      if (!eval_graph.path.empty()) {
        const auto loaded = eval_graph.load();
        AnchorSet set;
        set.anchors = enc.meta.anchors;
        set.config.c = enc.meta.c;
        set.graph_hash = enc.meta.graph_hash;
        rep.distance = verify_error_bound(loaded.graph, enc.encoding, set);
        rep.coverage_ratio = coverage(loaded.graph, set.anchors, set.config.c).ratio;
      }
      nlohmann::json out = to_json(rep);
      if (!eval_labels.empty()) {
        const auto labels = read_labels(eval_labels);
        out["community_probe"] = {{"trained", community_probe(emb.embedding.values, labels, eval_seed)},
                                  {"untrained", community_probe(normalize_encoding(enc.encoding), labels, eval_seed)}};
      }
      if (!eval_pca.empty()) {
        write_text_file(eval_pca, projection_csv(pca_project(emb.embedding.values, 2), enc.meta.anchors));
      }
      if (!eval_pca_raw.empty()) {
        const Matrix raw = normalize_encoding(enc.encoding);
        write_text_file(eval_pca_raw, projection_csv(pca_project(raw, std::min<std::size_t>(2, raw.cols())),
                                                     enc.meta.anchors));
      }
      write_text_file(eval_out, out.dump(2) + "\n");
      return kExitOk;
    }

    if (*sweep) {
      const auto loaded = sweep_graph.load();
      EvalOptions opts;
      opts.train = sweep_tc;
      if (!sweep_strategies.empty()) {
        std::vector<AnchorStrategy> strategies;
        for (const auto& s : sweep_strategies) strategies.push_back(parse_strategy(s));
        std::vector<std::uint64_t> seeds(sweep_seeds);
        for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
        const auto rep = strategy_report(loaded.graph, strategies, sweep_c.front(), sweep_cr.front(), seeds, opts);
        write_text_file(sweep_out, rep.csv());
        return kExitOk;
      }
      const auto table = hyperparameter_sweep(loaded.graph, sweep_c, sweep_cr, opts, !sweep_no_train);
      write_text_file(sweep_out, table.csv());
      return kExitOk;
    }

    if (*verify) {
      const auto loaded = verify_graph.load();
      const auto enc = load_encoding(verify_enc);
      AnchorSet set = load_anchor_set(verify_anchors);
      check_graph(set, loaded.graph);
      const BoundReport rep = verify_error_bound(loaded.graph, enc.encoding, set, PairSampling{verify_sources, 0});
      const std::string text = to_json(rep).dump(2) + "\n";
      if (verify_out.empty()) {
        std::cout << text;
      } else {
        write_text_file(verify_out, text);
      }
      if (!rep.ok()) {
        std::cerr << rep.violations.size() << " bound violation(s), " << rep.underestimates.size()
                  << " underestimate(s)\n";
        return kExitInvalid;
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
