// Command line front end: build-graph, run, eval, partition.
// Exit codes: 0 success, 2 input error, 3 solver non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "graph1l/errors.hpp"
#include "graph1l/harness.hpp"
#include "json.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

graph1l::SigmaRule parse_sigma(const std::string& s) {
  if (s == "self") return graph1l::SigmaRule::self();
  try {
    return graph1l::SigmaRule::value(std::stod(s));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--sigma", "expected 'self' or a number, got '" + s + "'");
  }
}

graph1l::Denominator parse_h(const std::string& s) {
  if (s == "l2") return graph1l::Denominator::L2;
  if (s == "l1") return graph1l::Denominator::L1;
  if (s == "l1med") return graph1l::Denominator::L1_MEDIAN;
  throw CLI::ValidationError("--h", "expected l2|l1|l1med, got '" + s + "'");
}

int cmd_build_graph(const std::string& features, const std::string& out, std::size_t knn,
                    const std::string& sigma) {
  const auto rows = graph1l::load_features_csv(features);
  const auto g = graph1l::build_knn_gaussian(rows, knn, parse_sigma(sigma));
  graph1l::save_edge_list(out, g);
  std::fprintf(stderr, "wrote %s: %zu nodes, %zu edges\n", out.c_str(), g.num_nodes(),
               g.num_edges());
  return 0;
}

int cmd_partition(const std::string& edges, const graph1l::FlowConfig& cfg,
                  const std::string& out) {
  std::size_t n = 0;
  auto list = graph1l::load_edge_list(edges, n);
  const auto g = graph1l::build_from_edge_list(std::move(list), n);
  const graph1l::GradientOperator op(g);
  const auto res = graph1l::run_binary(op, cfg);

  nlohmann::json j;
  j["u"] = res.u;
  j["partition"] = res.partition;
  j["ratio"] = res.trace.ratios.back().at(0);
  j["trace"] = nlohmann::json::parse(res.trace.to_json());
  const std::string text = j.dump(2);
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream f(out);
    f << text << '\n';
  }
  return res.trace.status == graph1l::FlowStatus::Converged ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transductive multi-class classification on weighted graphs via the "
               "normalised graph 1-Laplacian, with p=2 diffusion baselines"};
  app.require_subcommand(1);
  // --h is a real flag (denominator choice), so help is --help only
  app.set_help_flag("--help", "print help");

  // build-graph
  std::string features_path, edges_out = "edges.txt", sigma_str = "self";
  std::size_t knn = 10;
  auto* build = app.add_subcommand("build-graph", "features CSV -> k-NN edge-list file");
  build->add_option("features", features_path, "feature CSV, one row per node")->required();
  build->add_option("output", edges_out, "edge-list output path");
  build->add_option("--knn", knn, "neighbours per node");
  build->add_option("--sigma", sigma_str, "'self' (self-tuning) or a fixed bandwidth");

  // run
  std::string run_features, run_edges, truth_path, method_str = "graph1l", h_str = "l2";
  std::string out_dir;
  graph1l::TrialPlan plan;
  graph1l::ExperimentConfig ecfg;
  double label_fraction = 0.0;
  std::size_t labels_per_class = 0;
  auto* run = app.add_subcommand("run", "repeated random label splits, metrics, result files");
  run->set_help_flag("--help", "print help");
  run->add_option("--features", run_features, "feature CSV (k-NN graph is built)");
  run->add_option("--edges", run_edges, "prebuilt edge-list file");
  run->add_option("--truth", truth_path, "true classes, one integer per line")->required();
  run->add_option("--method", method_str, "graph1l|lgc|lp");
  run->add_option("--labels-per-class", labels_per_class, "fixed labels per class");
  run->add_option("--label-fraction", label_fraction, "labeled fraction of all nodes");
  run->add_option("--trials", plan.trials, "number of random splits");
  run->add_option("--seed", plan.base_seed, "base seed for splits and starts");
  run->add_option("--knn", knn, "neighbours per node (feature input)");
  run->add_option("--sigma", sigma_str, "'self' or fixed bandwidth (feature input)");
  run->add_option("--dt", ecfg.flow.dt, "flow time step");
  run->add_option("--eps", ecfg.flow.epsilon, "transductive clamp margin");
  run->add_option("--h", h_str, "denominator: l2|l1|l1med");
  run->add_option("--outer-tol", ecfg.flow.outer_tol, "outer residual threshold");
  run->add_option("--max-outer", ecfg.flow.max_outer, "outer iteration cap");
  run->add_option("--inner-max-iter", ecfg.flow.inner.max_iter, "inner iteration cap");
  run->add_option("--gap-tol", ecfg.flow.inner.gap_tol, "inner primal-dual gap tolerance");
  run->add_option("--alpha", ecfg.diffusion.alpha, "diffusion mixing (lgc)");
  run->add_option("--out", out_dir, "directory for per-trial and summary JSON");

  // eval
  std::string eval_dir, eval_truth;
  auto* eval = app.add_subcommand("eval", "re-score persisted per-trial predictions");
  eval->add_option("--dir", eval_dir, "directory with trial_*.json")->required();
  eval->add_option("--truth", eval_truth, "true classes, one integer per line")->required();

  // partition
  std::string part_edges, part_out;
  graph1l::FlowConfig part_cfg;
  std::string part_h = "l2";
  auto* part = app.add_subcommand("partition", "binary flow on an edge list");
  part->set_help_flag("--help", "print help");
  part->add_option("--edges", part_edges, "edge-list file")->required();
  part->add_option("--dt", part_cfg.dt, "flow time step");
  part->add_option("--h", part_h, "denominator: l2|l1|l1med");
  part->add_option("--seed", part_cfg.seed, "seed for the random start");
  part->add_option("--outer-tol", part_cfg.outer_tol, "outer residual threshold");
  part->add_option("--max-outer", part_cfg.max_outer, "outer iteration cap");
  part->add_option("--out", part_out, "output JSON path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build_graph(features_path, edges_out, knn, sigma_str);

    if (run->parsed()) {
      if (labels_per_class > 0 && label_fraction > 0.0)
        throw CLI::ValidationError("run", "use --labels-per-class or --label-fraction, not both");
      if (labels_per_class > 0)
        plan.labels_per_class = labels_per_class;
      else if (label_fraction > 0.0)
        plan.label_fraction = label_fraction;
      else
        throw CLI::ValidationError("run", "need --labels-per-class or --label-fraction");
      plan.method = graph1l::method_from_string(method_str);
      ecfg.flow.kind = parse_h(h_str);
      ecfg.out_dir = out_dir;
      graph1l::ExperimentInput in;
      in.features_path = run_features;
      in.edges_path = run_edges;
      in.truth_path = truth_path;
      in.knn = knn;
      in.sigma = parse_sigma(sigma_str);
      const auto report = graph1l::run_experiment(in, plan, ecfg);
      std::cout << report.summary_json(plan.method) << '\n';
      return report.failed_trials == 0 ? 0 : kExitSolver;
    }

    if (eval->parsed()) {
      const auto truth = graph1l::load_labels(eval_truth);
      std::cout << graph1l::rescore_directory(eval_dir, truth) << '\n';
      return 0;
    }

    if (part->parsed()) {
      part_cfg.kind = parse_h(part_h);
      return cmd_partition(part_edges, part_cfg, part_out);
    }
  } catch (const graph1l::NoConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}
