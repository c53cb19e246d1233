#ifndef GRAPH1L_HARNESS_HPP
#define GRAPH1L_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "graph1l/baseline.hpp"
#include "graph1l/flow.hpp"

namespace graph1l {

enum class Method { GRAPH1L, LGC, LP };

Method method_from_string(const std::string& s);
std::string method_name(Method m);

struct TrialPlan {
  std::optional<double> label_fraction;        // in (0, 1]
  std::optional<std::size_t> labels_per_class;
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  Method method = Method::GRAPH1L;
};

struct TrialMetrics {
  double error_rate = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  TrialMetrics metrics;
  LabelPrior prior;
  Labeling labeling;
  FlowTrace trace;  // GRAPH1L only
};

struct MetricsReport {
  std::vector<TrialRecord> trials;
  TrialMetrics mean;
  TrialMetrics stddev;  // population standard deviation over successful trials
  std::size_t failed_trials = 0;

  std::string summary_json(Method method) const;
};

/// Stratified uniform label split, at least one label per class,
/// deterministic from (base_seed, trial_index) and independent of the
/// method. Fractional budgets are resolved by rounding half up on the total
/// and apportioning per class by largest remainder. Throws TooFewSamples.
LabelPrior split_labels(const std::vector<int>& truth, const TrialPlan& plan,
                        std::size_t trial_index);

/// Error rate and F1 scores over the unlabeled nodes only. A class absent
/// from both prediction and truth among scored nodes contributes 1 to
/// macro-F1.
TrialMetrics evaluate(const Labeling& pred, const std::vector<int>& truth,
                      const std::vector<bool>& labeled_mask);

struct ExperimentConfig {
  FlowConfig flow;
  DiffusionConfig diffusion;
  std::string out_dir;  // per-trial + summary JSON written here when non-empty
};

/// Runs `plan.trials` independent splits on one prebuilt graph and
/// aggregates the metrics. Solver failures mark the trial failed and
/// excluded from the aggregates.
MetricsReport run_experiment(const WeightedGraph& g, const std::vector<int>& truth,
                             const TrialPlan& plan, const ExperimentConfig& cfg);

/// File-based front end: input is either an edge list or a feature CSV
/// (built into a k-NN graph), truth is one class per line.
struct ExperimentInput {
  std::string features_path;  // one of the two paths must be set
  std::string edges_path;
  std::string truth_path;
  std::size_t knn = 10;
  SigmaRule sigma = SigmaRule::self();
};

MetricsReport run_experiment(const ExperimentInput& in, const TrialPlan& plan,
                             const ExperimentConfig& cfg);

/// Recomputes the summary from persisted per-trial JSON files.
std::string rescore_directory(const std::string& dir, const std::vector<int>& truth);

}  // namespace graph1l

#endif
