#include "graph1l/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "graph1l/errors.hpp"
#include "graph1l/rng.hpp"
#include "json.hpp"

namespace graph1l {

namespace fs = std::filesystem;
using nlohmann::json;

Method method_from_string(const std::string& s) {
  if (s == "graph1l") return Method::GRAPH1L;
  if (s == "lgc") return Method::LGC;
  if (s == "lp") return Method::LP;
  throw std::invalid_argument("unknown method '" + s + "' (expected graph1l|lgc|lp)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::GRAPH1L: return "graph1l";
    case Method::LGC: return "lgc";
    case Method::LP: return "lp";
  }
  return "?";
}

namespace {

std::size_t num_classes_of(const std::vector<int>& truth) {
  int maxc = -1;
  for (int c : truth) {
    if (c < 0) throw std::invalid_argument("negative class in truth");
    maxc = std::max(maxc, c);
  }
  return static_cast<std::size_t>(maxc) + 1;
}

// per-class label budget: fixed count, or round-half-up on the total with
// largest-remainder apportionment, always at least 1 per class
std::vector<std::size_t> class_quotas(const std::vector<std::size_t>& class_sizes,
                                      const TrialPlan& plan, std::size_t n) {
  const std::size_t L = class_sizes.size();
  std::vector<std::size_t> quota(L);
  if (plan.labels_per_class) {
    const std::size_t want = *plan.labels_per_class;
    if (want < 1) throw std::invalid_argument("labels_per_class must be >= 1");
    for (std::size_t c = 0; c < L; ++c) {
      if (class_sizes[c] < want)
        throw TooFewSamples("class " + std::to_string(c) + " has " +
                            std::to_string(class_sizes[c]) + " samples, need " +
                            std::to_string(want));
      quota[c] = want;
    }
    return quota;
  }
  if (!plan.label_fraction) throw std::invalid_argument("plan needs a label budget");
  const double f = *plan.label_fraction;
  if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("label_fraction must be in (0,1]");
  std::size_t budget =
      static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 0.5));
  budget = std::clamp<std::size_t>(budget, L, n);

  std::vector<double> exact(L);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < L; ++c) {
    exact[c] = static_cast<double>(budget) * static_cast<double>(class_sizes[c]) /
               static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact[c]));
    assigned += quota[c];
  }
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
  });
  for (std::size_t i = 0; assigned < budget; i = (i + 1) % L) {
    const std::size_t c = order[i];
    if (quota[c] < class_sizes[c]) {
      ++quota[c];
      ++assigned;
    }
  }
  // at least one label per class, taken from the fullest class
  for (std::size_t c = 0; c < L; ++c) {
    while (quota[c] == 0) {
      std::size_t donor = L;
      std::size_t best = 1;
      for (std::size_t o = 0; o < L; ++o)
        if (quota[o] > best) {
          best = quota[o];
          donor = o;
        }
      if (donor == L) {
        ++quota[c];  // budget grows by one; nothing left to take
        break;
      }
      --quota[donor];
      ++quota[c];
    }
    if (quota[c] > class_sizes[c])
      throw TooFewSamples("class " + std::to_string(c) + " has " +
                          std::to_string(class_sizes[c]) + " samples, need " +
                          std::to_string(quota[c]));
  }
  return quota;
}

}  // namespace

LabelPrior split_labels(const std::vector<int>& truth, const TrialPlan& plan,
                        std::size_t trial_index) {
  const std::size_t n = truth.size();
  const std::size_t L = num_classes_of(truth);
  std::vector<std::vector<std::size_t>> members(L);
  for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(truth[i])].push_back(i);
  std::vector<std::size_t> sizes(L);
  for (std::size_t c = 0; c < L; ++c) {
    if (members[c].empty()) throw TooFewSamples("class " + std::to_string(c) + " absent in truth");
    sizes[c] = members[c].size();
  }
  const std::vector<std::size_t> quota = class_quotas(sizes, plan, n);

  Rng rng(Rng::derive(plan.base_seed, 2 * trial_index));
  LabelPrior prior;
  prior.num_classes = L;
  for (std::size_t c = 0; c < L; ++c) {
    std::vector<std::size_t> pool = members[c];
    rng.shuffle(pool);
    for (std::size_t t = 0; t < quota[c]; ++t)
      prior.assignments.emplace_back(pool[t], static_cast<int>(c));
  }
  std::sort(prior.assignments.begin(), prior.assignments.end());
  return prior;
}

TrialMetrics evaluate(const Labeling& pred, const std::vector<int>& truth,
                      const std::vector<bool>& labeled_mask) {
  const std::size_t n = truth.size();
  if (pred.hard.size() != n) throw DimensionMismatch(n, pred.hard.size());
  if (labeled_mask.size() != n) throw DimensionMismatch(n, labeled_mask.size());
  std::size_t L = num_classes_of(truth);
  for (int c : pred.hard) L = std::max(L, static_cast<std::size_t>(std::max(c, 0)) + 1);

  std::vector<std::size_t> tp(L, 0), fp(L, 0), fn(L, 0);
  std::size_t scored = 0, wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labeled_mask[i]) continue;  // labeled nodes are excluded from scoring
    ++scored;
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(pred.hard[i]);
    if (t == p) {
      ++tp[t];
    } else {
      ++wrong;
      ++fp[p];
      ++fn[t];
    }
  }
  TrialMetrics m;
  if (scored == 0) {
    m.macro_f1 = m.micro_f1 = 1.0;
    return m;
  }
  m.error_rate = static_cast<double>(wrong) / static_cast<double>(scored);
  double macro = 0.0;
  std::size_t num = 0, den = 0;
  for (std::size_t c = 0; c < L; ++c) {
    const std::size_t d = 2 * tp[c] + fp[c] + fn[c];
    macro += d == 0 ? 1.0 : 2.0 * static_cast<double>(tp[c]) / static_cast<double>(d);
    num += 2 * tp[c];
    den += d;
  }
  m.macro_f1 = macro / static_cast<double>(L);
  m.micro_f1 = den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  return m;
}

namespace {

json metrics_json(const TrialMetrics& m) {
  return json{{"error_rate", m.error_rate}, {"macro_f1", m.macro_f1}, {"micro_f1", m.micro_f1}};
}

json trial_json(const TrialRecord& rec, Method method) {
  json j;
  j["trial"] = rec.trial;
  j["seed"] = rec.seed;
  j["method"] = method_name(method);
  j["failed"] = rec.failed;
  if (rec.failed) j["failure"] = rec.failure;
  json labeled = json::array();
  json labeled_classes = json::array();
  for (const auto& [node, cls] : rec.prior.assignments) {
    labeled.push_back(node);
    labeled_classes.push_back(cls);
  }
  j["labeled"] = std::move(labeled);
  j["labeled_classes"] = std::move(labeled_classes);
  j["num_classes"] = rec.prior.num_classes;
  if (!rec.failed) {
    j["hard"] = rec.labeling.hard;
    json soft = json::array();
    for (std::size_t x = 0; x < rec.labeling.soft.rows(); ++x) {
      json row = json::array();
      for (std::size_t l = 0; l < rec.labeling.soft.cols(); ++l)
        row.push_back(rec.labeling.soft.at(x, l));
      soft.push_back(std::move(row));
    }
    j["soft"] = std::move(soft);
    j["metrics"] = metrics_json(rec.metrics);
    if (method == Method::GRAPH1L) j["trace"] = json::parse(rec.trace.to_json());
  }
  return j;
}

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
};

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  for (double x : xs) a.mean += x;
  a.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - a.mean) * (x - a.mean);
  a.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return a;
}

json summary_from_records(const std::vector<TrialRecord>& trials, Method method) {
  std::vector<double> err, maf1, mif1;
  json per_trial = json::array();
  std::size_t failed = 0;
  for (const auto& rec : trials) {
    json t;
    t["trial"] = rec.trial;
    t["failed"] = rec.failed;
    if (rec.failed) {
      ++failed;
      t["failure"] = rec.failure;
    } else {
      err.push_back(rec.metrics.error_rate);
      maf1.push_back(rec.metrics.macro_f1);
      mif1.push_back(rec.metrics.micro_f1);
      t["metrics"] = metrics_json(rec.metrics);
    }
    per_trial.push_back(std::move(t));
  }
  const Aggregate ae = aggregate(err), ama = aggregate(maf1), ami = aggregate(mif1);
  json j;
  j["method"] = method_name(method);
  j["trials"] = trials.size();
  j["failed_trials"] = failed;
  j["mean"] = json{{"error_rate", ae.mean}, {"macro_f1", ama.mean}, {"micro_f1", ami.mean}};
  j["std"] = json{{"error_rate", ae.stddev}, {"macro_f1", ama.stddev}, {"micro_f1", ami.stddev}};
  j["per_trial"] = std::move(per_trial);
  return j;
}

std::string trial_filename(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03zu.json", t);
  return buf;
}

}  // namespace

std::string MetricsReport::summary_json(Method method) const {
  return summary_from_records(trials, method).dump(2);
}

MetricsReport run_experiment(const WeightedGraph& g, const std::vector<int>& truth,
                             const TrialPlan& plan, const ExperimentConfig& cfg) {
  const std::size_t n = g.num_nodes();
  if (truth.size() != n) throw DimensionMismatch(n, truth.size());
  if (plan.trials < 1) throw std::invalid_argument("trials must be >= 1");

  // built once; the flow shares it across trials
  std::optional<GradientOperator> op;
  if (plan.method == Method::GRAPH1L) op.emplace(g);

  std::vector<TrialRecord> records(plan.trials);
#pragma omp parallel for schedule(dynamic)
  for (long long tt = 0; tt < static_cast<long long>(plan.trials); ++tt) {
    const std::size_t t = static_cast<std::size_t>(tt);
    TrialRecord& rec = records[t];
    rec.trial = t;
    rec.seed = Rng::derive(plan.base_seed, 2 * t);
    try {
      rec.prior = split_labels(truth, plan, t);
      switch (plan.method) {
        case Method::GRAPH1L: {
          FlowConfig fc = cfg.flow;
          fc.seed = Rng::derive(plan.base_seed, 2 * t + 1);
          // outer max-iterations is a reported status, not a failure; the
          // partial state still decodes
          TransductiveResult res = run_transductive(*op, rec.prior, fc);
          rec.labeling = std::move(res.labeling);
          rec.trace = std::move(res.trace);
          break;
        }
        case Method::LGC:
          rec.labeling = run_lgc(g, rec.prior, cfg.diffusion);
          break;
        case Method::LP:
          rec.labeling = run_label_propagation(g, rec.prior, cfg.diffusion);
          break;
      }
      std::vector<bool> mask(n, false);
      for (const auto& [node, cls] : rec.prior.assignments) mask[node] = true;
      rec.metrics = evaluate(rec.labeling, truth, mask);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure = e.what();
    }
  }

  MetricsReport report;
  report.trials = std::move(records);
  std::vector<double> err, maf1, mif1;
  for (const auto& rec : report.trials) {
    if (rec.failed) {
      ++report.failed_trials;
      continue;
    }
    err.push_back(rec.metrics.error_rate);
    maf1.push_back(rec.metrics.macro_f1);
    mif1.push_back(rec.metrics.micro_f1);
  }
  const Aggregate ae = aggregate(err), ama = aggregate(maf1), ami = aggregate(mif1);
  report.mean = {ae.mean, ama.mean, ami.mean};
  report.stddev = {ae.stddev, ama.stddev, ami.stddev};

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    for (const auto& rec : report.trials) {
      std::ofstream out(fs::path(cfg.out_dir) / trial_filename(rec.trial));
      out << trial_json(rec, plan.method).dump(2) << '\n';
    }
    std::ofstream out(fs::path(cfg.out_dir) / "summary.json");
    out << report.summary_json(plan.method) << '\n';
  }
  return report;
}

MetricsReport run_experiment(const ExperimentInput& in, const TrialPlan& plan,
                             const ExperimentConfig& cfg) {
  WeightedGraph g = [&] {
    if (!in.edges_path.empty()) {
      std::size_t n = 0;
      auto edges = load_edge_list(in.edges_path, n);
      return build_from_edge_list(std::move(edges), n);
    }
    if (in.features_path.empty())
      throw std::invalid_argument("need a feature CSV or an edge list");
    return build_knn_gaussian(load_features_csv(in.features_path), in.knn, in.sigma);
  }();
  const std::vector<int> truth = load_labels(in.truth_path);
  return run_experiment(g, truth, plan, cfg);
}

std::string rescore_directory(const std::string& dir, const std::vector<int>& truth) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trial_", 0) == 0 && entry.path().extension() == ".json")
      files.push_back(entry.path());
  }
  if (files.empty()) throw std::invalid_argument("no trial_*.json files in " + dir);
  std::sort(files.begin(), files.end());

  std::vector<TrialRecord> records;
  Method method = Method::GRAPH1L;
  for (const auto& path : files) {
    std::ifstream inf(path);
    json j;
    try {
      inf >> j;
    } catch (const json::exception& e) {
      throw ParseError(path.string(), 0, e.what());
    }
    TrialRecord rec;
    rec.trial = j.at("trial").get<std::size_t>();
    if (j.contains("seed")) rec.seed = j["seed"].get<std::uint64_t>();
    method = method_from_string(j.at("method").get<std::string>());
    rec.failed = j.value("failed", false);
    if (rec.failed) {
      rec.failure = j.value("failure", "");
      records.push_back(std::move(rec));
      continue;
    }
    const auto labeled = j.at("labeled").get<std::vector<std::size_t>>();
    const auto classes = j.at("labeled_classes").get<std::vector<int>>();
    rec.prior.num_classes = j.at("num_classes").get<std::size_t>();
    for (std::size_t i = 0; i < labeled.size(); ++i)
      rec.prior.assignments.emplace_back(labeled[i], classes[i]);
    rec.labeling.hard = j.at("hard").get<std::vector<int>>();
    if (rec.labeling.hard.size() != truth.size())
      throw DimensionMismatch(truth.size(), rec.labeling.hard.size());
    std::vector<bool> mask(truth.size(), false);
    for (std::size_t node : labeled) mask[node] = true;
    rec.metrics = evaluate(rec.labeling, truth, mask);
    records.push_back(std::move(rec));
  }
  return summary_from_records(records, method).dump(2);
}

}  // namespace graph1l
