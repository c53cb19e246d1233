#include "graph1l/flow.hpp"

#include <algorithm>
#include <cmath>

#include "graph1l/errors.hpp"
#include "graph1l/rng.hpp"
#include "json.hpp"

namespace graph1l {

namespace {

void project_out_degree(std::span<double> u, std::span<const double> d) {
  const double c = dot(d, u) / dot(d, d);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= c * d[i];
}

void normalise_joint(MultiClassState& u) {
  const double nrm = u.joint_norm();
  if (!(nrm > 0.0)) throw std::runtime_error("flow state vanished entirely");
  const double inv = 1.0 / nrm;
  for (double& v : u.flat()) v *= inv;
}

struct StateMetrics {
  std::vector<double> ratios;
  std::vector<double> denominators;
};

// appends one state row to the trace and returns the per-class ratios
StateMetrics record_state(FlowTrace& trace, const GradientOperator& g, const MultiClassState& u,
                          Denominator kind, const std::vector<int>& lab) {
  const std::size_t L = u.cols();
  const auto& d = g.graph().degrees();
  StateMetrics sm;
  sm.ratios.resize(L);
  sm.denominators.resize(L);
  std::vector<double> dorth(L);
  for (std::size_t l = 0; l < L; ++l) {
    const RatioValue rv = ratio(g, u.col(l), kind);
    sm.ratios[l] = rv.ratio;
    sm.denominators[l] = rv.denominator;
    dorth[l] = dot(u.col(l), d);
  }
  double viol = 0.0;
  if (L > 1) {
    for (std::size_t x = 0; x < u.rows(); ++x) {
      if (!lab.empty() && lab[x] >= 0) continue;
      double s = 0.0;
      for (std::size_t l = 0; l < L; ++l) s += u.at(x, l);
      viol = std::max(viol, std::abs(s));
    }
  }
  trace.ratios.push_back(sm.ratios);
  trace.denominators.push_back(sm.denominators);
  trace.d_orthogonality.push_back(std::move(dorth));
  trace.constraint_violation.push_back(viol);
  trace.norms.push_back(u.joint_norm());
  return sm;
}

// labeled rows must keep their sign pattern through the joint rescaling
void check_label_signs(const MultiClassState& u, const std::vector<int>& lab, std::size_t iter) {
  for (std::size_t x = 0; x < u.rows(); ++x) {
    if (lab[x] < 0) continue;
    for (std::size_t l = 0; l < u.cols(); ++l) {
      const double v = u.at(x, l);
      const bool own = static_cast<int>(l) == lab[x];
      if ((own && !(v > 0.0)) || (!own && !(v < 0.0)))
        throw InfeasibleEpsilon("labeled node " + std::to_string(x) +
                                " lost its sign pattern at outer iteration " +
                                std::to_string(iter) + "; epsilon too small for this graph");
    }
  }
}

struct CoreResult {
  MultiClassState u;
  FlowTrace trace;
};

CoreResult run_flow_core(const GradientOperator& g, MultiClassState u0,
                         const ConstraintSpec& constraint, const FlowConfig& cfg) {
  if (!(cfg.dt > 0.0) || cfg.max_outer < 1 || !(cfg.outer_tol > 0.0))
    throw std::invalid_argument("invalid FlowConfig");
  const std::size_t n = g.num_nodes();
  const std::size_t L = u0.cols();
  const auto& d = g.graph().degrees();
  const std::vector<int> lab = constraint.mode == CouplingMode::TRANSDUCTIVE
                                   ? constraint.label_of(n)
                                   : std::vector<int>{};

  CoreResult res;
  res.u = std::move(u0);
  FlowTrace& trace = res.trace;
  trace.status = FlowStatus::MaxOuterReached;

  StateMetrics sm = record_state(trace, g, res.u, cfg.kind, lab);
  MultiClassState dual(g.num_edges(), L);
  MultiClassState q_shifted(n, L);

  for (std::size_t k = 0; k < cfg.max_outer; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      const std::vector<double> q = subgradient_H(res.u.col(l), cfg.kind);
      const std::vector<double> qs = shifted_subgradient(q, d);
      std::copy(qs.begin(), qs.end(), q_shifted.col(l).begin());
    }
    ProxResult pr =
        L == 1 && constraint.mode == CouplingMode::NONE
            ? prox_step_binary(g, res.u.col(0), sm.ratios[0], q_shifted.col(0), cfg.dt, cfg.inner,
                               &dual)
            : prox_step_multiclass(g, res.u, sm.ratios, q_shifted, cfg.dt, constraint, cfg.inner,
                                   &dual);
    MultiClassState u_half = std::move(pr.u_half);
    dual = std::move(pr.dual);

    if (constraint.mode != CouplingMode::TRANSDUCTIVE) {
      // the exact minimiser is d-orthogonal per class (and in C); strip the
      // solver noise from those directions before renormalising
      for (std::size_t l = 0; l < L; ++l) project_out_degree(u_half.col(l), d);
      project_coupling(u_half, constraint);
    }

    const double half_norm = u_half.joint_norm();
    MultiClassState u_next = u_half;
    normalise_joint(u_next);
    if (constraint.mode == CouplingMode::TRANSDUCTIVE) check_label_signs(u_next, lab, k);

    const double residual = frobenius_dist(u_next, res.u);
    trace.residuals.push_back(residual);
    trace.inner_iters.push_back(pr.iterations);
    trace.half_norms.push_back(half_norm);

    res.u = std::move(u_next);
    sm = record_state(trace, g, res.u, cfg.kind, lab);

    if (residual <= cfg.outer_tol) {
      trace.status = FlowStatus::Converged;
      break;
    }
  }
  return res;
}

}  // namespace

std::string FlowTrace::to_json() const {
  nlohmann::json j;
  j["ratios"] = ratios;
  j["denominators"] = denominators;
  j["residuals"] = residuals;
  j["constraint_violation"] = constraint_violation;
  j["norms"] = norms;
  j["d_orthogonality"] = d_orthogonality;
  j["inner_iters"] = inner_iters;
  j["half_norms"] = half_norms;
  j["status"] = status == FlowStatus::Converged ? "converged" : "max_outer_reached";
  return j.dump();
}

void LabelPrior::validate_nodes(std::size_t n) const {
  if (num_classes < 1) throw std::invalid_argument("prior needs at least one class");
  std::vector<bool> used(n, false);
  for (const auto& [node, cls] : assignments) {
    if (node >= n) throw BadIndex("labeled node " + std::to_string(node));
    if (cls < 0 || static_cast<std::size_t>(cls) >= num_classes)
      throw BadIndex("class " + std::to_string(cls) + " outside [0, " +
                     std::to_string(num_classes) + ")");
    if (used[node])
      throw std::invalid_argument("node " + std::to_string(node) + " labeled twice");
    used[node] = true;
  }
}

void LabelPrior::validate(std::size_t n) const {
  validate_nodes(n);
  std::vector<bool> seen(num_classes, false);
  for (const auto& [node, cls] : assignments) seen[static_cast<std::size_t>(cls)] = true;
  for (std::size_t c = 0; c < num_classes; ++c)
    if (!seen[c])
      throw std::invalid_argument("class " + std::to_string(c) + " has no labeled node");
}

std::vector<int> LabelPrior::label_of(std::size_t n) const {
  std::vector<int> lab(n, -1);
  for (const auto& [node, cls] : assignments) lab[node] = cls;
  return lab;
}

std::vector<std::vector<std::size_t>> LabelPrior::class_sets() const {
  std::vector<std::vector<std::size_t>> sets(num_classes);
  for (const auto& [node, cls] : assignments) sets[static_cast<std::size_t>(cls)].push_back(node);
  return sets;
}

BinaryFlowResult run_binary(const GradientOperator& g, const FlowConfig& cfg,
                            const std::vector<double>* u0) {
  const std::size_t n = g.num_nodes();
  const auto& d = g.graph().degrees();
  std::vector<double> start;
  if (u0) {
    if (u0->size() != n) throw DimensionMismatch(n, u0->size());
    const double dn = std::abs(dot(*u0, d)) / (norm2(*u0) * norm2(d));
    if (dn > 1e-10) throw std::invalid_argument("u0 is not d-orthogonal");
    if (std::abs(norm2(*u0) - 1.0) > 1e-10) throw std::invalid_argument("u0 is not unit norm");
    start = *u0;
  } else {
    Rng rng(cfg.seed);
    start = rng.normal_vector(n);
    project_out_degree(start, d);
    const double nrm = norm2(start);
    if (!(nrm > 0.0)) throw std::runtime_error("degenerate random start");
    for (double& v : start) v /= nrm;
  }

  MultiClassState s(n, 1);
  std::copy(start.begin(), start.end(), s.col(0).begin());
  CoreResult core = run_flow_core(g, std::move(s), ConstraintSpec::none(), cfg);

  BinaryFlowResult out;
  out.u.assign(core.u.col(0).begin(), core.u.col(0).end());
  out.trace = std::move(core.trace);
  bool any_pos = false, any_neg = false;
  for (double v : out.u) {
    any_pos = any_pos || v > 1e-10;
    any_neg = any_neg || v < -1e-10;
  }
  if (!any_pos || !any_neg) throw ConstantLimit();
  out.partition.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.partition[i] = out.u[i] > 0.0;
  return out;
}

MultiClassFlowResult run_multiclass(const GradientOperator& g, std::size_t num_classes,
                                    const FlowConfig& cfg, const MultiClassState* u0) {
  const std::size_t n = g.num_nodes();
  if (num_classes < 2) throw std::invalid_argument("need at least 2 classes");
  const auto& d = g.graph().degrees();
  MultiClassState start;
  if (u0) {
    if (u0->rows() != n || u0->cols() != num_classes)
      throw DimensionMismatch(n * num_classes, u0->rows() * u0->cols());
    for (std::size_t l = 0; l < num_classes; ++l) {
      const double dn = std::abs(dot(u0->col(l), d)) / std::max(norm2(u0->col(l)) * norm2(d), 1e-300);
      if (dn > 1e-10) throw std::invalid_argument("u0 class " + std::to_string(l) +
                                                  " is not d-orthogonal");
    }
    if (std::abs(u0->joint_norm() - 1.0) > 1e-10)
      throw std::invalid_argument("u0 joint norm is not 1");
    MultiClassState check = *u0;
    project_coupling(check, ConstraintSpec::sum_zero());
    if (frobenius_dist(check, *u0) > 1e-10)
      throw std::invalid_argument("u0 violates the zero-sum coupling");
    start = *u0;
  } else {
    Rng rng(cfg.seed);
    start = MultiClassState(n, num_classes);
    for (double& v : start.flat()) v = rng.normal();
    for (std::size_t l = 0; l < num_classes; ++l) project_out_degree(start.col(l), d);
    project_coupling(start, ConstraintSpec::sum_zero());
    normalise_joint(start);
  }
  CoreResult core = run_flow_core(g, std::move(start), ConstraintSpec::sum_zero(), cfg);
  return {std::move(core.u), std::move(core.trace)};
}

MultiClassState init_transductive(const GradientOperator& g, const LabelPrior& prior,
                                  double epsilon, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  prior.validate(n);
  const std::size_t L = prior.num_classes;
  if (L < 2) throw std::invalid_argument("transductive flow needs at least 2 classes");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

  const double amplitude = 1.0;
  const std::vector<int> lab = prior.label_of(n);
  MultiClassState u(n, L);
  Rng rng(seed);
  for (std::size_t x = 0; x < n; ++x) {
    if (lab[x] >= 0) {
      for (std::size_t l = 0; l < L; ++l)
        u.at(x, l) = static_cast<int>(l) == lab[x] ? (static_cast<double>(L) - 1.0) * amplitude
                                                   : -amplitude;
    } else {
      for (std::size_t l = 0; l < L; ++l) u.at(x, l) = 0.01 * amplitude * rng.normal();
      double mean = 0.0;
      for (std::size_t l = 0; l < L; ++l) mean += u.at(x, l);
      mean /= static_cast<double>(L);
      for (std::size_t l = 0; l < L; ++l) u.at(x, l) -= mean;
    }
  }
  const double nrm = u.joint_norm();
  if (epsilon > 0.5 * amplitude / nrm)
    throw InfeasibleEpsilon("epsilon " + std::to_string(epsilon) +
                            " cannot survive normalisation (limit " +
                            std::to_string(0.5 * amplitude / nrm) + " for this prior)");
  const double inv = 1.0 / nrm;
  for (double& v : u.flat()) v *= inv;
  return u;
}

TransductiveResult run_transductive(const GradientOperator& g, const LabelPrior& prior,
                                    const FlowConfig& cfg) {
  prior.validate(g.num_nodes());
  MultiClassState u0 = init_transductive(g, prior, cfg.epsilon, cfg.seed);
  const ConstraintSpec constraint = ConstraintSpec::transductive(prior.class_sets(), cfg.epsilon);
  CoreResult core = run_flow_core(g, std::move(u0), constraint, cfg);
  TransductiveResult out;
  out.labeling = decode_labels(core.u, &prior);
  out.u = std::move(core.u);
  out.trace = std::move(core.trace);
  return out;
}

Labeling decode_labels(const MultiClassState& u, const LabelPrior* prior) {
  const std::size_t n = u.rows();
  const std::size_t L = u.cols();
  Labeling out;
  out.hard.resize(n);
  out.soft = MultiClassState(n, L);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < L; ++l)
      if (u.at(x, l) > u.at(x, best)) best = l;  // ties keep the lowest index
    out.hard[x] = static_cast<int>(best);

    double mass = 0.0;
    std::size_t support = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (u.at(x, l) >= 0.0) {
        mass += u.at(x, l);
        ++support;
      }
    }
    if (support == 0) {
      for (std::size_t l = 0; l < L; ++l) out.soft.at(x, l) = 1.0 / static_cast<double>(L);
    } else if (mass > 0.0) {
      for (std::size_t l = 0; l < L; ++l)
        out.soft.at(x, l) = u.at(x, l) >= 0.0 ? u.at(x, l) / mass : 0.0;
    } else {
      // nonnegative support with zero mass: uniform over the support (the
      // all-zero row reduces to 1/L)
      for (std::size_t l = 0; l < L; ++l)
        out.soft.at(x, l) = u.at(x, l) >= 0.0 ? 1.0 / static_cast<double>(support) : 0.0;
    }
  }
  if (prior)
    for (const auto& [node, cls] : prior->assignments) out.hard[node] = cls;
  return out;
}

}  // namespace graph1l
