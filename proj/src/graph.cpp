#include "graph1l/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "graph1l/errors.hpp"
#include "graph1l/vec.hpp"

namespace graph1l {

double WeightedGraph::total_volume() const {
  return detail::blocked_sum(d_.size(), [&](std::size_t i) { return d_[i]; });
}

WeightedGraph build_from_edge_list(std::vector<Edge> edges, std::size_t n) {
  for (auto& e : edges) {
    if (e.i >= n || e.j >= n)
      throw BadIndex("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                     ") with n=" + std::to_string(n));
    if (e.i == e.j)
      throw BadIndex("self-loop at node " + std::to_string(e.i));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw NonPositiveWeight("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                              ") weight " + std::to_string(e.w));
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  // merge duplicates by weight summation
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j)
      merged.back().w += e.w;
    else
      merged.push_back(e);
  }

  WeightedGraph g;
  g.d_.assign(n, 0.0);
  for (const auto& e : merged) {
    g.d_[e.i] += e.w;
    g.d_[e.j] += e.w;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(g.d_[i] > 0.0)) throw IsolatedNode(i);
  g.edges_ = std::move(merged);
  return g;
}

WeightedGraph build_knn_gaussian(const std::vector<std::vector<double>>& features, std::size_t k,
                                 SigmaRule sigma) {
  const std::size_t n = features.size();
  if (n < 2) throw DegenerateFeatures("need at least 2 nodes, got " + std::to_string(n));
  if (k < 1 || k >= n)
    throw BadIndex("k=" + std::to_string(k) + " outside [1, n) with n=" + std::to_string(n));
  const std::size_t dim = features[0].size();
  for (std::size_t i = 0; i < n; ++i)
    if (features[i].size() != dim) throw DimensionMismatch(dim, features[i].size());

  // exact k nearest neighbours per node, ties broken by index
  std::vector<std::vector<std::pair<double, std::size_t>>> nearest(n);
  std::vector<double> sig(n, 0.0);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        const double diff = features[i][t] - features[j][t];
        s += diff * diff;
      }
      cand.emplace_back(std::sqrt(s), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    cand.resize(k);
    nearest[i] = std::move(cand);
    sig[i] = sigma.self_tuning ? nearest[i].back().first : sigma.fixed;
  }

  // symmetrise by max weight per unordered pair
  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [dist, j] : nearest[i]) {
      double w;
      if (dist == 0.0) {
        w = 1.0;  // exp(0), including the coincident-point 0/0 case
      } else {
        const double denom = sig[i] * sig[j];
        w = denom > 0.0 ? std::exp(-dist * dist / denom) : 0.0;
      }
      if (w > 0.0) {
        const auto a = static_cast<std::uint32_t>(std::min(i, j));
        const auto b = static_cast<std::uint32_t>(std::max(i, j));
        edges.push_back({a, b, w});
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<Edge> sym;
  sym.reserve(edges.size());
  for (const auto& e : edges) {
    if (!sym.empty() && sym.back().i == e.i && sym.back().j == e.j)
      sym.back().w = std::max(sym.back().w, e.w);
    else
      sym.push_back(e);
  }
  return build_from_edge_list(std::move(sym), n);
}

// --- file formats ----------------------------------------------------------

std::vector<Edge> load_edge_list(const std::string& path, std::size_t& n_out) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<Edge> edges;
  std::size_t max_node = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long i, j;
    double w;
    if (!(ss >> i)) continue;  // blank or comment-only line
    if (!(ss >> j >> w)) throw ParseError(path, lineno, "expected \"i j w\"");
    std::string trailing;
    if (ss >> trailing) throw ParseError(path, lineno, "trailing content '" + trailing + "'");
    if (i < 0 || j < 0) throw ParseError(path, lineno, "negative node index");
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), w});
    max_node = std::max({max_node, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  if (edges.empty()) throw ParseError(path, lineno, "no edges found");
  n_out = max_node + 1;
  return edges;
}

void save_edge_list(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  char buf[80];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof(buf), "%u %u %.17g\n", e.i, e.j, e.w);
    out << buf;
  }
}

std::vector<std::vector<double>> load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string cell = line.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "not a number: '" + cell + "'");
      }
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path, lineno, "row has " + std::to_string(row.size()) +
                                         " columns, expected " +
                                         std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, lineno, "empty feature matrix");
  return rows;
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(line, &used));
    } catch (const std::exception&) {
      throw ParseError(path, lineno, "not an integer class: '" + line + "'");
    }
  }
  if (labels.empty()) throw ParseError(path, lineno, "no labels found");
  return labels;
}

}  // namespace graph1l
