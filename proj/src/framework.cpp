#include "rigicert/framework.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace rigicert {

std::string to_string(DofClass c) {
  switch (c) {
    case DofClass::isostatic:
      return "isostatic";
    case DofClass::hyperstatic:
      return "hyperstatic";
    case DofClass::hypostatic:
      return "hypostatic";
  }
  return "?";
}

int trivial_motion_dim(int dim) { return dim * (dim + 1) / 2; }

namespace {

// Numerical rank of the centered point matrix decides whether the
// points affinely span R^d. Same tolerance rule as kernel_data.
int affine_span_dim(const Configuration& c) {
  const int n = c.vertex_count();
  if (n < 2) return 0;
  Eigen::MatrixXd centered(n - 1, c.dim);
  for (int i = 1; i < n; ++i) centered.row(i - 1) = c.points.row(i) - c.points.row(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double tol = std::max(centered.rows(), centered.cols()) *
                     std::numeric_limits<double>::epsilon() * sv(0);
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > tol) ++rank;
  return rank;
}

}  // namespace

std::vector<std::string> validate_framework(const Framework& f) {
  std::vector<std::string> violations;
  const Graph& g = f.graph;
  const Configuration& c = f.config;
  std::ostringstream msg;

  if (g.n < 2) violations.push_back("vertex count " + std::to_string(g.n) + " < 2");
  if (c.dim < 1) violations.push_back("dimension " + std::to_string(c.dim) + " < 1");
  if (c.points.cols() != c.dim)
    violations.push_back("point matrix has " + std::to_string(c.points.cols()) +
                         " columns, expected dim = " + std::to_string(c.dim));
  if (c.vertex_count() != g.n)
    violations.push_back("graph has " + std::to_string(g.n) + " vertices but " +
                         std::to_string(c.vertex_count()) + " points given");

  std::set<Edge> seen;
  for (const Edge& e : g.edges) {
    if (e.i == e.j) {
      violations.push_back("self-loop at vertex " + std::to_string(e.i + 1));
      continue;
    }
    if (e.i < 0 || e.j >= g.n) {
      violations.push_back("edge {" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
                           "} has a vertex outside 1.." + std::to_string(g.n));
      continue;
    }
    if (!seen.insert(e).second)
      violations.push_back("duplicate edge {" + std::to_string(e.i + 1) + "," +
                           std::to_string(e.j + 1) + "}");
  }

  if (!c.points.allFinite()) violations.push_back("non-finite coordinate");

  // Span and count checks only make sense on structurally sound input.
  if (violations.empty()) {
    if (g.n < c.dim + 1)
      violations.push_back("n = " + std::to_string(g.n) + " < d+1 = " + std::to_string(c.dim + 1));
    const int span = affine_span_dim(c);
    if (span < c.dim)
      violations.push_back("affine span dimension " + std::to_string(span) + " < " +
                           std::to_string(c.dim));
  }
  return violations;
}

void require_valid(const Framework& f) {
  const auto violations = validate_framework(f);
  if (violations.empty()) return;
  std::string msg = "invalid framework:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw InvalidFrameworkError(msg);
}

DofProfile dof_profile(const Framework& f) {
  DofProfile p;
  p.m = f.graph.edge_count();
  p.nd = f.graph.n * f.config.dim;
  p.trivial_dim = trivial_motion_dim(f.config.dim);
  const int excess = p.m - (p.nd - p.trivial_dim);
  p.surplus = std::abs(excess);
  p.dof_class = excess == 0   ? DofClass::isostatic
                : excess > 0 ? DofClass::hyperstatic
                             : DofClass::hypostatic;
  return p;
}

std::map<int, std::vector<int>> neighbor_sets(const Graph& g) {
  std::map<int, std::vector<int>> nbr;
  for (int i = 0; i < g.n; ++i) nbr[i] = {};
  for (const Edge& e : g.edges) {
    nbr[e.i].push_back(e.j);
    nbr[e.j].push_back(e.i);
  }
  for (auto& [v, list] : nbr) std::sort(list.begin(), list.end());
  return nbr;
}

double configuration_scale(const Configuration& c) {
  if (c.vertex_count() == 0) return 0.0;
  const Eigen::RowVectorXd centroid = c.points.colwise().mean();
  return (c.points.rowwise() - centroid).cwiseAbs().maxCoeff();
}

Framework make_framework(int dim, const std::vector<std::vector<double>>& points,
                         const std::vector<std::pair<int, int>>& edges_1based) {
  Framework f;
  f.config.dim = dim;
  f.config.points.resize(static_cast<Eigen::Index>(points.size()), dim);
  for (size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != dim)
      throw InvalidFrameworkError("point " + std::to_string(i + 1) + " has " +
                                  std::to_string(points[i].size()) + " coordinates, expected " +
                                  std::to_string(dim));
    for (int k = 0; k < dim; ++k) f.config.points(static_cast<Eigen::Index>(i), k) = points[i][k];
  }
  f.graph.n = static_cast<int>(points.size());
  for (auto [i, j] : edges_1based) f.graph.edges.emplace_back(i - 1, j - 1);
  return f;
}

}  // namespace rigicert
