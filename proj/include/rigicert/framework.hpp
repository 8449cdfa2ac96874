#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Framework data model: graphs, point configurations, and the
// degrees-of-freedom bookkeeping that classifies a framework as
// isostatic, hyperstatic or hypostatic.

namespace rigicert {

class InvalidFrameworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unordered vertex pair, stored with i < j. Vertices are 0-based
// internally; file formats and reports use 1-based indices.
struct Edge {
  int i = 0;
  int j = 0;

  Edge() = default;
  Edge(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Graph {
  int n = 0;                // vertex count
  std::vector<Edge> edges;  // no self-loops, no duplicates

  int edge_count() const { return static_cast<int>(edges.size()); }
};

struct Configuration {
  int dim = 0;             // ambient dimension d >= 1
  Eigen::MatrixXd points;  // n x dim, one row per vertex

  int vertex_count() const { return static_cast<int>(points.rows()); }
};

struct Framework {
  Graph graph;
  Configuration config;
};

enum class DofClass { isostatic, hyperstatic, hypostatic };

std::string to_string(DofClass c);

// m vs nd - D arithmetic; D = binom(d+1, 2) is the dimension of the
// trivial-motion space.
struct DofProfile {
  int m = 0;            // edge count
  int nd = 0;           // total coordinates
  int trivial_dim = 0;  // D
  DofClass dof_class = DofClass::isostatic;
  int surplus = 0;      // k = |m - (nd - D)|

  int pinned_size() const { return nd - trivial_dim; }
};

// D = binom(d+1, 2) = d + d(d-1)/2.
int trivial_motion_dim(int dim);

// Returns every invariant violation as a human-readable message; an
// empty list means the framework is valid. Violations are data, not
// failures.
std::vector<std::string> validate_framework(const Framework& f);

// Throws InvalidFrameworkError listing all violations.
void require_valid(const Framework& f);

DofProfile dof_profile(const Framework& f);

// N(i) = { j : {i,j} in edges }, sorted. Keys are 0-based.
std::map<int, std::vector<int>> neighbor_sets(const Graph& g);

// Max absolute centered coordinate; the length scale used for
// finite-difference steps and report normalization.
double configuration_scale(const Configuration& c);

// Convenience builder; edge pairs are 1-based as in files and reports.
Framework make_framework(int dim, const std::vector<std::vector<double>>& points,
                         const std::vector<std::pair<int, int>>& edges_1based);

}  // namespace rigicert
