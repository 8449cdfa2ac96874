#include "rigicert/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rigicert {

bool PinSet::contains(int col) const {
  return std::binary_search(cols.begin(), cols.end(), col);
}

RigidityMatrix build_rigidity_matrix(const Framework& f) {
  require_valid(f);
  const int d = f.config.dim;
  const int m = f.graph.edge_count();
  RigidityMatrix r;
  r.dim = d;
  r.row_edges = f.graph.edges;
  r.entries = Eigen::MatrixXd::Zero(m, f.graph.n * d);
  for (int e = 0; e < m; ++e) {
    const auto [i, j] = f.graph.edges[e];
    for (int k = 0; k < d; ++k) {
      const double diff = f.config.points(i, k) - f.config.points(j, k);
      r.entries(e, i * d + k) = diff;
      r.entries(e, j * d + k) = -diff;
    }
  }
  return r;
}

Eigen::MatrixXd trivial_motion_basis(const Configuration& c) {
  const int n = c.vertex_count();
  const int d = c.dim;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n * d, trivial_motion_dim(d));
  int col = 0;
  for (int k = 0; k < d; ++k, ++col)
    for (int i = 0; i < n; ++i) t(i * d + k, col) = 1.0;
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l, ++col)
      for (int i = 0; i < n; ++i) {
        t(i * d + k, col) = c.points(i, l);
        t(i * d + l, col) = -c.points(i, k);
      }
  return t;
}

PinSet select_pin_set(const Framework& f) {
  require_valid(f);
  Eigen::MatrixXd t = trivial_motion_basis(f.config);
  const int nd = static_cast<int>(t.rows());
  const int D = static_cast<int>(t.cols());
  std::vector<bool> used(nd, false);
  std::vector<int> pins;
  for (int col = 0; col < D; ++col) {
    int best = -1;
    double best_abs = 0.0;
    for (int row = 0; row < nd; ++row) {
      if (used[row]) continue;
      const double a = std::abs(t(row, col));
      if (a > best_abs) {
        best_abs = a;
        best = row;
      }
    }
    if (best < 0 || best_abs == 0.0)
      throw InvalidFrameworkError("degenerate configuration: trivial motions not independent");
    used[best] = true;
    pins.push_back(best);
    for (int row = 0; row < nd; ++row)
      if (row != best && t(row, col) != 0.0) t.row(row) -= (t(row, col) / t(best, col)) * t.row(best);
  }
  std::sort(pins.begin(), pins.end());
  return PinSet{std::move(pins), nd};
}

PinSet make_pin_set(const Framework& f, std::vector<int> cols) {
  require_valid(f);
  const int nd = f.graph.n * f.config.dim;
  const int D = trivial_motion_dim(f.config.dim);
  if (static_cast<int>(cols.size()) != D)
    throw InvalidFrameworkError("pin set has " + std::to_string(cols.size()) +
                                " coordinates, expected D = " + std::to_string(D));
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
    throw InvalidFrameworkError("pin set repeats a coordinate");
  if (cols.front() < 0 || cols.back() >= nd)
    throw InvalidFrameworkError("pin set coordinate out of range");

  const Eigen::MatrixXd t = trivial_motion_basis(f.config);
  Eigen::MatrixXd sub(D, D);
  for (int r = 0; r < D; ++r) sub.row(r) = t.row(cols[r]);
  const KernelData k = kernel_data(sub);
  if (k.rank != D)
    throw InvalidFrameworkError("pin set does not fix the trivial motions (singular submatrix)");
  return PinSet{std::move(cols), nd};
}

PinnedMatrix pin_columns(const RigidityMatrix& r, const PinSet& pins) {
  if (pins.total_coords != r.entries.cols())
    throw InvalidFrameworkError("pin set built for " + std::to_string(pins.total_coords) +
                                " coordinates, matrix has " + std::to_string(r.entries.cols()));
  PinnedMatrix p;
  p.pins = pins;
  p.col_map.reserve(pins.pinned_size());
  for (int c = 0; c < pins.total_coords; ++c)
    if (!pins.contains(c)) p.col_map.push_back(c);
  p.entries.resize(r.entries.rows(), static_cast<Eigen::Index>(p.col_map.size()));
  for (size_t c = 0; c < p.col_map.size(); ++c)
    p.entries.col(static_cast<Eigen::Index>(c)) = r.entries.col(p.col_map[c]);
  return p;
}

Eigen::VectorXd sign_fix(Eigen::VectorXd v) {
  const double mag = v.cwiseAbs().maxCoeff();
  if (mag == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * mag) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

KernelData kernel_data(const Eigen::MatrixXd& m, double tol_factor) {
  if (!m.allFinite()) throw InvalidFrameworkError("kernel_data: non-finite entries");
  if (!(tol_factor > 0.0)) throw InvalidFrameworkError("kernel_data: tol_factor must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  KernelData k;
  k.singular_values = svd.singularValues();
  const double sigma_max = k.singular_values.size() ? k.singular_values(0) : 0.0;
  k.tol = tol_factor * static_cast<double>(std::max(m.rows(), m.cols())) *
          std::numeric_limits<double>::epsilon() * sigma_max;
  for (Eigen::Index i = 0; i < k.singular_values.size(); ++i)
    if (k.singular_values(i) > k.tol) ++k.rank;
  if (k.tol > 0.0)
    for (Eigen::Index i = 0; i < k.singular_values.size(); ++i) {
      const double s = k.singular_values(i);
      if (s >= k.tol / 10.0 && s <= 10.0 * k.tol) k.marginal = true;
    }

  const Eigen::Index rows = m.rows(), cols = m.cols();
  k.stress_basis.resize(rows, rows - k.rank);
  for (Eigen::Index c = k.rank; c < rows; ++c)
    k.stress_basis.col(c - k.rank) = sign_fix(svd.matrixU().col(c));
  k.flex_basis.resize(cols, cols - k.rank);
  for (Eigen::Index c = k.rank; c < cols; ++c)
    k.flex_basis.col(c - k.rank) = sign_fix(svd.matrixV().col(c));
  return k;
}

FullFlex zero_pad(const Eigen::VectorXd& flex, const PinSet& pins) {
  if (flex.size() != pins.pinned_size())
    throw InvalidFrameworkError("flex length " + std::to_string(flex.size()) +
                                " does not match pinned size " +
                                std::to_string(pins.pinned_size()));
  FullFlex full;
  full.pins = pins;
  full.values = Eigen::VectorXd::Zero(pins.total_coords);
  Eigen::Index src = 0;
  for (int c = 0; c < pins.total_coords; ++c)
    if (!pins.contains(c)) full.values(c) = flex(src++);
  return full;
}

Eigen::VectorXd drop_pinned(const FullFlex& flex) {
  Eigen::VectorXd out(flex.pins.pinned_size());
  Eigen::Index dst = 0;
  for (int c = 0; c < flex.pins.total_coords; ++c)
    if (!flex.pins.contains(c)) out(dst++) = flex.values(c);
  return out;
}

PinnedMatrix rigidity_matrix_of_flex(const Framework& f, const FullFlex& v, const PinSet& pins) {
  const int d = f.config.dim;
  const int nd = f.graph.n * d;
  if (v.values.size() != nd)
    throw InvalidFrameworkError("flex vector length " + std::to_string(v.values.size()) +
                                " does not match nd = " + std::to_string(nd));
  RigidityMatrix r;
  r.dim = d;
  r.row_edges = f.graph.edges;
  r.entries = Eigen::MatrixXd::Zero(f.graph.edge_count(), nd);
  for (int e = 0; e < f.graph.edge_count(); ++e) {
    const auto [i, j] = f.graph.edges[e];
    for (int k = 0; k < d; ++k) {
      const double diff = v.values(i * d + k) - v.values(j * d + k);
      r.entries(e, i * d + k) = diff;
      r.entries(e, j * d + k) = -diff;
    }
  }
  return pin_columns(r, pins);
}

}  // namespace rigicert
