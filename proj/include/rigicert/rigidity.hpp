#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rigicert/framework.hpp"

// Rigidity-matrix assembly, trivial-motion pinning, and SVD-based
// rank/kernel computation with an explicit tolerance rule.

namespace rigicert {

// m x nd first-order edge-length constraint matrix. Row e = {i,j}
// carries (p_i - p_j) in the d columns of vertex i and the negation in
// the d columns of vertex j; column index is vertex*dim + axis.
struct RigidityMatrix {
  Eigen::MatrixXd entries;
  int dim = 0;
  std::vector<Edge> row_edges;  // edge per row, in graph order
};

// The D coordinates removed to mod out trivial motions. Valid only if
// the trivial-motion basis restricted to these rows is invertible.
struct PinSet {
  std::vector<int> cols;  // ascending column indices into nd
  int total_coords = 0;   // nd of the parent framework

  int pinned_size() const { return total_coords - static_cast<int>(cols.size()); }
  bool contains(int col) const;
};

struct PinnedMatrix {
  Eigen::MatrixXd entries;   // m x (nd - D)
  std::vector<int> col_map;  // parent column per column, ascending
  PinSet pins;
};

// Numerical rank and orthonormal kernel bases of one matrix.
// tol = max(rows, cols) * machine epsilon * sigma_max. Basis vectors
// are sign-fixed so the first nonzero entry is positive. marginal is
// set when any singular value falls within a factor 10 of tol.
struct KernelData {
  int rank = 0;
  double tol = 0.0;
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd stress_basis;     // rows x (rows - rank), left kernel
  Eigen::MatrixXd flex_basis;       // cols x (cols - rank), right kernel
  bool marginal = false;

  int stress_count() const { return static_cast<int>(stress_basis.cols()); }
  int flex_count() const { return static_cast<int>(flex_basis.cols()); }
};

// Length-nd flex with zeros at the pinned coordinates.
struct FullFlex {
  Eigen::VectorXd values;
  PinSet pins;
};

RigidityMatrix build_rigidity_matrix(const Framework& f);

// nd x D basis of the trivial motions: d translations followed by the
// d(d-1)/2 coordinate-plane rotations (pair k<l: slot k gets +p_l,
// slot l gets -p_k). Every rigidity matrix of the same configuration
// annihilates these columns.
Eigen::MatrixXd trivial_motion_basis(const Configuration& c);

// Deterministic pin choice: greedy column-pivoted elimination on the
// trivial-motion basis, scanning rows in (vertex, coordinate) order so
// ties go to the lowest index.
PinSet select_pin_set(const Framework& f);

// Validates an explicit choice of D pinned coordinates (0-based column
// indices); throws InvalidFrameworkError if the pinned D x D submatrix
// of the trivial-motion basis is singular.
PinSet make_pin_set(const Framework& f, std::vector<int> cols);

PinnedMatrix pin_columns(const RigidityMatrix& r, const PinSet& pins);

// tol_factor rescales the rank tolerance (reports echo it so verdicts
// stay auditable).
KernelData kernel_data(const Eigen::MatrixXd& m, double tol_factor = 1.0);

// Sign convention shared by kernel bases and reports: flip so the
// first entry exceeding 1e-12 * max|v| is positive.
Eigen::VectorXd sign_fix(Eigen::VectorXd v);

FullFlex zero_pad(const Eigen::VectorXd& flex, const PinSet& pins);

// Deletes the pinned slots again; inverse of zero_pad.
Eigen::VectorXd drop_pinned(const FullFlex& flex);

// Rigidity matrix of the same graph built off the flex vector treated
// entrywise as a configuration, then pinned. This is R(p-hat') in the
// bilinear form of the stress-energy test.
PinnedMatrix rigidity_matrix_of_flex(const Framework& f, const FullFlex& v, const PinSet& pins);

}  // namespace rigicert
