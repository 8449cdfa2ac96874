#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigicert/framework.hpp"
#include "rigicert/rigidity.hpp"

// The two rigidity certificates (prestress stability and transverse
// rigidity), the determinant-gradient machinery behind the second, and
// the numerical verification that the two are the same test.

namespace rigicert {

// Raised when a test is asked for in a regime where it is not defined
// (wrong nullity, non-square pinned matrix).
class InapplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertifyOptions {
  // |value| must exceed margin * natural scale to count as nonzero.
  double margin = 1e-6;
  // finite-difference step, relative to configuration_scale.
  double fd_step_rel = 1e-6;
  // proportionality residual accepted by the equivalence check.
  double equivalence_threshold = 1e-8;
  // multiplier on the rank tolerance used for every kernel decision.
  double tol_factor = 1.0;
};

// Sum over edges of omega_e * |flex_i - flex_j|^2, evaluated on the
// zero-padded flex.
double stress_energy(const Graph& g, const Eigen::VectorXd& omega, const FullFlex& v);

// The same quantity written as omega^T R(p-hat') p' with the rigidity
// matrix built off the flex. flex is in pinned coordinates.
double stress_energy_bilinear(const Framework& f, const PinSet& pins,
                              const Eigen::VectorXd& omega, const Eigen::VectorXd& flex);

// All signed minors of a square matrix, computed from one SVD:
// cof(M) = det(U) det(V) * U * diag(prod_{k != i} sigma_k) * V^T.
// With nullity 1 this is a rank-1 matrix proportional to the outer
// product of the kernel vectors; with nullity >= 2 it vanishes.
struct CofactorData {
  Eigen::MatrixXd cof;
  int nullity = 0;
  // rank-1 factorization, populated when nullity == 1
  Eigen::VectorXd rank1_left;
  Eigen::VectorXd rank1_right;
  double scale = 0.0;            // cof ~ scale * left * right^T
  double rank1_residual = 0.0;   // Frobenius-relative
  // bound tol * prod of the largest N-2 singular values; the whole
  // matrix stays below it when nullity >= 2
  double zero_threshold = 0.0;
};

CofactorData cofactor_matrix(const Eigen::MatrixXd& m);

struct DetGradient {
  enum class Method { analytic, finite_difference };
  Eigen::VectorXd partials;  // one per unpinned coordinate
  Method method = Method::analytic;
  bool degenerate = false;   // nullity >= 2: gradient identically zero
  // largest |cofactor| under the chain rule (analytic method only);
  // gradients below cancellation noise of this scale are meaningless
  double cofactor_max = 0.0;
};

// Chain-rule gradient of det(R(p)) assembled from the cofactors of the
// pinned matrix. Requires a square pinned matrix. active_edges, when
// given, restricts the rows to that subset (used by the hyperstatic
// row-dropping search); it must leave the matrix square.
DetGradient det_gradient_analytic(const Framework& f, const PinSet& pins,
                                  const std::vector<int>* active_edges = nullptr);

// Central-difference oracle for the same gradient, step h per
// coordinate. Independent of the cofactor path.
DetGradient det_gradient_fd(const Framework& f, const PinSet& pins, double h,
                            const std::vector<int>* active_edges = nullptr);

// d[det(R(p))] . p'. Defined only for a square pinned matrix of
// nullity exactly 1; otherwise throws InapplicableError with the
// regime in the message.
double transverse_value(const Framework& f, const PinSet& pins, const Eigen::VectorXd& flex);

// Least-squares comparison of the determinant gradient g against
// s = omega^T R(p-hat'): alpha = <g,s>/<s,s>, residual = |g - alpha s|/|g|.
struct EquivalenceSummary {
  double alpha = 0.0;
  double residual = 0.0;
  bool degenerate = false;  // both vectors numerically zero
  Eigen::VectorXd gradient;
  Eigen::VectorXd stress_dot_r;
};

EquivalenceSummary equivalence_report(const Framework& f, const PinSet& pins,
                                      double tol_factor = 1.0);

enum class Verdict {
  infinitesimally_rigid,
  prestress_stable,
  transverse_rigid,
  inconclusive,
  transverse_inapplicable,
  not_applicable_hypostatic,
};

std::string to_string(Verdict v);
bool verdict_implies_rigid(Verdict v);

enum class TestStatus {
  certified,       // nonzero beyond margin
  not_certified,   // ran, below margin
  unnecessary,     // no flex: already infinitesimally rigid
  inapplicable,    // the test cannot succeed in this regime
  out_of_scope,    // regime the tool does not handle
  not_applicable,  // hypostatic input
};

std::string to_string(TestStatus s);

struct PrestressEvidence {
  TestStatus status = TestStatus::out_of_scope;
  double energy = 0.0;                  // certifying (or best) energy
  double threshold = 0.0;               // margin * |omega| |p'|^2 * mean sq edge len
  Eigen::VectorXd stress;               // sign-fixed kernel stress used
  Eigen::VectorXd flex;                 // pinned-coordinate flex used
  std::vector<double> basis_energies;   // per stress-basis element (hyperstatic)
  std::string note;
};

struct RowDropResult {
  int edge_index = -1;
  TestStatus status = TestStatus::inapplicable;  // certified / not_certified / inapplicable
  double value = 0.0;
  double threshold = 0.0;
  Eigen::VectorXd stress;  // left kernel of the square matrix, zero on the dropped edge
};

struct TransverseEvidence {
  TestStatus status = TestStatus::out_of_scope;
  double value = 0.0;
  double threshold = 0.0;
  DetGradient gradient;                    // isostatic case
  std::vector<RowDropResult> row_results;  // hyperstatic search
  std::string note;
};

struct CertificateReport {
  std::string framework_name;
  DofProfile dof;
  std::vector<int> pinned_coords;  // 0-based column indices
  bool pins_explicit = false;
  int rank = 0;
  int flex_count = 0;
  int stress_count = 0;
  double kernel_tol = 0.0;
  bool marginal = false;
  Verdict verdict = Verdict::inconclusive;
  PrestressEvidence prestress;
  TransverseEvidence transverse;
  std::optional<EquivalenceSummary> equivalence;
  std::optional<bool> tests_agree;  // set when both certificates ran
  std::vector<std::string> warnings;
  CertifyOptions options;
};

PrestressEvidence prestress_test(const Framework& f, const CertifyOptions& opts = {},
                                 const std::optional<PinSet>& pins = std::nullopt);

TransverseEvidence transverse_test(const Framework& f, const CertifyOptions& opts = {},
                                   const std::optional<PinSet>& pins = std::nullopt);

CertificateReport full_certification(const Framework& f, const CertifyOptions& opts = {},
                                     const std::optional<PinSet>& pins = std::nullopt);

// Mean squared edge length, the configuration factor in the prestress
// margin scale.
double mean_squared_edge_length(const Framework& f);

}  // namespace rigicert
