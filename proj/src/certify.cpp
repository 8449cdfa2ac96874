#include "rigicert/certify.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace rigicert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::MatrixXd rigidity_entries(const Framework& f, const Eigen::MatrixXd& points) {
  const int d = f.config.dim;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(f.graph.edge_count(), f.graph.n * d);
  for (int e = 0; e < f.graph.edge_count(); ++e) {
    const auto [i, j] = f.graph.edges[e];
    for (int k = 0; k < d; ++k) {
      const double diff = points(i, k) - points(j, k);
      r(e, i * d + k) = diff;
      r(e, j * d + k) = -diff;
    }
  }
  return r;
}

Eigen::MatrixXd pinned_entries(const Framework& f, const PinSet& pins,
                               const Eigen::MatrixXd& points, const std::vector<int>* active) {
  const Eigen::MatrixXd full = rigidity_entries(f, points);
  const int cols = pins.pinned_size();
  const int rows = active ? static_cast<int>(active->size()) : f.graph.edge_count();
  Eigen::MatrixXd out(rows, cols);
  int c = 0;
  for (int col = 0; col < pins.total_coords; ++col) {
    if (pins.contains(col)) continue;
    for (int r = 0; r < rows; ++r) out(r, c) = full(active ? (*active)[r] : r, col);
    ++c;
  }
  return out;
}

// Square pinned matrix or the regime error the caller reports.
void require_square(int rows, int cols) {
  if (rows != cols)
    throw InapplicableError("pinned matrix is " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", not square (hyperstatic/hypostatic)");
}

std::vector<int> unpinned_positions(const PinSet& pins) {
  std::vector<int> pos(pins.total_coords, -1);
  int c = 0;
  for (int col = 0; col < pins.total_coords; ++col)
    if (!pins.contains(col)) pos[col] = c++;
  return pos;
}

double sign_of(double x) { return std::copysign(1.0, x); }

// Gradient entries are alternating sums of cofactors; below this level
// the assembled gradient cannot be told apart from cancellation noise,
// so a transverse value there must not certify. A structurally singular
// matrix (identically zero determinant) lands here with cofactors that
// cancel exactly.
double gradient_noise_floor(int n, double cofactor_max) {
  return 64.0 * n * kEps * cofactor_max;
}

}  // namespace

double mean_squared_edge_length(const Framework& f) {
  if (f.graph.edges.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [i, j] : f.graph.edges)
    total += (f.config.points.row(i) - f.config.points.row(j)).squaredNorm();
  return total / static_cast<double>(f.graph.edge_count());
}

double stress_energy(const Graph& g, const Eigen::VectorXd& omega, const FullFlex& v) {
  if (omega.size() != g.edge_count())
    throw InvalidFrameworkError("stress length " + std::to_string(omega.size()) +
                                " does not match edge count " + std::to_string(g.edge_count()));
  if (v.values.size() % g.n != 0)
    throw InvalidFrameworkError("flex length does not divide by vertex count");
  const int d = static_cast<int>(v.values.size()) / g.n;
  double energy = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [i, j] = g.edges[e];
    energy += omega(e) * (v.values.segment(i * d, d) - v.values.segment(j * d, d)).squaredNorm();
  }
  return energy;
}

double stress_energy_bilinear(const Framework& f, const PinSet& pins,
                              const Eigen::VectorXd& omega, const Eigen::VectorXd& flex) {
  if (omega.size() != f.graph.edge_count())
    throw InvalidFrameworkError("stress length does not match edge count");
  const FullFlex full = zero_pad(flex, pins);
  const PinnedMatrix r_of_flex = rigidity_matrix_of_flex(f, full, pins);
  return omega.dot(r_of_flex.entries * flex);
}

CofactorData cofactor_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidFrameworkError("cofactor_matrix: non-square input");
  if (!m.allFinite()) throw InvalidFrameworkError("cofactor_matrix: non-finite entries");
  const int n = static_cast<int>(m.rows());
  CofactorData out;
  if (n == 0) {
    out.cof.resize(0, 0);
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = n * kEps * sv(0);
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (sv(i) > tol) ++rank;
  out.nullity = n - rank;

  // prod_{k != i} sigma_k via prefix/suffix products; no division, so
  // zero singular values are harmless.
  Eigen::VectorXd prefix(n + 1), suffix(n + 1);
  prefix(0) = 1.0;
  for (int i = 0; i < n; ++i) prefix(i + 1) = prefix(i) * sv(i);
  suffix(n) = 1.0;
  for (int i = n - 1; i >= 0; --i) suffix(i) = suffix(i + 1) * sv(i);
  Eigen::VectorXd skip(n);
  for (int i = 0; i < n; ++i) skip(i) = prefix(i) * suffix(i + 1);

  const double orient =
      sign_of(svd.matrixU().determinant()) * sign_of(svd.matrixV().determinant());
  out.cof = orient * svd.matrixU() * skip.asDiagonal() * svd.matrixV().transpose();

  // |cofactor| <= prod of the largest n-1 singular values, so with two
  // singular values under tol the whole matrix sits below this bound.
  out.zero_threshold = n >= 2 ? tol * prefix(n - 2) : tol;

  if (out.nullity == 1) {
    out.rank1_left = sign_fix(svd.matrixU().col(n - 1));
    out.rank1_right = sign_fix(svd.matrixV().col(n - 1));
    out.scale = out.rank1_left.dot(out.cof * out.rank1_right);
    const double norm = out.cof.norm();
    out.rank1_residual =
        norm > 0.0
            ? (out.cof - out.scale * out.rank1_left * out.rank1_right.transpose()).norm() / norm
            : 0.0;
  }
  return out;
}

DetGradient det_gradient_analytic(const Framework& f, const PinSet& pins,
                                  const std::vector<int>* active_edges) {
  require_valid(f);
  const int d = f.config.dim;
  const int rows = active_edges ? static_cast<int>(active_edges->size()) : f.graph.edge_count();
  require_square(rows, pins.pinned_size());

  const Eigen::MatrixXd pinned = pinned_entries(f, pins, f.config.points, active_edges);
  const CofactorData cd = cofactor_matrix(pinned);
  const std::vector<int> pos = unpinned_positions(pins);

  DetGradient g;
  g.method = DetGradient::Method::analytic;
  g.degenerate = cd.nullity >= 2;
  g.cofactor_max = cd.cof.size() ? cd.cof.cwiseAbs().maxCoeff() : 0.0;
  g.partials = Eigen::VectorXd::Zero(pins.pinned_size());
  for (int r = 0; r < rows; ++r) {
    const Edge e = f.graph.edges[active_edges ? (*active_edges)[r] : r];
    for (int k = 0; k < d; ++k) {
      const int pu = pos[e.i * d + k];
      const int pv = pos[e.j * d + k];
      if (pu >= 0) g.partials(pu) += cd.cof(r, pu) - (pv >= 0 ? cd.cof(r, pv) : 0.0);
      if (pv >= 0) g.partials(pv) += cd.cof(r, pv) - (pu >= 0 ? cd.cof(r, pu) : 0.0);
    }
  }
  return g;
}

DetGradient det_gradient_fd(const Framework& f, const PinSet& pins, double h,
                            const std::vector<int>* active_edges) {
  require_valid(f);
  if (!(h > 0.0)) throw InvalidFrameworkError("finite-difference step must be positive");
  const int d = f.config.dim;
  const int rows = active_edges ? static_cast<int>(active_edges->size()) : f.graph.edge_count();
  require_square(rows, pins.pinned_size());

  DetGradient g;
  g.method = DetGradient::Method::finite_difference;
  g.partials = Eigen::VectorXd::Zero(pins.pinned_size());
  int c = 0;
  for (int col = 0; col < pins.total_coords; ++col) {
    if (pins.contains(col)) continue;
    Eigen::MatrixXd pts = f.config.points;
    pts(col / d, col % d) += h;
    const double fp = pinned_entries(f, pins, pts, active_edges).determinant();
    pts(col / d, col % d) -= 2.0 * h;
    const double fm = pinned_entries(f, pins, pts, active_edges).determinant();
    g.partials(c++) = (fp - fm) / (2.0 * h);
  }
  return g;
}

double transverse_value(const Framework& f, const PinSet& pins, const Eigen::VectorXd& flex) {
  require_valid(f);
  require_square(f.graph.edge_count(), pins.pinned_size());
  if (flex.size() != pins.pinned_size())
    throw InvalidFrameworkError("flex length does not match pinned size");
  const KernelData k = kernel_data(pinned_entries(f, pins, f.config.points, nullptr));
  if (k.flex_count() != 1)
    throw InapplicableError(k.flex_count() == 0
                                ? "nonsingular: no flex to test"
                                : "nullity " + std::to_string(k.flex_count()) +
                                      ": determinant gradient identically zero");
  return det_gradient_analytic(f, pins).partials.dot(flex);
}

EquivalenceSummary equivalence_report(const Framework& f, const PinSet& pins,
                                      double tol_factor) {
  require_valid(f);
  require_square(f.graph.edge_count(), pins.pinned_size());
  const Eigen::MatrixXd pinned = pinned_entries(f, pins, f.config.points, nullptr);
  const KernelData k = kernel_data(pinned, tol_factor);
  if (k.flex_count() != 1)
    throw InapplicableError(k.flex_count() == 0
                                ? "nonsingular: no stress/flex to compare"
                                : "nullity " + std::to_string(k.flex_count()) +
                                      ": determinant gradient identically zero");

  const Eigen::VectorXd omega = k.stress_basis.col(0);
  const Eigen::VectorXd flex = k.flex_basis.col(0);
  const FullFlex full = zero_pad(flex, pins);

  EquivalenceSummary s;
  s.gradient = det_gradient_analytic(f, pins).partials;
  s.stress_dot_r = rigidity_matrix_of_flex(f, full, pins).entries.transpose() * omega;

  const int n = pins.pinned_size();
  const CofactorData cd = cofactor_matrix(pinned);
  const double tiny_g = 10.0 * n * cd.zero_threshold;
  const double tiny_s = 20.0 * n * kEps;
  if (s.gradient.norm() <= tiny_g && s.stress_dot_r.norm() <= tiny_s) {
    s.degenerate = true;  // both sides vanish: vacuously proportional
    return s;
  }
  const double denom = s.stress_dot_r.squaredNorm();
  s.alpha = denom > 0.0 ? s.gradient.dot(s.stress_dot_r) / denom : 0.0;
  const double gnorm = s.gradient.norm();
  s.residual = gnorm > 0.0 ? (s.gradient - s.alpha * s.stress_dot_r).norm() / gnorm : 1.0;
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::infinitesimally_rigid:
      return "infinitesimally_rigid";
    case Verdict::prestress_stable:
      return "prestress_stable";
    case Verdict::transverse_rigid:
      return "transverse_rigid";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::transverse_inapplicable:
      return "transverse_inapplicable";
    case Verdict::not_applicable_hypostatic:
      return "not_applicable_hypostatic";
  }
  return "?";
}

bool verdict_implies_rigid(Verdict v) {
  return v == Verdict::infinitesimally_rigid || v == Verdict::prestress_stable ||
         v == Verdict::transverse_rigid;
}

std::string to_string(TestStatus s) {
  switch (s) {
    case TestStatus::certified:
      return "certified";
    case TestStatus::not_certified:
      return "not_certified";
    case TestStatus::unnecessary:
      return "unnecessary";
    case TestStatus::inapplicable:
      return "inapplicable";
    case TestStatus::out_of_scope:
      return "out_of_scope";
    case TestStatus::not_applicable:
      return "not_applicable";
  }
  return "?";
}

namespace {

PinSet resolve_pins(const Framework& f, const std::optional<PinSet>& pins) {
  return pins ? *pins : select_pin_set(f);
}

}  // namespace

PrestressEvidence prestress_test(const Framework& f, const CertifyOptions& opts,
                                 const std::optional<PinSet>& pins_in) {
  require_valid(f);
  PrestressEvidence ev;
  if (dof_profile(f).dof_class == DofClass::hypostatic) {
    ev.status = TestStatus::not_applicable;
    ev.note = "hypostatic: no rigidity conclusion is attempted";
    return ev;
  }
  const PinSet pins = resolve_pins(f, pins_in);
  const KernelData k = kernel_data(pinned_entries(f, pins, f.config.points, nullptr), opts.tol_factor);
  if (k.flex_count() == 0) {
    ev.status = TestStatus::unnecessary;
    ev.note = "infinitesimally rigid; test unnecessary";
    return ev;
  }
  if (k.flex_count() >= 2) {
    ev.status = TestStatus::out_of_scope;
    ev.note = std::to_string(k.flex_count()) +
              " flexes: sign-definiteness over a flex space is not implemented";
    return ev;
  }

  const Eigen::VectorXd flex = k.flex_basis.col(0);
  const FullFlex full = zero_pad(flex, pins);
  ev.flex = flex;
  ev.threshold = opts.margin * flex.squaredNorm() * mean_squared_edge_length(f);

  // Energy is linear in the stress for a fixed flex, so scanning an
  // orthonormal basis decides whether a certifying stress exists.
  int best = 0;
  for (int b = 0; b < k.stress_count(); ++b) {
    const double e = stress_energy(f.graph, k.stress_basis.col(b), full);
    ev.basis_energies.push_back(e);
    if (std::abs(e) > std::abs(ev.basis_energies[best])) best = b;
  }
  ev.energy = ev.basis_energies[best];
  ev.stress = k.stress_basis.col(best);
  ev.status =
      std::abs(ev.energy) > ev.threshold ? TestStatus::certified : TestStatus::not_certified;
  if (k.stress_count() > 1)
    ev.note = "hyperstatic basis search over " + std::to_string(k.stress_count()) + " stresses";
  return ev;
}

TransverseEvidence transverse_test(const Framework& f, const CertifyOptions& opts,
                                   const std::optional<PinSet>& pins_in) {
  require_valid(f);
  TransverseEvidence ev;
  const DofProfile dof = dof_profile(f);
  if (dof.dof_class == DofClass::hypostatic) {
    ev.status = TestStatus::not_applicable;
    ev.note = "hypostatic: the framework is always infinitesimally flexible";
    return ev;
  }
  const PinSet pins = resolve_pins(f, pins_in);
  const KernelData k = kernel_data(pinned_entries(f, pins, f.config.points, nullptr), opts.tol_factor);
  if (k.flex_count() == 0) {
    ev.status = TestStatus::unnecessary;
    ev.note = "infinitesimally rigid; test unnecessary";
    return ev;
  }

  if (dof.dof_class == DofClass::isostatic) {
    ev.gradient = det_gradient_analytic(f, pins);
    if (k.flex_count() >= 2) {
      ev.status = TestStatus::inapplicable;
      ev.note = "nullity " + std::to_string(k.flex_count()) +
                ": cofactor matrix vanishes, the test always fails";
      return ev;
    }
    const Eigen::VectorXd flex = k.flex_basis.col(0);
    ev.value = ev.gradient.partials.dot(flex);
    ev.threshold =
        std::max(opts.margin * ev.gradient.partials.norm(),
                 gradient_noise_floor(pins.pinned_size(), ev.gradient.cofactor_max)) *
        flex.norm();
    ev.status =
        std::abs(ev.value) > ev.threshold ? TestStatus::certified : TestStatus::not_certified;
    return ev;
  }

  // hyperstatic
  if (dof.surplus != 1) {
    ev.status = TestStatus::out_of_scope;
    ev.note = "hyperstatic(" + std::to_string(dof.surplus) + "): only one-row drops are covered";
    return ev;
  }
  int informative = 0;
  for (int e = 0; e < f.graph.edge_count(); ++e) {
    std::vector<int> active;
    active.reserve(f.graph.edge_count() - 1);
    for (int r = 0; r < f.graph.edge_count(); ++r)
      if (r != e) active.push_back(r);

    RowDropResult rd;
    rd.edge_index = e;
    const KernelData sub =
        kernel_data(pinned_entries(f, pins, f.config.points, &active), opts.tol_factor);
    if (sub.flex_count() != 1) {
      rd.status = TestStatus::inapplicable;  // row uninformative
      ev.row_results.push_back(std::move(rd));
      continue;
    }
    ++informative;
    const Eigen::VectorXd flex = sub.flex_basis.col(0);
    const DetGradient g = det_gradient_analytic(f, pins, &active);
    rd.value = g.partials.dot(flex);
    rd.threshold = std::max(opts.margin * g.partials.norm(),
                            gradient_noise_floor(pins.pinned_size(), g.cofactor_max)) *
                   flex.norm();
    rd.status =
        std::abs(rd.value) > rd.threshold ? TestStatus::certified : TestStatus::not_certified;
    // the left kernel of the square matrix, zero-padded at the dropped
    // row, is a stress of the full framework vanishing on that edge
    rd.stress = Eigen::VectorXd::Zero(f.graph.edge_count());
    for (int r = 0; r < static_cast<int>(active.size()); ++r)
      rd.stress(active[r]) = sub.stress_basis(r, 0);
    rd.stress = sign_fix(rd.stress);
    ev.row_results.push_back(std::move(rd));
  }

  const RowDropResult* best = nullptr;
  for (const auto& rd : ev.row_results)
    if (rd.status == TestStatus::certified &&
        (!best || std::abs(rd.value) > std::abs(best->value)))
      best = &rd;
  if (best) {
    ev.status = TestStatus::certified;
    ev.value = best->value;
    ev.threshold = best->threshold;
    ev.note = "row-dropping search, " + std::to_string(informative) + " informative rows";
  } else if (informative == 0) {
    ev.status = TestStatus::inapplicable;
    ev.note = "every dropped-row matrix is degenerate (nullity >= 2)";
  } else {
    ev.status = TestStatus::not_certified;
    ev.note = "row-dropping search, " + std::to_string(informative) + " informative rows";
  }
  return ev;
}

CertificateReport full_certification(const Framework& f, const CertifyOptions& opts,
                                     const std::optional<PinSet>& pins_in) {
  require_valid(f);
  CertificateReport rep;
  rep.options = opts;
  rep.dof = dof_profile(f);

  if (rep.dof.dof_class == DofClass::hypostatic) {
    rep.verdict = Verdict::not_applicable_hypostatic;
    rep.prestress = prestress_test(f, opts, pins_in);
    rep.transverse = transverse_test(f, opts, pins_in);
    const PinSet pins = resolve_pins(f, pins_in);
    rep.pinned_coords = pins.cols;
    rep.pins_explicit = pins_in.has_value();
    const KernelData k =
        kernel_data(pinned_entries(f, pins, f.config.points, nullptr), opts.tol_factor);
    rep.rank = k.rank;
    rep.flex_count = k.flex_count();
    rep.stress_count = k.stress_count();
    rep.kernel_tol = k.tol;
    rep.marginal = k.marginal;
    return rep;
  }

  const PinSet pins = resolve_pins(f, pins_in);
  rep.pinned_coords = pins.cols;
  rep.pins_explicit = pins_in.has_value();
  const KernelData k =
      kernel_data(pinned_entries(f, pins, f.config.points, nullptr), opts.tol_factor);
  rep.rank = k.rank;
  rep.flex_count = k.flex_count();
  rep.stress_count = k.stress_count();
  rep.kernel_tol = k.tol;
  rep.marginal = k.marginal;
  if (k.marginal)
    rep.warnings.push_back(
        "numerically marginal: a singular value lies within 10x of the rank tolerance");

  rep.prestress = prestress_test(f, opts, pins);
  rep.transverse = transverse_test(f, opts, pins);

  if (rep.dof.dof_class == DofClass::isostatic && rep.flex_count == 1)
    rep.equivalence = equivalence_report(f, pins, opts.tol_factor);

  const auto ran = [](TestStatus s) {
    return s == TestStatus::certified || s == TestStatus::not_certified;
  };
  if (ran(rep.prestress.status) && ran(rep.transverse.status)) {
    const bool agree = (rep.prestress.status == TestStatus::certified) ==
                       (rep.transverse.status == TestStatus::certified);
    rep.tests_agree = agree;
    if (!agree) {
      rep.warnings.push_back(
          "prestress and transverse tests disagree; input is likely near the margin boundary");
      assert(agree && "prestress/transverse certificates must agree");
    }
  }

  if (rep.flex_count == 0)
    rep.verdict = Verdict::infinitesimally_rigid;
  else if (rep.prestress.status == TestStatus::certified)
    rep.verdict = Verdict::prestress_stable;
  else if (rep.transverse.status == TestStatus::certified)
    rep.verdict = Verdict::transverse_rigid;
  else if (rep.transverse.status == TestStatus::inapplicable)
    rep.verdict = Verdict::transverse_inapplicable;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace rigicert
