#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "rigicert/certify.hpp"
#include "rigicert/corpus.hpp"
#include "test_util.hpp"

using namespace rigicert;

namespace {

// raw corpus stress and flex of collinear_brace: omega = (-1/2,1,1,0,0),
// flex moves vertex 3 by (0,1); values certified by the exact oracle in
// test_rigidity.cpp
Eigen::VectorXd brace_raw_stress() {
  Eigen::VectorXd w(5);
  w << -0.5, 1.0, 1.0, 0.0, 0.0;
  return w;
}

FullFlex brace_raw_flex(const PinSet& pins) {
  FullFlex v;
  v.pins = pins;
  v.values = Eigen::VectorXd::Zero(8);
  v.values(5) = 1.0;  // (3,y)
  return v;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("stress_energy vanishes on zero inputs") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  FullFlex zero;
  zero.pins = pins;
  zero.values = Eigen::VectorXd::Zero(8);
  CHECK(stress_energy(f.graph, Eigen::VectorXd::Zero(5), brace_raw_flex(pins)) == 0.0);
  CHECK(stress_energy(f.graph, brace_raw_stress(), zero) == 0.0);
}

TEST_CASE("stress_energy of the collinear brace is 2 on the raw kernel vectors") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  CHECK(stress_energy(f.graph, brace_raw_stress(), brace_raw_flex(pins)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("stress_energy is homogeneous: degree 1 in stress, 2 in flex") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  FullFlex v = brace_raw_flex(pins);
  std::mt19937_64 rng(11);
  for (int c = 0; c < 8; ++c)
    if (!pins.contains(c)) v.values(c) = uniform(rng, -1, 1);
  const Eigen::VectorXd w = brace_raw_stress();
  const double base = stress_energy(f.graph, w, v);
  FullFlex vb = v;
  vb.values *= -2.5;
  CHECK(stress_energy(f.graph, 3.0 * w, vb) ==
        doctest::Approx(3.0 * 2.5 * 2.5 * base).epsilon(1e-12));
}

TEST_CASE("bilinear form equals the edge sum on the corpus") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  const Eigen::VectorXd flex = drop_pinned(brace_raw_flex(pins));
  CHECK(stress_energy_bilinear(f, pins, brace_raw_stress(), flex) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(stress_energy_bilinear(f, pins, Eigen::VectorXd::Zero(5), flex) == 0.0);
}

TEST_CASE("bilinear and sum forms agree on random stresses and flexes") {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Framework f = random_singular_nullity1(200 + seed, {6 + static_cast<int>(seed % 5), 50});
    const PinSet pins = select_pin_set(f);
    const int m = f.graph.edge_count();
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd omega(m), flex(pins.pinned_size());
      for (int i = 0; i < m; ++i) omega(i) = uniform(rng, -1, 1);
      for (int i = 0; i < pins.pinned_size(); ++i) flex(i) = uniform(rng, -1, 1);
      const double bilinear = stress_energy_bilinear(f, pins, omega, flex);
      const double direct = stress_energy(f.graph, omega, zero_pad(flex, pins));
      const double scale = omega.norm() * flex.squaredNorm() + 1.0;
      CHECK(std::abs(bilinear - direct) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("cofactor matrix of the identity is the identity") {
  const CofactorData c = cofactor_matrix(Eigen::MatrixXd::Identity(3, 3));
  CHECK((c.cof - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(c.nullity == 0);
}

TEST_CASE("cofactor matrix of diag(0,1,1) is e1 e1^T") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(1, 1) = 1.0;
  m(2, 2) = 1.0;
  const CofactorData c = cofactor_matrix(m);
  CHECK(c.nullity == 1);
  CHECK(c.cof(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i || j) CHECK(std::abs(c.cof(i, j)) <= 1e-14);
  CHECK(std::abs(c.rank1_left(0)) == doctest::Approx(1.0));
  CHECK(std::abs(c.rank1_right(0)) == doctest::Approx(1.0));
  CHECK(c.rank1_residual <= 1e-12);
}

TEST_CASE("cofactors match exact rational minors on the pinned collinear brace") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  const Eigen::MatrixXd pinned = pin_columns(build_rigidity_matrix(f), pins).entries;
  const CofactorData c = cofactor_matrix(pinned);
  const Eigen::MatrixXd exact = oracle::to_eigen(oracle::cofactor(oracle::from_eigen(pinned)));
  CHECK((c.cof - exact).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + exact.cwiseAbs().maxCoeff()));
  CHECK(c.nullity == 1);
  CHECK(c.rank1_residual <= 1e-8);
  // rank-1 factors are the kernel directions (outer product of the
  // stress with the flex)
  const KernelData k = kernel_data(pinned);
  CHECK(oracle::direction_distance(c.rank1_left, k.stress_basis.col(0)) <= 1e-10);
  CHECK(oracle::direction_distance(c.rank1_right, k.flex_basis.col(0)) <= 1e-10);
}

TEST_CASE("transpose identity M cof^T = cof^T M = det(M) I on random matrices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -1, 1);
    const CofactorData c = cofactor_matrix(m);
    const double det = m.determinant();
    const Eigen::MatrixXd id = det * Eigen::MatrixXd::Identity(n, n);
    const double tol = 1e-12 * std::pow(m.norm() + 1.0, n);
    CHECK((m * c.cof.transpose() - id).cwiseAbs().maxCoeff() <= tol);
    CHECK((c.cof.transpose() * m - id).cwiseAbs().maxCoeff() <= tol);
  }
}

TEST_CASE("cofactors are the determinant's matrix-entry partials") {
  std::mt19937_64 rng(9);
  const int n = 4;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -1, 1);
  const CofactorData c = cofactor_matrix(m);
  const double h = 1e-6;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd mp = m, mm = m;
      mp(i, j) += h;
      mm(i, j) -= h;
      const double fd = (mp.determinant() - mm.determinant()) / (2 * h);
      CHECK(fd == doctest::Approx(c.cof(i, j)).epsilon(1e-7));
    }
}

TEST_CASE("nullity >= 2 collapses the cofactor matrix") {
  const Framework f = corpus_entry("double_collinear").framework;
  const Eigen::MatrixXd pinned =
      pin_columns(build_rigidity_matrix(f), select_pin_set(f)).entries;
  const CofactorData c = cofactor_matrix(pinned);
  CHECK(c.nullity == 2);
  CHECK(c.cof.cwiseAbs().maxCoeff() <= c.zero_threshold);
}

TEST_CASE("cofactor_matrix rejects non-square input") {
  CHECK_THROWS_AS(cofactor_matrix(Eigen::MatrixXd::Zero(2, 3)), InvalidFrameworkError);
}

TEST_CASE("analytic gradient matches finite differences on the triangle") {
  const Framework f = make_framework(2, {{0, 0}, {1, 0}, {0, 1}}, {{1, 2}, {1, 3}, {2, 3}});
  const PinSet pins = select_pin_set(f);
  const double h = 1e-6 * configuration_scale(f.config);
  const Eigen::VectorXd an = det_gradient_analytic(f, pins).partials;
  const Eigen::VectorXd fd = det_gradient_fd(f, pins, h).partials;
  CHECK((an - fd).norm() <= 1e-6 * an.norm());
}

TEST_CASE("analytic gradient of the collinear brace is (0,0,8,0,0)") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  const DetGradient g = det_gradient_analytic(f, pins);
  CHECK_FALSE(g.degenerate);
  Eigen::VectorXd expected(5);
  expected << 0, 0, 8, 0, 0;  // unpinned order (2,x),(3,x),(3,y),(4,x),(4,y)
  CHECK((g.partials - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gradient vanishes with the degenerate flag at nullity 2") {
  const Framework f = corpus_entry("double_collinear").framework;
  const PinSet pins = select_pin_set(f);
  const DetGradient g = det_gradient_analytic(f, pins);
  CHECK(g.degenerate);
  const CofactorData c =
      cofactor_matrix(pin_columns(build_rigidity_matrix(f), pins).entries);
  CHECK(g.partials.cwiseAbs().maxCoeff() <= 4 * f.graph.n * c.zero_threshold);

  const double h = 1e-6 * configuration_scale(f.config);
  const DetGradient fd = det_gradient_fd(f, pins, h);
  CHECK(fd.partials.cwiseAbs().maxCoeff() <= 1e-8);  // O(h^2) + rounding
}

TEST_CASE("gradient is proportional to the stress row form on the brace") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  const Eigen::VectorXd g = det_gradient_analytic(f, pins).partials;
  const KernelData k = kernel_data(pin_columns(build_rigidity_matrix(f), pins).entries);
  const FullFlex full = zero_pad(k.flex_basis.col(0), pins);
  const Eigen::VectorXd s =
      rigidity_matrix_of_flex(f, full, pins).entries.transpose() * k.stress_basis.col(0);
  CHECK(oracle::direction_distance(g, s) <= 1e-8);
}

TEST_CASE("analytic and fd gradients agree across random frameworks") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Framework base = random_singular_nullity1(300 + seed, {5 + static_cast<int>(seed % 6), 50});
    for (bool perturb : {false, true}) {
      const Framework f = perturb ? testutil::perturbed(base, seed, 0.05) : base;
      if (!validate_framework(f).empty()) continue;
      const PinSet pins = select_pin_set(f);
      const double h = 1e-6 * configuration_scale(f.config);
      const Eigen::VectorXd an = det_gradient_analytic(f, pins).partials;
      const Eigen::VectorXd fd = det_gradient_fd(f, pins, h).partials;
      CAPTURE(seed);
      CHECK((an - fd).norm() <= 1e-6 * std::max(an.norm(), 1e-12));
    }
  }
}

TEST_CASE("second-order convergence is observed where resolvable") {
  int resolved = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Framework f = random_singular_nullity1(400 + seed, {6, 50});
    const auto obs = testutil::observe_fd_ratio(f, select_pin_set(f));
    if (!obs.resolved) {
      // truncation-free case: central differences are exact up to rounding
      CHECK(obs.smallest_err <= 1e-10 * std::max(obs.gradient_norm, 1.0));
      continue;
    }
    ++resolved;
    CHECK(obs.ratio1 >= 3.0);
    CHECK(obs.ratio1 <= 5.0);
    CHECK(obs.ratio2 >= 3.0);
    CHECK(obs.ratio2 <= 5.0);
  }
  CHECK(resolved >= 4);
}

TEST_CASE("gradient requires a square pinned matrix") {
  const Framework f = corpus_entry("hyperstatic_brace").framework;
  const PinSet pins = select_pin_set(f);
  CHECK_THROWS_AS(det_gradient_analytic(f, pins), InapplicableError);
  CHECK_THROWS_AS(det_gradient_fd(f, pins, 1e-6), InapplicableError);
}

TEST_CASE("det_gradient_fd rejects a non-positive step") {
  const Framework f = corpus_entry("collinear_brace").framework;
  CHECK_THROWS_AS(det_gradient_fd(f, select_pin_set(f), 0.0), InvalidFrameworkError);
}

TEST_CASE("transverse_value on the brace equals alpha times the energy") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const PinSet pins = select_pin_set(f);
  const KernelData k = kernel_data(pin_columns(build_rigidity_matrix(f), pins).entries);
  const Eigen::VectorXd flex = k.flex_basis.col(0);
  const double value = transverse_value(f, pins, flex);
  CHECK(value == doctest::Approx(8.0).epsilon(1e-10));

  const EquivalenceSummary eq = equivalence_report(f, pins);
  const double energy = stress_energy(f.graph, k.stress_basis.col(0), zero_pad(flex, pins));
  CHECK(value == doctest::Approx(eq.alpha * energy).epsilon(1e-10));
  // linearity in the flex
  CHECK(transverse_value(f, pins, 2.0 * flex) == doctest::Approx(2.0 * value).epsilon(1e-12));
}

TEST_CASE("transverse_value refuses nullity != 1") {
  const Framework two = corpus_entry("double_collinear").framework;
  const PinSet pins2 = select_pin_set(two);
  CHECK_THROWS_WITH_AS(transverse_value(two, pins2, Eigen::VectorXd::Zero(7)),
                       doctest::Contains("nullity 2"), InapplicableError);
  const Framework rigid = corpus_entry("generic_triangle").framework;
  const PinSet pins3 = select_pin_set(rigid);
  CHECK_THROWS_AS(transverse_value(rigid, pins3, Eigen::VectorXd::Zero(3)), InapplicableError);
}

TEST_CASE("equivalence_report on the brace: alpha -6, negligible residual") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const EquivalenceSummary eq = equivalence_report(f, select_pin_set(f));
  CHECK_FALSE(eq.degenerate);
  CHECK(eq.alpha == doctest::Approx(-6.0).epsilon(1e-10));
  CHECK(eq.residual <= 1e-8);
}

TEST_CASE("equivalence residual passes across random singular frameworks") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Framework f = random_singular_nullity1(500 + seed, {4 + static_cast<int>(seed % 9), 50});
    CAPTURE(seed);
    const EquivalenceSummary eq = equivalence_report(f, select_pin_set(f));
    CHECK_FALSE(eq.degenerate);
    CHECK(eq.residual <= 1e-8);
  }
}

TEST_CASE("configuration rescaling moves alpha but never the pass verdict") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const EquivalenceSummary base = equivalence_report(f, select_pin_set(f));
  const Framework big = testutil::scaled(f, 2.0);
  const EquivalenceSummary scaled = equivalence_report(big, select_pin_set(big));
  // gradient scales like a^(N-1) while the stress form is scale-free
  CHECK(scaled.alpha == doctest::Approx(16.0 * base.alpha).epsilon(1e-9));
  CHECK(scaled.residual <= 1e-8);
}

TEST_CASE("equivalence_report refuses the wrong regimes") {
  const Framework rigid = corpus_entry("generic_triangle").framework;
  CHECK_THROWS_WITH_AS(equivalence_report(rigid, select_pin_set(rigid)),
                       doctest::Contains("nonsingular"), InapplicableError);
  const Framework two = corpus_entry("double_collinear").framework;
  CHECK_THROWS_WITH_AS(equivalence_report(two, select_pin_set(two)),
                       doctest::Contains("nullity 2"), InapplicableError);
  const Framework hyper = corpus_entry("hyperstatic_brace").framework;
  CHECK_THROWS_AS(equivalence_report(hyper, select_pin_set(hyper)), InapplicableError);
}

TEST_CASE("prestress_test certifies the collinear brace") {
  const PrestressEvidence ev = prestress_test(corpus_entry("collinear_brace").framework);
  CHECK(ev.status == TestStatus::certified);
  // unit kernel vectors, sign convention first-positive: energy -4/3
  CHECK(ev.energy == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
  CHECK(std::abs(ev.energy) > ev.threshold);
  CHECK(ev.basis_energies.size() == 1);
}

TEST_CASE("prestress_test on a rigid framework reports unnecessary") {
  const PrestressEvidence ev = prestress_test(corpus_entry("generic_triangle").framework);
  CHECK(ev.status == TestStatus::unnecessary);
}

TEST_CASE("prestress_test searches the stress basis of the hyperstatic brace") {
  const PrestressEvidence ev = prestress_test(corpus_entry("hyperstatic_brace").framework);
  CHECK(ev.status == TestStatus::certified);
  CHECK(ev.basis_energies.size() == 2);
  CHECK(std::abs(ev.energy) > ev.threshold);
}

TEST_CASE("prestress_test declares two flexes out of scope") {
  const PrestressEvidence ev = prestress_test(corpus_entry("double_collinear").framework);
  CHECK(ev.status == TestStatus::out_of_scope);
}

TEST_CASE("transverse_test certifies the collinear brace and matches alpha * energy") {
  const Framework f = corpus_entry("collinear_brace").framework;
  const TransverseEvidence tr = transverse_test(f);
  CHECK(tr.status == TestStatus::certified);
  CHECK(tr.value == doctest::Approx(8.0).epsilon(1e-10));

  const PrestressEvidence pre = prestress_test(f);
  const EquivalenceSummary eq = equivalence_report(f, select_pin_set(f));
  CHECK(tr.value == doctest::Approx(eq.alpha * pre.energy).epsilon(1e-8));
}

TEST_CASE("transverse_test is inapplicable at nullity 2, with zero-gradient evidence") {
  const TransverseEvidence tr = transverse_test(corpus_entry("double_collinear").framework);
  CHECK(tr.status == TestStatus::inapplicable);
  CHECK(tr.gradient.degenerate);
  CHECK(tr.gradient.partials.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("transverse_test row-dropping on the hyperstatic brace") {
  const Framework f = corpus_entry("hyperstatic_brace").framework;
  const PinSet pins = select_pin_set(f);
  const TransverseEvidence tr = transverse_test(f);
  CHECK(tr.status == TestStatus::certified);
  REQUIRE(tr.row_results.size() == 8);

  // edges (12,13,23,14,24,15,25,45): dropping 13 or 23 leaves the
  // K4 stress, which has zero energy on the flex; all other drops
  // certify (verified independently in the stress-space cross-check)
  const KernelData k = kernel_data(pin_columns(build_rigidity_matrix(f), pins).entries);
  REQUIRE(k.stress_count() == 2);
  REQUIRE(k.flex_count() == 1);
  const FullFlex flex = zero_pad(k.flex_basis.col(0), pins);

  for (const auto& rd : tr.row_results) {
    CAPTURE(rd.edge_index);
    // stress-space route: the direction in S vanishing on this edge
    const Eigen::VectorXd w1 = k.stress_basis.col(0), w2 = k.stress_basis.col(1);
    Eigen::VectorXd mu = w2(rd.edge_index) * w1 - w1(rd.edge_index) * w2;
    if (mu.norm() < 1e-12) {
      CHECK(rd.status == TestStatus::inapplicable);
      continue;
    }
    mu.normalize();
    const double mu_energy = stress_energy(f.graph, mu, flex);
    const double mu_threshold = 1e-6 * mean_squared_edge_length(f);
    const bool stress_route = std::abs(mu_energy) > mu_threshold;
    CHECK((rd.status == TestStatus::certified) == stress_route);
    if (rd.status == TestStatus::certified) {
      CHECK(std::abs(rd.stress(rd.edge_index)) <= 1e-10 * rd.stress.norm());
      // a genuine stress of the full pinned matrix
      const Eigen::MatrixXd pinned = pin_columns(build_rigidity_matrix(f), pins).entries;
      CHECK((rd.stress.transpose() * pinned).norm() <= 1e-10);
    }
  }

  const int certified_rows =
      static_cast<int>(std::count_if(tr.row_results.begin(), tr.row_results.end(),
                                     [](const RowDropResult& rd) {
                                       return rd.status == TestStatus::certified;
                                     }));
  CHECK(certified_rows == 6);  // all but the drops of edges 13 and 23
  CHECK(tr.row_results[1].status == TestStatus::not_certified);
  CHECK(tr.row_results[2].status == TestStatus::not_certified);
}

TEST_CASE("hypostatic frameworks get not_applicable from both tests") {
  const Framework f =
      make_framework(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  CHECK(prestress_test(f).status == TestStatus::not_applicable);
  CHECK(transverse_test(f).status == TestStatus::not_applicable);
}

TEST_CASE("full_certification: generic triangle is infinitesimally rigid") {
  const CertificateReport rep = full_certification(corpus_entry("generic_triangle").framework);
  CHECK(rep.verdict == Verdict::infinitesimally_rigid);
  CHECK(rep.rank == 3);
  CHECK(rep.flex_count == 0);
  CHECK_FALSE(rep.equivalence.has_value());
  CHECK_FALSE(rep.tests_agree.has_value());
}

TEST_CASE("full_certification: collinear brace certifies both ways in agreement") {
  const CertificateReport rep = full_certification(corpus_entry("collinear_brace").framework);
  CHECK(rep.verdict == Verdict::prestress_stable);
  CHECK(rep.prestress.status == TestStatus::certified);
  CHECK(rep.transverse.status == TestStatus::certified);
  REQUIRE(rep.tests_agree.has_value());
  CHECK(*rep.tests_agree);
  REQUIRE(rep.equivalence.has_value());
  CHECK(rep.equivalence->residual <= rep.options.equivalence_threshold);
}

TEST_CASE("full_certification: nullity 2 yields transverse_inapplicable") {
  const CertificateReport rep = full_certification(corpus_entry("double_collinear").framework);
  CHECK(rep.verdict == Verdict::transverse_inapplicable);
  CHECK(rep.prestress.status == TestStatus::out_of_scope);
  CHECK(rep.transverse.status == TestStatus::inapplicable);
  CHECK(rep.flex_count == 2);
  CHECK(rep.stress_count == 2);
  CHECK_FALSE(rep.tests_agree.has_value());
}

TEST_CASE("full_certification: hyperstatic brace certifies via both searches") {
  const CertificateReport rep = full_certification(corpus_entry("hyperstatic_brace").framework);
  CHECK(rep.verdict == Verdict::prestress_stable);
  CHECK(rep.transverse.status == TestStatus::certified);
  REQUIRE(rep.tests_agree.has_value());
  CHECK(*rep.tests_agree);
}

TEST_CASE("full_certification: hypostatic input is not applicable") {
  const Framework f =
      make_framework(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  const CertificateReport rep = full_certification(f);
  CHECK(rep.verdict == Verdict::not_applicable_hypostatic);
  CHECK(rep.flex_count >= 1);
}

TEST_CASE("full_certification rejects invalid input") {
  Framework f = make_framework(2, {{0, 0}, {1, 0}, {2, 0}}, {{1, 2}, {2, 3}});
  CHECK_THROWS_AS(full_certification(f), InvalidFrameworkError);
}

TEST_CASE("an absurd margin flips both tests to not_certified but keeps them agreeing") {
  CertifyOptions opts;
  opts.margin = 1e9;
  const CertificateReport rep =
      full_certification(corpus_entry("collinear_brace").framework, opts);
  CHECK(rep.prestress.status == TestStatus::not_certified);
  CHECK(rep.transverse.status == TestStatus::not_certified);
  REQUIRE(rep.tests_agree.has_value());
  CHECK(*rep.tests_agree);
  CHECK(rep.verdict == Verdict::inconclusive);
}

TEST_CASE("verdicts are invariant under moderate configuration rescaling") {
  for (const auto& entry : canonical_entries()) {
    CAPTURE(entry.name);
    const Verdict base = full_certification(entry.framework).verdict;
    for (double a : {0.25, 4.0}) {
      const CertificateReport rep = full_certification(testutil::scaled(entry.framework, a));
      CHECK(rep.verdict == base);
    }
  }
}

TEST_CASE("verdict helpers") {
  CHECK(verdict_implies_rigid(Verdict::infinitesimally_rigid));
  CHECK(verdict_implies_rigid(Verdict::prestress_stable));
  CHECK(verdict_implies_rigid(Verdict::transverse_rigid));
  CHECK_FALSE(verdict_implies_rigid(Verdict::inconclusive));
  CHECK_FALSE(verdict_implies_rigid(Verdict::transverse_inapplicable));
  CHECK_FALSE(verdict_implies_rigid(Verdict::not_applicable_hypostatic));
}
