#include "rigicert/corpus.hpp"

#include <cmath>
#include <random>

#include "rigicert/rigidity.hpp"

namespace rigicert {

namespace {

std::vector<CorpusEntry> build_entries() {
  std::vector<CorpusEntry> entries;

  {
    CorpusEntry e;
    e.name = "generic_triangle";
    e.framework = make_framework(2, {{0, 0}, {1, 0}, {0, 1}}, {{1, 2}, {1, 3}, {2, 3}});
    e.expected = {DofClass::isostatic, 0, 3, 0, 0, Verdict::infinitesimally_rigid,
                  TestStatus::unnecessary, TestStatus::unnecessary,
                  "", ""};
    entries.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "collinear_brace";
    e.framework = make_framework(2, {{0, 0}, {2, 0}, {1, 0}, {1, 1}},
                                 {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}});
    e.expected = {DofClass::isostatic, 0, 4, 1, 1, Verdict::prestress_stable,
                  TestStatus::certified, TestStatus::certified,
                  "proportional to (-1/2, 1, 1, 0, 0) on edges (12,13,23,14,24)",
                  "vertex 3 moves perpendicular to the line through 1, 2"};
    entries.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "double_collinear";
    e.framework = make_framework(2, {{0, 0}, {2, 0}, {1, 0}, {0, 2}, {0, 1}},
                                 {{1, 2}, {1, 4}, {2, 4}, {1, 3}, {2, 3}, {1, 5}, {4, 5}});
    e.expected = {DofClass::isostatic, 0, 5, 2, 2, Verdict::transverse_inapplicable,
                  TestStatus::out_of_scope, TestStatus::inapplicable,
                  "two-dimensional stress space",
                  "independent perpendicular motions of vertices 3 and 5"};
    entries.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "hyperstatic_brace";
    e.framework = make_framework(2, {{0, 0}, {2, 0}, {1, 0}, {1, 1}, {0.5, 2}},
                                 {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {1, 5}, {2, 5}, {4, 5}});
    e.expected = {DofClass::hyperstatic, 1, 6, 1, 2, Verdict::prestress_stable,
                  TestStatus::certified, TestStatus::certified,
                  "two-dimensional stress space",
                  "vertex 3 moves perpendicular to the line through 1, 2"};
    entries.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "tetrahedron";
    e.framework = make_framework(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                 {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    e.expected = {DofClass::isostatic, 0, 6, 0, 0, Verdict::infinitesimally_rigid,
                  TestStatus::unnecessary, TestStatus::unnecessary,
                  "", ""};
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

const std::vector<CorpusEntry>& canonical_entries() {
  static const std::vector<CorpusEntry> entries = build_entries();
  return entries;
}

const CorpusEntry* find_corpus_entry(const std::string& name) {
  for (const auto& e : canonical_entries())
    if (e.name == name) return &e;
  return nullptr;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  if (const CorpusEntry* e = find_corpus_entry(name)) return *e;
  throw std::out_of_range("no corpus entry named '" + name + "'");
}

namespace {

// 53-bit uniforms so generated frameworks are bit-identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  std::pair<int, int> distinct_pair(int n) {
    const int a = below(n);
    int b = below(n - 1);
    if (b >= a) ++b;
    return {std::min(a, b), std::max(a, b)};
  }

 private:
  std::mt19937_64 engine_;
};

bool nullity_is(const Framework& f, int want_flexes, int want_stresses) {
  if (!validate_framework(f).empty()) return false;
  const PinSet pins = select_pin_set(f);
  const RigidityMatrix r = build_rigidity_matrix(f);
  const KernelData k = kernel_data(pin_columns(r, pins).entries);
  if (k.flex_count() != want_flexes || k.stress_count() != want_stresses) return false;
  if (k.marginal) return false;
  // keep the nonzero spectrum well separated from the kernel so
  // downstream residuals stay clean
  if (k.rank > 0 && k.singular_values(k.rank - 1) < 1e-5 * k.singular_values(0)) return false;
  return true;
}

}  // namespace

Framework random_singular_nullity1(std::uint64_t seed, const GeneratorParams& params) {
  if (params.vertex_count < 4)
    throw GenerationError("vertex_count must be at least 4 to plant a collinear vertex");
  Rng rng(seed);
  const int n = params.vertex_count;
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    Framework f;
    f.config.dim = 2;
    f.config.points.resize(n, 2);
    for (int i = 0; i + 1 < n; ++i) {
      f.config.points(i, 0) = rng.uniform(-1.0, 1.0);
      f.config.points(i, 1) = rng.uniform(-1.0, 1.0);
    }
    f.graph.n = n;
    f.graph.edges = {{0, 1}, {0, 2}, {1, 2}};
    for (int v = 3; v + 1 < n; ++v) {
      const auto [a, b] = rng.distinct_pair(v);
      f.graph.edges.emplace_back(a, v);
      f.graph.edges.emplace_back(b, v);
    }
    // planted vertex: degree 2, placed on the segment between its
    // neighbors, the source of the single non-trivial flex
    const auto [a, b] = rng.distinct_pair(n - 1);
    const double u = rng.uniform(0.25, 0.75);
    f.config.points.row(n - 1) =
        f.config.points.row(a) + u * (f.config.points.row(b) - f.config.points.row(a));
    f.graph.edges.emplace_back(a, n - 1);
    f.graph.edges.emplace_back(b, n - 1);

    if (nullity_is(f, 1, 1)) return f;
  }
  throw GenerationError("retry budget exhausted for seed " + std::to_string(seed));
}

Framework random_double_collinear(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    Eigen::Matrix<double, 5, 2> p;
    for (int i : {0, 1, 3}) {
      p(i, 0) = rng.uniform(-1.0, 1.0);
      p(i, 1) = rng.uniform(-1.0, 1.0);
    }
    const double t = rng.uniform(0.25, 0.75);
    const double s = rng.uniform(0.25, 0.75);
    p.row(2) = p.row(0) + t * (p.row(1) - p.row(0));
    p.row(4) = p.row(0) + s * (p.row(3) - p.row(0));

    Framework f;
    f.config.dim = 2;
    f.config.points = p;
    f.graph.n = 5;
    f.graph.edges = {{0, 1}, {0, 3}, {1, 3}, {0, 2}, {1, 2}, {0, 4}, {3, 4}};
    if (nullity_is(f, 2, 2)) return f;
  }
  throw GenerationError("retry budget exhausted for seed " + std::to_string(seed));
}

Configuration find_singular_config(const Framework& f,
                                   const std::function<Configuration(double)>& path, double t0,
                                   double t1) {
  require_valid(f);
  const PinSet pins = select_pin_set(f);
  const auto det_at = [&](double t) {
    Framework g{f.graph, path(t)};
    return pin_columns(build_rigidity_matrix(g), pins).entries.determinant();
  };
  double d0 = det_at(t0);
  double d1 = det_at(t1);
  if (d0 == 0.0) return path(t0);
  if (d1 == 0.0) return path(t1);
  if ((d0 > 0) == (d1 > 0))
    throw BracketError("determinant has the same sign at both bracket endpoints");
  const double det_scale = std::max(std::abs(d0), std::abs(d1));
  // |det| below roundoff of the bracket determinants counts as zero
  const double det_tol = 16.0 * std::numeric_limits<double>::epsilon() * det_scale;

  double lo = t0, hi = t1;
  double mid = 0.5 * (lo + hi);
  while (std::abs(hi - lo) > 1e-14) {
    mid = 0.5 * (lo + hi);
    const double dm = det_at(mid);
    if (std::abs(dm) <= det_tol) return path(mid);
    if ((dm > 0) == (d0 > 0))
      lo = mid;
    else
      hi = mid;
  }
  return path(mid);
}

}  // namespace rigicert
