#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigicert/certify.hpp"
#include "rigicert/framework.hpp"

// Canonical example frameworks with analytically known behavior, plus
// deterministic generators of singular configurations for property
// testing.

namespace rigicert {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExpectedProperties {
  DofClass dof_class = DofClass::isostatic;
  int surplus = 0;
  int rank = 0;
  int flex_count = 0;
  int stress_count = 0;
  Verdict verdict = Verdict::inconclusive;
  TestStatus prestress = TestStatus::out_of_scope;
  TestStatus transverse = TestStatus::out_of_scope;
  std::string stress_note;
  std::string flex_note;
};

struct CorpusEntry {
  std::string name;
  Framework framework;
  ExpectedProperties expected;
};

// The canonical entries, in stable order: generic_triangle,
// collinear_brace, double_collinear, hyperstatic_brace, tetrahedron.
// Coordinates are exact in double precision so test oracles can work
// over rationals.
const std::vector<CorpusEntry>& canonical_entries();

const CorpusEntry& corpus_entry(const std::string& name);
const CorpusEntry* find_corpus_entry(const std::string& name);

struct GeneratorParams {
  int vertex_count = 8;  // >= 4
  int max_retries = 50;
};

// Random isostatic d=2 framework with nullity exactly 1, built by
// planting one collinear degree-2 vertex inside a random generically
// isostatic framework. Deterministic per seed; throws GenerationError
// when the retry budget runs out.
Framework random_singular_nullity1(std::uint64_t seed, const GeneratorParams& params = {});

// Random instance of the double_collinear pattern: two planted
// collinear vertices, isostatic with nullity 2. Deterministic per seed.
Framework random_double_collinear(std::uint64_t seed);

// Bisection along a one-parameter family of configurations for a root
// of det(R(p(t))), using f's own pin set throughout. The bracket
// endpoints must give determinants of opposite signs (BracketError
// otherwise). Stops when |det| falls to roundoff relative to the
// bracket determinants or the interval narrows below 1e-14.
Configuration find_singular_config(const Framework& f,
                                   const std::function<Configuration(double)>& path, double t0,
                                   double t1);

}  // namespace rigicert
