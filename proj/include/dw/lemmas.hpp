#pragma once

// Randomized numerical checks of the traversal identities: area of the
// crossing indicator (flat and lifted), the telescoping sum of circumcenters
// and the Cauchy-Schwarz bound on difference quotients.

#include <cstdint>
#include <string>
#include <vector>

namespace dw {

struct LemmaSuite {
  std::string name;
  int trials = 0;
  int passed = 0;
  double worst = 0.0;  // largest relative error, residual or lhs/rhs ratio
  std::string metric;

  bool pass() const { return passed == trials; }
};

struct LemmaReport {
  std::uint64_t seed = 0;
  std::vector<LemmaSuite> suites;

  bool pass() const;
};

struct LemmaOptions {
  int trials = 100;
  /// Multiplies every bound before comparison. Values below one inject a
  /// violation that the checks must catch.
  double rhs_scale = 1.0;
  int mc_strata = 200;           // n x n jittered strata for indicator areas
  double mc_tolerance = 0.01;    // relative
  double telescoping_tolerance = 1e-9;
  int cs_samples_per_side = 48;
};

namespace lemmas {

LemmaReport verify_lemmas(std::uint64_t seed, const LemmaOptions& options = {});

}  // namespace lemmas
}  // namespace dw
