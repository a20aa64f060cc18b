// Property checks shared by the unit suites and the acceptance runner. Each
// check draws its inputs from a fixed seed and reports the worst deviation
// it saw next to the tolerance it was held to.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct Result {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tol = 0.0;
};

Result eos_round_trip(std::uint64_t seed = 101, int samples = 20000);
Result partition_of_identity(int max_order = 6);
Result differentiation_exactness(int max_order = 6);
Result riemann_consistency(std::uint64_t seed = 202, int samples = 3000);
Result riemann_antisymmetry(std::uint64_t seed = 303, int samples = 3000);
Result filter_mean_conservation(std::uint64_t seed = 404, int elements = 400);
Result filter_equivalence(std::uint64_t seed = 505, int elements = 200);
Result free_stream(std::uint64_t seed = 606);
Result divergence_analytic(int max_order = 5);
Result thread_determinism(int threads = 3);

/// Every check above with its default arguments.
std::vector<Result> all();

}  // namespace props
