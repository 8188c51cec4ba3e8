#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symsdp/monomial.hpp"
#include "symsdp/scenario.hpp"

namespace symsdp::problems {

inline double trace_product(const Eigen::MatrixXcd& a,
                            const Eigen::MatrixXcd& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

// A built-in problem family instance: the scenario, the hierarchy level
// (candidate monomials, already closed under the symmetry group), the
// objective functional, and shipped symmetry generators on the doubled
// operator domain.
struct Problem {
  std::string name;
  Scenario scenario;
  std::vector<Monomial> level_candidates;
  ObjectiveFn objective;
  std::vector<Permutation> symmetry_generators;
  // Ambient generators for custom scenarios (wreath-product variants use
  // ambient_group(scenario) instead).
  std::optional<std::vector<Permutation>> custom_ambient;
  // Full list of admissible rank profiles (pre orbit-deduplication) for
  // problems supporting rank enumeration.
  std::function<std::vector<std::vector<int>>()> rank_profiles;
};

}  // namespace symsdp::problems
