#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sesstk/types.hpp"

namespace sesstk {

/// lhs + weight <= rhs over natural-valued levels.
struct LevelConstraint {
  LevelTerm lhs;
  int weight = 0;
  LevelTerm rhs;
  std::string why;
};

/// At least one alternative must hold.
struct LevelDisjunction {
  std::vector<LevelConstraint> alternatives;
  std::string why;
};

class LevelProblem {
 public:
  void add(LevelTerm lhs, int weight, LevelTerm rhs, std::string why);
  void add_equal(LevelTerm a, LevelTerm b, const std::string& why);
  void add_disjunction(LevelDisjunction d);
  /// Every variable id that may appear is below this bound.
  void reserve(unsigned var_count);

  const std::vector<LevelConstraint>& constraints() const { return constraints_; }
  const std::vector<LevelDisjunction>& disjunctions() const { return disjunctions_; }
  unsigned var_count() const { return var_count_; }

 private:
  void note(const LevelTerm& t);

  std::vector<LevelConstraint> constraints_;
  std::vector<LevelDisjunction> disjunctions_;
  unsigned var_count_ = 0;
};

struct LevelSolution {
  bool satisfiable = false;
  /// Least assignment, indexed by variable id.
  std::vector<unsigned> values;
  /// On failure: the constraints along the chain that forced a level too high.
  std::vector<std::string> failing_chain;
};

/// Least solution with every level at most l_max, found by relaxation and
/// backtracking over disjunctions in order.
LevelSolution solve_levels(const LevelProblem& problem, unsigned l_max);

}  // namespace sesstk
