#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sesstk/level_solver.hpp"
#include "sesstk/syntax.hpp"

namespace sesstk {

struct KBDerivation {
  /// Tπ-Nil, Tπ-Par, Tπ-Res, Tπ-In, Tπ-Out, Tπ-LVal, Tπ-Case
  std::string rule;
  std::string process;
  /// Tπ-Par: names shared across the worst cut of the cheapest parallel tree.
  std::vector<Name> shared;
  std::size_t shared_count = 0;
  std::vector<KBDerivation> children;

  std::string dump(int indent = 0) const;
};

struct KBOptions {
  /// Level bound; 0 selects max(1, prefix_count(p)).
  unsigned l_max = 0;
  /// Count a shared name only when both sides give it the same usage shape.
  bool count_assignments = false;
  /// Mutation switch: with false every parallel composition counts as 0.
  bool measure_sharing = true;
};

struct KBResult {
  std::optional<TypeError> error;
  KBDerivation derivation;
  /// Largest shared count over all parallel clusters.
  std::size_t degree = 0;
  /// Least level assignment, indexed by level variable.
  std::vector<unsigned> levels;
  /// The input context with levels instantiated.
  KBContext context;
  /// Constraint chain behind a ReliabilityFailure.
  std::vector<std::string> failing_chain;

  bool ok() const { return !error; }
};

/// Γ ⊢ⁿ P for PI processes, checked modulo structural congruence. Usages may
/// carry level variables; the least satisfying levels are reported. Every
/// restriction must be annotated.
KBResult check_kb(const KBContext& g, const Process& p, std::size_t n, const KBOptions& opts = {});

struct LevelInference {
  bool satisfiable = false;
  std::vector<unsigned> assignment;
  std::vector<std::string> failing_chain;
  /// Structural typing failure, if the skeleton itself is ill-typed.
  std::optional<TypeError> error;
};

LevelInference infer_levels(const KBContext& g, const Process& p, std::size_t n, unsigned l_max);

struct DegreeResult {
  /// Least n with Γ ⊢ⁿ P; empty when not typable at any n.
  std::optional<std::size_t> degree;
  std::optional<TypeError> error;
  KBResult detail;
};

DegreeResult degree(const KBContext& g, const Process& p, const KBOptions& opts = {});

/// Level constraints under which rel(usage) holds: con at every usage
/// reachable by usage reduction. Unpartnered actions add an unsatisfiable
/// constraint.
void reliability_constraints(const Usage& usage, const Name& x, LevelProblem& problem);

/// Largest level variable id in a type or context, plus one.
unsigned level_var_bound(const UsageType& t);
unsigned level_var_bound(const KBContext& g);
unsigned level_var_bound(const Process& p);

}  // namespace sesstk
