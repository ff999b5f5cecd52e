#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sesstk/syntax.hpp"

namespace sesstk {

/// One rule application. `context` is the incoming context and `leftover`
/// what remains for the right siblings.
struct STDerivation {
  std::string rule;  // T-Nil, T-Par, T-Res, T-In, T-Out, T-Brch, T-Sel
  std::string process;
  STContext context;
  STContext leftover;
  std::vector<STDerivation> children;

  std::string dump(int indent = 0) const;
};

struct STResult {
  std::optional<TypeError> error;
  /// Complete on success; the derivation built so far on failure.
  STDerivation derivation;

  bool ok() const { return !error; }
};

/// Algorithmic Γ ⊢ P for session processes with annotated restrictions.
/// End-typed bindings are shared freely; every other binding is used by
/// exactly one prefix chain.
STResult check_st(const STContext& g, const Process& p);

}  // namespace sesstk
