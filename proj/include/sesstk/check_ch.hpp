#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sesstk/syntax.hpp"

namespace sesstk {

struct CHDerivation {
  /// T-cut, T-mix, T-fwd, T-tensor, T-par, T-plus, T-with, T-bullet
  std::string rule;
  std::string process;
  CHContext context;
  std::vector<CHDerivation> children;

  std::string dump(int indent = 0) const;
};

struct CHResult {
  std::optional<TypeError> error;
  CHDerivation derivation;  // empty on failure

  bool ok() const { return !error; }
};

/// P ⊢ Δ for CH processes, checked modulo structural congruence.
///
/// Each maximal cluster of parallel components under restrictions must form a
/// forest whose edges are the restricted names of non-bullet type shared by
/// exactly two components (cut), at dual types; disconnected parts are mixed.
/// Bullet-typed names may be shared by any number of components and are
/// absorbed by 0. Outputs must be bound.
CHResult check_ch(const Process& p, const CHContext& d);

struct CHInference {
  std::optional<TypeError> error;
  /// Free names of p; unconstrained parts default to bullet.
  CHContext context;
};

CHInference infer_ch(const Process& p);

/// Some Δ types both processes.
bool ch_cotypable(const Process& a, const Process& b);

}  // namespace sesstk
