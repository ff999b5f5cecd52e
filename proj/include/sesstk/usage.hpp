#pragma once

#include <vector>

#include "sesstk/types.hpp"

namespace sesstk {

/// One-step usage reductions: an input and an output in distinct parallel
/// components react, leaving their continuations in place. Results are
/// canonical (see canonical_usage) and duplicate-free.
std::vector<Usage> usage_step(const Usage& u);

/// Obligation and capability levels; OMEGA for empty or other-polarity heads.
/// Throws std::invalid_argument on level variables.
Level ob(Polarity a, const Usage& u);
Level cap(Polarity a, const Usage& u);

bool con(const Usage& u);
/// con at every usage reachable by usage_step.
bool rel(const Usage& u);

/// Raises the obligation of every top-level action to at least t.
Usage lift(unsigned t, const Usage& u);
UsageType lift(unsigned t, const UsageType& t_);
KBContext lift(unsigned t, const KBContext& g);

/// Pointwise parallel composition. Throws TypeErrorException(PayloadMismatch)
/// when a shared name has different payload types or unequal variants.
KBContext ctx_compose(const KBContext& g1, const KBContext& g2);

/// The ';' operator: prefixes x's usage with the action and lifts every other
/// binding by k+1. `payloads` is used when x is not bound in g.
KBContext semi(const std::string& x, Polarity a, unsigned o, unsigned k, const KBContext& g,
               std::vector<UsageType> payloads = {});

/// Flattens Par, drops Empty parts and sorts the rest; a normal form up to
/// associativity, commutativity and unit.
Usage canonical_usage(const Usage& u);
/// Top-level parallel parts after flattening, Empty dropped.
std::vector<Usage> usage_parts(const Usage& u);

/// Usage with every level variable replaced by assign[id].
Usage instantiate(const Usage& u, const std::vector<unsigned>& assign);
UsageType instantiate(const UsageType& t, const std::vector<unsigned>& assign);

}  // namespace sesstk
