#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sesstk/syntax.hpp"
#include "sesstk/types.hpp"

namespace sesstk {

/// Every session type of depth <= depth over the label sets {a} and {a,b}.
/// end has depth 0.
std::vector<SessionType> types_up_to_depth(std::size_t depth);

/// Types of depth <= depth whose constructors have at most one non-end child.
std::vector<SessionType> spine_types(std::size_t depth);

/// Full types of depth <= 3 together with spine types of depth <= 5.
std::vector<SessionType> type_population();

/// A random type of depth <= depth with labels drawn from {a,b}.
SessionType random_session_type(std::mt19937_64& rng, std::size_t depth);

struct GenOptions {
  std::size_t max_prefixes = 8;
  std::size_t max_type_depth = 2;
  /// Most sessions opened by one parallel split.
  std::size_t max_group = 3;
};

struct GeneratedTerm {
  STContext context;
  Process process;
};

/// A closed ST-typable term under {n:end}. Types are drawn first and the term
/// is built along a typing derivation; every restriction sits directly above
/// a parallel composition with its two endpoints on opposite sides.
GeneratedTerm random_term(std::mt19937_64& rng, const GenOptions& opts = {});

/// count terms from a fixed seed.
std::vector<GeneratedTerm> generate_terms(std::uint64_t seed, std::size_t count,
                                          const GenOptions& opts = {});

}  // namespace sesstk
