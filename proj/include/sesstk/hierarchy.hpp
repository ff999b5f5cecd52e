#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sesstk/check_ch.hpp"
#include "sesstk/check_kb.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/syntax.hpp"

namespace sesstk {

enum class Tri : std::uint8_t { False, True, Unknown };
const char* to_string(Tri t);

struct ClassifyOptions {
  KBOptions kb;
  std::size_t max_states = kDefaultMaxStates;
};

struct Classification {
  bool st_ok = false;
  std::optional<TypeError> st_error;
  /// Least sharing degree of the encoding; empty when not typable at any n.
  std::optional<std::size_t> min_degree;
  std::optional<TypeError> kb_error;
  bool in_l = false;
  std::optional<TypeError> ch_error;
  Verdict verdict;
  /// min_degree <= 1 agrees with in_l.
  bool cross_check = true;
  KBDerivation kb_audit;
  CHDerivation ch_audit;
};

Classification classify(const STContext& g, const Process& p, const ClassifyOptions& opts = {});

struct Witness {
  STContext context;
  Process process;
};

/// P ends the left chain with an output, Q with an input; Auto picks P for
/// even n and Q for odd n.
enum class WitnessFamily : std::uint8_t { Auto, P, Q };

/// Family member of size n: the two-sided chain sharing n sessions.
/// Throws std::invalid_argument for n = 0.
Witness witness(std::size_t n, WitnessFamily family = WitnessFamily::Auto);

/// P ≐ P': a common context whose holes hold co-typable subterms. Works on
/// SESSION terms (session inference) and on CH terms (C-type inference).
Tri doteq(const Process& p, const Process& q, const STContext& g);

struct OpEntry {
  std::string source;  // rendered source edge or image state
  Tri status = Tri::Unknown;
  std::string detail;
};

struct OpReport {
  std::vector<OpEntry> item1;
  std::vector<OpEntry> item2;
  Tri item1_status = Tri::True;
  Tri item2_status = Tri::True;
};

/// Bounded check of the two operational-correspondence items between p and
/// its rewrite image. `budget` caps each explored state space.
OpReport check_op_correspondence(const STContext& g, const Process& p, std::size_t budget = 10000,
                                 const std::string& inx = "inl");

}  // namespace sesstk
