#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sesstk/syntax.hpp"

namespace sesstk {

struct ReductionLabel {
  enum class Kind : std::uint8_t { Com, Case, Choice, Fwd };

  Kind kind = Kind::Com;
  /// Com: the channel (or "x,y" endpoint pair); Case: the label; Choice: "INL"/"INR".
  std::string data;

  std::string render() const;
  friend bool operator==(const ReductionLabel&, const ReductionLabel&) = default;
};

struct Reduct {
  ReductionLabel label;
  Process target;  // normal form
};

/// All one-step reducts of p modulo structural congruence.
///
/// A select/branch reduction whose branch offers exactly {inl, inr}, whose
/// selecting side continues with 0 and whose channel is restricted is labelled
/// Choice. On annotated restrictions the annotation follows the reduction: a
/// session type steps to its continuation and a usage steps to its first
/// reduct.
std::vector<Reduct> step(const Process& p, Dialect dialect);

struct StateGraph {
  struct Edge {
    std::size_t from = 0;
    ReductionLabel label;
    std::size_t to = 0;
  };

  std::vector<Process> states;  // normal forms; states[0] is initial
  std::vector<Edge> edges;
  std::vector<std::size_t> terminals;

  std::vector<const Edge*> out_edges(std::size_t state) const;
};

constexpr std::size_t kDefaultMaxStates = 100000;

/// Breadth-first closure of step from normal_form(p). States are numbered in
/// discovery order. Throws BudgetExceeded beyond max_states.
StateGraph explore(const Process& p, Dialect dialect, std::size_t max_states = kDefaultMaxStates);

/// An unguarded communication prefix at top level of the normal form.
bool is_live(const Process& p);

struct Verdict {
  bool deadlock_free = true;
  /// Stuck only: shortest edge path from the initial state to a live terminal.
  std::vector<StateGraph::Edge> witness;
  std::size_t stuck_state = 0;
  StateGraph graph;
};

Verdict deadlock_verdict(const Process& p, Dialect dialect, std::size_t max_states = kDefaultMaxStates);

/// Session dialect. Every reachable state: prefixes on a common name agree in
/// kind, and top-level prefixes on the two ends of a restricted pair can react.
bool well_formed(const Process& p, std::size_t max_states = kDefaultMaxStates);

/// "state#i -LABEL-> state#j" lines followed by "state#i: <process>" lines.
std::string render_trace(const StateGraph& g);
std::string render_path(const StateGraph& g, const std::vector<StateGraph::Edge>& path);

}  // namespace sesstk
