#include "sesstk/level_solver.hpp"

#include <algorithm>

namespace sesstk {

void LevelProblem::note(const LevelTerm& t) {
  if (t.is_var) var_count_ = std::max(var_count_, t.n + 1);
}

void LevelProblem::add(LevelTerm lhs, int weight, LevelTerm rhs, std::string why) {
  note(lhs);
  note(rhs);
  constraints_.push_back(LevelConstraint{lhs, weight, rhs, std::move(why)});
}

void LevelProblem::add_equal(LevelTerm a, LevelTerm b, const std::string& why) {
  if (a == b) return;
  add(a, 0, b, why);
  add(b, 0, a, why);
}

void LevelProblem::add_disjunction(LevelDisjunction d) {
  for (const auto& c : d.alternatives) {
    note(c.lhs);
    note(c.rhs);
  }
  if (d.alternatives.size() == 1) {
    constraints_.push_back(std::move(d.alternatives[0]));
    return;
  }
  disjunctions_.push_back(std::move(d));
}

void LevelProblem::reserve(unsigned var_count) { var_count_ = std::max(var_count_, var_count); }

namespace {

struct State {
  std::vector<long> values;
  std::vector<const LevelConstraint*> reason;
};

long value_of(const State& s, const LevelTerm& t) {
  return t.is_var ? s.values[t.n] : static_cast<long>(t.n);
}

std::string describe(const LevelConstraint& c) {
  std::string out = render(c.lhs);
  if (c.weight > 0) out += " + " + std::to_string(c.weight);
  if (c.weight < 0) out += " - " + std::to_string(-c.weight);
  out += " <= " + render(c.rhs);
  if (!c.why.empty()) out += "  (" + c.why + ")";
  return out;
}

std::vector<std::string> chain_from(const State& s, const LevelConstraint& last) {
  std::vector<std::string> chain{describe(last)};
  LevelTerm cur = last.lhs;
  std::vector<bool> visited(s.values.size(), false);
  while (cur.is_var && s.reason[cur.n] && !visited[cur.n]) {
    visited[cur.n] = true;
    const LevelConstraint* c = s.reason[cur.n];
    chain.insert(chain.begin(), describe(*c));
    cur = c->lhs;
  }
  return chain;
}

/// Raises levels until every constraint holds; nullopt on success.
std::optional<std::vector<std::string>> relax(State& s, const std::vector<const LevelConstraint*>& cs,
                                              unsigned l_max) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const LevelConstraint* c : cs) {
      long need = value_of(s, c->lhs) + c->weight;
      if (value_of(s, c->rhs) >= need) continue;
      if (!c->rhs.is_var) return chain_from(s, *c);
      if (need > static_cast<long>(l_max)) {
        std::vector<std::string> chain = chain_from(s, *c);
        chain.push_back(render(c->rhs) + " would exceed the level bound " + std::to_string(l_max));
        return chain;
      }
      s.values[c->rhs.n] = need;
      s.reason[c->rhs.n] = c;
      changed = true;
    }
  }
  return std::nullopt;
}

bool holds(const State& s, const LevelConstraint& c) {
  return value_of(s, c.lhs) + c.weight <= value_of(s, c.rhs);
}

struct Search {
  const LevelProblem& problem;
  unsigned l_max;
  std::vector<std::string> first_failure;

  std::optional<State> run(State s, std::vector<const LevelConstraint*> active, std::size_t next) {
    if (auto fail = relax(s, active, l_max)) {
      if (first_failure.empty()) first_failure = *fail;
      return std::nullopt;
    }
    if (next == problem.disjunctions().size()) return s;
    const LevelDisjunction& d = problem.disjunctions()[next];
    std::vector<const LevelConstraint*> order;
    for (const auto& alt : d.alternatives)
      if (holds(s, alt)) order.push_back(&alt);
    for (const auto& alt : d.alternatives)
      if (!holds(s, alt)) order.push_back(&alt);
    for (const LevelConstraint* alt : order) {
      std::vector<const LevelConstraint*> more = active;
      more.push_back(alt);
      if (auto r = run(s, std::move(more), next + 1)) return r;
    }
    return std::nullopt;
  }
};

}  // namespace

LevelSolution solve_levels(const LevelProblem& problem, unsigned l_max) {
  State s;
  s.values.assign(problem.var_count(), 0);
  s.reason.assign(problem.var_count(), nullptr);
  std::vector<const LevelConstraint*> active;
  for (const auto& c : problem.constraints()) active.push_back(&c);
  Search search{problem, l_max, {}};
  LevelSolution out;
  if (auto r = search.run(std::move(s), std::move(active), 0)) {
    out.satisfiable = true;
    for (long v : r->values) out.values.push_back(static_cast<unsigned>(v));
  } else {
    out.failing_chain = std::move(search.first_failure);
  }
  return out;
}

}  // namespace sesstk
