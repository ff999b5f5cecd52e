#include "sesstk/semantics.hpp"

#include <deque>
#include <map>
#include <set>

#include "sesstk/usage.hpp"

namespace sesstk {

std::string ReductionLabel::render() const {
  switch (kind) {
    case Kind::Com: return "Com(" + data + ")";
    case Kind::Case: return "Case(" + data + ")";
    case Kind::Choice: return "Choice(" + data + ")";
    case Kind::Fwd: return "Fwd";
  }
  return "?";
}

std::vector<const StateGraph::Edge*> StateGraph::out_edges(std::size_t state) const {
  std::vector<const Edge*> out;
  for (const auto& e : edges)
    if (e.from == state) out.push_back(&e);
  return out;
}

namespace {

using K = Process::Kind;

class Stepper {
 public:
  Stepper(const Process& p, Dialect d) : dialect_(d), soup_(flatten(normal_form(p))) {
    for (std::size_t i = 0; i < soup_.restrictions.size(); ++i) {
      const Restriction& r = soup_.restrictions[i];
      owner_[r.x] = i;
      if (r.pair) owner_[r.y] = i;
    }
    avoid_ = all_names(assemble(soup_));
  }

  std::vector<Reduct> run() {
    const auto& cs = soup_.components;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (i != j) try_pair(i, j);
      if (cs[i].kind == K::Fwd) try_fwd(i);
      if (cs[i].kind == K::Case) try_case(i);
    }
    return std::move(out_);
  }

 private:
  const Restriction* restriction_of(const Name& n) const {
    auto it = owner_.find(n);
    return it == owner_.end() ? nullptr : &soup_.restrictions[it->second];
  }

  void emit(ReductionLabel label, Soup next) {
    Process target = normal_form(assemble(next));
    std::string key = label.render() + "\n" + render(target);
    if (seen_.insert(key).second) out_.push_back(Reduct{std::move(label), std::move(target)});
  }

  Soup replace(std::size_t i, Process pi, std::size_t j, Process pj) const {
    Soup next = soup_;
    next.components[i] = std::move(pi);
    next.components[j] = std::move(pj);
    return next;
  }

  /// Steps the annotation of the restriction owning `subject`.
  void advance(Soup& next, const Name& subject, const std::string* label) const {
    auto it = owner_.find(subject);
    if (it == owner_.end()) return;
    Restriction& r = next.restrictions[it->second];
    if (r.st) {
      const SessionType& t = *r.st;
      if (label) {
        if (const SessionType* s = t.alt(*label)) r.st = SessionType(*s);
      } else if (t.kind == SessionType::Kind::In || t.kind == SessionType::Kind::Out) {
        r.st = SessionType(t.cont());
      }
    }
    if (r.ut && r.ut->kind == UsageType::Kind::Chan) {
      std::vector<Usage> succ = usage_step(r.ut->usage);
      if (!succ.empty()) r.ut->usage = succ.front();
    }
  }

  bool partners(const Name& a, const Name& b) const {
    if (dialect_ != Dialect::Session) return a == b;
    const Restriction* r = restriction_of(a);
    return r && r->pair && ((r->x == a && r->y == b) || (r->y == a && r->x == b));
  }

  void try_pair(std::size_t i, std::size_t j) {
    const Process& a = soup_.components[i];
    const Process& b = soup_.components[j];
    if (!partners(a.subject, b.subject)) return;
    std::string com = a.subject;
    if (dialect_ == Dialect::Session) {
      const Restriction* r = restriction_of(a.subject);
      com = r->x + "," + r->y;
    }
    if (a.kind == K::Out && b.kind == K::In) {
      if (a.values.size() != b.binders.size()) return;
      Process left = a.cont();
      Substitution sub;
      Soup next;
      if (a.bound) {
        Name w = fresh_name("%w", avoid_);
        left = rename(left, a.values[0].name, w);
        sub[b.binders[0]] = Value::chan(w);
        next = replace(i, std::move(left), j, substitute(b.cont(), sub));
        next.restrictions.push_back(Restriction{false, w, "", std::nullopt, std::nullopt});
      } else {
        for (std::size_t k = 0; k < a.values.size(); ++k) sub[b.binders[k]] = a.values[k];
        next = replace(i, std::move(left), j, substitute(b.cont(), sub));
      }
      advance(next, a.subject, nullptr);
      emit(ReductionLabel{ReductionLabel::Kind::Com, com}, std::move(next));
      return;
    }
    if (a.kind == K::Sel && b.kind == K::Branch) {
      const std::string& l = a.labels[0];
      const Process* chosen = b.alt(l);
      if (!chosen) return;
      bool choice = b.labels == std::vector<std::string>{"inl", "inr"} && a.cont().is_inact() &&
                    restriction_of(a.subject) != nullptr;
      Soup next = replace(i, a.cont(), j, *chosen);
      advance(next, a.subject, &l);
      if (choice) {
        emit(ReductionLabel{ReductionLabel::Kind::Choice, l == "inl" ? "INL" : "INR"}, std::move(next));
      } else {
        emit(ReductionLabel{ReductionLabel::Kind::Case, l}, std::move(next));
      }
    }
  }

  void try_fwd(std::size_t i) {
    if (dialect_ != Dialect::CH) return;
    const Process& f = soup_.components[i];
    if (f.subject == f.other) return;
    for (const auto& [gone, kept] : {std::pair{f.subject, f.other}, std::pair{f.other, f.subject}}) {
      const Restriction* r = restriction_of(gone);
      if (!r || r->pair) continue;
      Soup next;
      for (const auto& rr : soup_.restrictions)
        if (rr.x != gone) next.restrictions.push_back(rr);
      for (std::size_t k = 0; k < soup_.components.size(); ++k)
        if (k != i) next.components.push_back(rename(soup_.components[k], gone, kept));
      emit(ReductionLabel{ReductionLabel::Kind::Fwd, ""}, std::move(next));
    }
  }

  void try_case(std::size_t i) {
    const Process& c = soup_.components[i];
    const Value& v = c.values[0];
    if (v.is_chan()) return;
    for (std::size_t k = 0; k < c.labels.size(); ++k) {
      if (c.labels[k] != v.name) continue;
      Soup next = soup_;
      next.components[i] = substitute(c.children[k], Substitution{{c.binders[k], v.payload()}});
      emit(ReductionLabel{ReductionLabel::Kind::Case, v.name}, std::move(next));
    }
  }

  Dialect dialect_;
  Soup soup_;
  std::map<Name, std::size_t> owner_;
  NameSet avoid_;
  std::set<std::string> seen_;
  std::vector<Reduct> out_;
};

}  // namespace

std::vector<Reduct> step(const Process& p, Dialect dialect) { return Stepper(p, dialect).run(); }

StateGraph explore(const Process& p, Dialect dialect, std::size_t max_states) {
  StateGraph g;
  std::map<std::string, std::size_t> index;
  Process init = normal_form(p);
  index.emplace(render(init), 0);
  g.states.push_back(std::move(init));
  std::size_t cursor = 0;
  while (cursor < g.states.size()) {
    std::size_t cur = cursor++;
    std::vector<Reduct> rs = step(g.states[cur], dialect);
    if (rs.empty()) g.terminals.push_back(cur);
    for (auto& r : rs) {
      std::string key = render(r.target);
      auto [it, fresh] = index.emplace(key, g.states.size());
      if (fresh) {
        if (g.states.size() >= max_states) throw BudgetExceeded(g.states.size(), g.states.size() - cursor);
        g.states.push_back(std::move(r.target));
      }
      g.edges.push_back(StateGraph::Edge{cur, std::move(r.label), it->second});
    }
  }
  return g;
}

bool is_live(const Process& p) {
  for (const auto& c : flatten(p).components)
    if (c.is_prefix()) return true;
  return false;
}

Verdict deadlock_verdict(const Process& p, Dialect dialect, std::size_t max_states) {
  Verdict v;
  v.graph = explore(p, dialect, max_states);
  const StateGraph& g = v.graph;
  std::vector<const StateGraph::Edge*> parent(g.states.size(), nullptr);
  for (const auto& e : g.edges)
    if (e.to != 0 && !parent[e.to] && e.from < e.to) parent[e.to] = &e;
  for (std::size_t t : g.terminals) {
    if (!is_live(g.states[t])) continue;
    v.deadlock_free = false;
    v.stuck_state = t;
    for (std::size_t cur = t; cur != 0; cur = parent[cur]->from) v.witness.insert(v.witness.begin(), *parent[cur]);
    break;
  }
  return v;
}

namespace {

bool can_react(const Process& a, const Process& b) {
  if (a.kind == K::Out && b.kind == K::In) return true;
  if (a.kind == K::In && b.kind == K::Out) return true;
  if (a.kind == K::Sel && b.kind == K::Branch) return b.alt(a.labels[0]) != nullptr;
  if (a.kind == K::Branch && b.kind == K::Sel) return a.alt(b.labels[0]) != nullptr;
  return false;
}

bool state_well_formed(const Process& state) {
  Soup s = flatten(state);
  const auto& cs = s.components;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!cs[i].is_prefix()) continue;
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (!cs[j].is_prefix()) continue;
      if (cs[i].subject == cs[j].subject && cs[i].kind != cs[j].kind) return false;
    }
  }
  for (const auto& r : s.restrictions) {
    if (!r.pair) continue;
    for (const auto& a : cs) {
      if (!a.is_prefix() || a.subject != r.x) continue;
      for (const auto& b : cs)
        if (b.is_prefix() && b.subject == r.y && !can_react(a, b)) return false;
    }
  }
  return true;
}

}  // namespace

bool well_formed(const Process& p, std::size_t max_states) {
  StateGraph g = explore(p, Dialect::Session, max_states);
  for (const auto& s : g.states)
    if (!state_well_formed(s)) return false;
  return true;
}

std::string render_trace(const StateGraph& g) {
  std::string out;
  for (const auto& e : g.edges)
    out += "state#" + std::to_string(e.from) + " -" + e.label.render() + "-> state#" + std::to_string(e.to) + "\n";
  for (std::size_t i = 0; i < g.states.size(); ++i)
    out += "state#" + std::to_string(i) + ": " + render(g.states[i]) + "\n";
  return out;
}

std::string render_path(const StateGraph& g, const std::vector<StateGraph::Edge>& path) {
  std::string out;
  for (const auto& e : path)
    out += "state#" + std::to_string(e.from) + " -" + e.label.render() + "-> state#" + std::to_string(e.to) + "\n";
  std::set<std::size_t> shown{0};
  for (const auto& e : path) shown.insert(e.to);
  for (std::size_t i : shown) out += "state#" + std::to_string(i) + ": " + render(g.states[i]) + "\n";
  return out;
}

}  // namespace sesstk
