#include "sesstk/check_kb.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "sesstk/usage.hpp"

namespace sesstk {

std::string KBDerivation::dump(int indent) const {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += rule + "  " + process;
  if (rule == "Tπ-Par") {
    out += "  shared=" + std::to_string(shared_count) + " {";
    for (std::size_t i = 0; i < shared.size(); ++i) out += (i ? ", " : "") + shared[i];
    out += "}";
  }
  out += "\n";
  for (const auto& c : children) out += c.dump(indent + 1);
  return out;
}

void reliability_constraints(const Usage& usage, const Name& x, LevelProblem& problem) {
  std::vector<Usage> frontier{canonical_usage(usage)};
  std::set<std::string> seen{render(frontier[0])};
  while (!frontier.empty()) {
    Usage u = frontier.back();
    frontier.pop_back();
    std::vector<const Usage*> ins, outs;
    std::vector<Usage> parts = usage_parts(u);
    for (const auto& p : parts) (p.pol == Polarity::In ? ins : outs).push_back(&p);
    std::string why = "rel(" + x + ") at " + render(u);
    // ob(OUT) <= cap(IN) and ob(IN) <= cap(OUT), with OMEGA only below OMEGA.
    auto side = [&](const std::vector<const Usage*>& obl, const std::vector<const Usage*>& caps) {
      if (caps.empty()) return;
      if (obl.empty()) {
        problem.add(LevelTerm::constant(1), 0, LevelTerm::constant(0), why + ": no partner action");
        return;
      }
      for (const Usage* c : caps) {
        LevelDisjunction d;
        d.why = why;
        for (const Usage* o : obl) d.alternatives.push_back(LevelConstraint{o->ob, 0, c->cap, why});
        problem.add_disjunction(std::move(d));
      }
    };
    side(outs, ins);
    side(ins, outs);
    for (const auto& next : usage_step(u))
      if (seen.insert(render(next)).second) frontier.push_back(next);
  }
}

namespace {

unsigned bound_of(const Usage& u) {
  unsigned m = 0;
  if (u.kind == Usage::Kind::Act) {
    if (u.ob.is_var) m = std::max(m, u.ob.n + 1);
    if (u.cap.is_var) m = std::max(m, u.cap.n + 1);
  }
  for (const auto& p : u.parts) m = std::max(m, bound_of(p));
  return m;
}

}  // namespace

unsigned level_var_bound(const UsageType& t) {
  unsigned m = bound_of(t.usage);
  for (const auto& a : t.args) m = std::max(m, level_var_bound(a));
  return m;
}

unsigned level_var_bound(const KBContext& g) {
  unsigned m = 0;
  for (const auto& [n, t] : g) m = std::max(m, level_var_bound(t));
  return m;
}

unsigned level_var_bound(const Process& p) {
  unsigned m = p.ut ? level_var_bound(*p.ut) : 0;
  for (const auto& c : p.children) m = std::max(m, level_var_bound(c));
  return m;
}

namespace {

using K = Process::Kind;
using Syn = std::map<Name, Usage>;
using Scope = std::map<Name, UsageType>;

struct Guard {
  Name channel;
  LevelTerm cap;
};
using Guards = std::vector<Guard>;

std::string skeleton(const Usage& u) {
  switch (u.kind) {
    case Usage::Kind::Empty: return "0";
    case Usage::Kind::Act: return std::string(u.pol == Polarity::In ? "?" : "!") + "(" + skeleton(u.parts[0]) + ")";
    case Usage::Kind::Par: {
      std::vector<std::string> parts;
      for (const auto& p : usage_parts(u)) parts.push_back(skeleton(p));
      std::sort(parts.begin(), parts.end());
      if (parts.empty()) return "0";
      if (parts.size() == 1) return parts[0];
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "|" : "") + parts[i];
      return out + ")";
    }
  }
  return "0";
}

std::string type_skeleton(const UsageType& t) {
  std::string out;
  if (t.kind == UsageType::Kind::Variant) {
    out = "<";
    for (std::size_t i = 0; i < t.labels.size(); ++i) out += t.labels[i] + ":" + type_skeleton(t.args[i]) + ",";
    return out + ">";
  }
  out = skeleton(t.usage) + "[";
  for (const auto& a : t.args) out += type_skeleton(a) + ",";
  return out + "]";
}

Usage compose(const Usage& a, const Usage& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return Usage::par(a, b);
}

void compose_into(Syn& into, const Syn& from) {
  for (const auto& [n, u] : from) {
    auto it = into.find(n);
    if (it == into.end()) {
      into.emplace(n, u);
    } else {
      it->second = compose(it->second, u);
    }
  }
}

Usage take(Syn& s, const Name& n) {
  auto it = s.find(n);
  if (it == s.end()) return Usage::empty();
  Usage u = it->second;
  s.erase(it);
  return u;
}

struct SoupCost {
  std::size_t cost = 0;
  std::vector<Name> shared;
};

class Engine {
 public:
  Engine(unsigned first_var, const KBOptions& opts) : supply_(first_var), opts_(opts) {}

  LevelProblem& problem() { return problem_; }
  std::size_t degree() const { return degree_; }
  unsigned var_count() const { return supply_.count(); }

  Syn soup(const Process& p, const Scope& scope, const Guards& guards, KBDerivation& node) {
    Soup s = flatten(p);
    std::string at = render(p);
    if (s.restrictions.empty() && s.components.size() == 1) return component(s.components[0], scope, guards, node);
    if (s.restrictions.empty() && s.components.empty()) {
      node.rule = "Tπ-Nil";
      node.process = at;
      return {};
    }
    Scope inner = scope;
    for (const auto& r : s.restrictions) {
      if (r.pair) type_fail(TypeErrorKind::DialectViolation, r.x, at, "session restriction in a PI process");
      if (!r.ut) type_fail(TypeErrorKind::MissingAnnotation, r.x, at, "restriction of " + r.x + " has no usage type");
      inner[r.x] = *r.ut;
    }
    KBDerivation par;
    par.rule = s.components.size() > 1 ? "Tπ-Par" : "Tπ-Nil";
    par.process = render(assemble(Soup{{}, s.components}));
    std::vector<Syn> syns;
    for (const auto& c : s.components) {
      par.children.emplace_back();
      syns.push_back(component(c, inner, guards, par.children.back()));
    }
    if (s.components.size() > 1) {
      SoupCost sc = sharing(syns);
      par.shared = sc.shared;
      par.shared_count = sc.cost;
      if (sc.cost > degree_) {
        degree_ = sc.cost;
        degree_at_ = par.process;
      }
    }
    Syn total;
    for (const auto& syn : syns) compose_into(total, syn);
    for (auto it = s.restrictions.rbegin(); it != s.restrictions.rend(); ++it) {
      match(*it->ut, take(total, it->x), it->x, at);
      reliable(*it->ut, it->x);
    }
    if (s.restrictions.empty()) {
      node = std::move(par);
    } else {
      node.rule = "Tπ-Res";
      node.process = at;
      node.children.push_back(std::move(par));
    }
    return total;
  }

  void check_root(const KBContext& g, const Syn& syn, const std::string& at) {
    for (const auto& [n, t] : g) {
      auto it = syn.find(n);
      match(t, it == syn.end() ? Usage::empty() : it->second, n, at);
    }
  }

  const std::string& degree_location() const { return degree_at_; }

 private:
  const UsageType& lookup(const Scope& scope, const Name& x, const std::string& at) {
    auto it = scope.find(x);
    if (it == scope.end()) type_fail(TypeErrorKind::UnboundName, x, at, "name " + x + " is not in the context");
    return it->second;
  }

  const UsageType& channel(const Scope& scope, const Name& x, const std::string& at) {
    const UsageType& t = lookup(scope, x, at);
    if (t.kind != UsageType::Kind::Chan)
      type_fail(TypeErrorKind::TypeMismatch, x, at, x + " has a variant type and cannot be used for communication");
    return t;
  }

  /// An action's obligation is at least one above every enclosing capability
  /// on another channel.
  LevelTerm obligation(const Name& x, const Guards& guards, const std::string& at) {
    LevelTerm o = supply_.fresh();
    for (const auto& g : guards)
      if (g.channel != x) problem_.add(g.cap, 1, o, "action on " + x + " guarded by " + g.channel + " in " + at);
    return o;
  }

  Syn component(const Process& c, const Scope& scope, const Guards& guards, KBDerivation& node) {
    node.process = render(c);
    const std::string& at = node.process;
    switch (c.kind) {
      case K::Inact: node.rule = "Tπ-Nil"; return {};
      case K::In: {
        node.rule = "Tπ-In";
        const UsageType& d = channel(scope, c.subject, at);
        if (d.args.size() != c.binders.size())
          type_fail(TypeErrorKind::TypeMismatch, c.subject, at,
                    "input arity " + std::to_string(c.binders.size()) + " but " + c.subject + " carries " +
                        std::to_string(d.args.size()));
        LevelTerm o = obligation(c.subject, guards, at);
        LevelTerm k = supply_.fresh();
        Scope inner = scope;
        for (std::size_t i = 0; i < c.binders.size(); ++i) inner[c.binders[i]] = d.args[i];
        Guards g2 = guards;
        g2.push_back(Guard{c.subject, k});
        node.children.emplace_back();
        Syn syn = soup(c.cont(), inner, g2, node.children.back());
        Usage rest = take(syn, c.subject);
        for (std::size_t i = 0; i < c.binders.size(); ++i) {
          if (c.binders[i] == c.subject) continue;
          match(d.args[i], take(syn, c.binders[i]), c.binders[i], at);
        }
        syn[c.subject] = Usage::act(Polarity::In, o, k, rest);
        return syn;
      }
      case K::Out: {
        node.rule = "Tπ-Out";
        if (c.bound) type_fail(TypeErrorKind::DialectViolation, c.subject, at, "bound output");
        const UsageType& d = channel(scope, c.subject, at);
        if (d.args.size() != c.values.size())
          type_fail(TypeErrorKind::TypeMismatch, c.subject, at,
                    "output arity " + std::to_string(c.values.size()) + " but " + c.subject + " carries " +
                        std::to_string(d.args.size()));
        LevelTerm o = obligation(c.subject, guards, at);
        LevelTerm k = supply_.fresh();
        Guards g2 = guards;
        g2.push_back(Guard{c.subject, k});
        node.children.emplace_back();
        Syn syn = soup(c.cont(), scope, g2, node.children.back());
        Usage rest = take(syn, c.subject);
        Syn sent;
        for (std::size_t i = 0; i < c.values.size(); ++i) {
          if (!c.values[i].is_chan()) {
            KBDerivation lval;
            lval.rule = "Tπ-LVal";
            lval.process = render(c.values[i]);
            node.children.push_back(std::move(lval));
          }
          compose_into(sent, send(c.values[i], d.args[i], scope, g2, at));
        }
        syn[c.subject] = Usage::act(Polarity::Out, o, k, rest);
        compose_into(syn, sent);
        return syn;
      }
      case K::Case: {
        node.rule = "Tπ-Case";
        const Value& v = c.values.at(0);
        if (!v.is_chan()) {
          const Process* chosen = nullptr;
          Name binder;
          for (std::size_t i = 0; i < c.labels.size(); ++i)
            if (c.labels[i] == v.name) {
              chosen = &c.children[i];
              binder = c.binders[i];
            }
          if (!chosen) type_fail(TypeErrorKind::TypeMismatch, "", at, "no branch for label " + v.name);
          node.children.emplace_back();
          return soup(substitute(*chosen, {{binder, v.payload()}}), scope, guards, node.children.back());
        }
        const UsageType& d = lookup(scope, v.name, at);
        if (d.kind != UsageType::Kind::Variant || d.labels != c.labels)
          type_fail(TypeErrorKind::TypeMismatch, v.name, at,
                    v.name + " has type " + render(d) + ", which does not match the case labels");
        std::vector<Syn> syns;
        for (std::size_t i = 0; i < c.labels.size(); ++i) {
          Scope inner = scope;
          inner[c.binders[i]] = d.args[i];
          node.children.emplace_back();
          Syn syn = soup(c.children[i], inner, guards, node.children.back());
          match(d.args[i], take(syn, c.binders[i]), c.binders[i], at);
          syns.push_back(std::move(syn));
        }
        for (std::size_t i = 1; i < syns.size(); ++i) {
          NameSet names;
          for (const auto& [n, u] : syns[0]) names.insert(n);
          for (const auto& [n, u] : syns[i]) names.insert(n);
          for (const auto& n : names) {
            Usage a = syns[0].count(n) ? syns[0].at(n) : Usage::empty();
            Usage b = syns[i].count(n) ? syns[i].at(n) : Usage::empty();
            if (!pair_usages(a, b, true, n + " in case branches"))
              type_fail(TypeErrorKind::TypeMismatch, n, at, "case branches use " + n + " differently");
          }
        }
        return syns.empty() ? Syn{} : syns[0];
      }
      default: break;
    }
    type_fail(TypeErrorKind::DialectViolation, c.subject, at, "construct outside the PI dialect");
  }

  /// Usage contributed by sending v at slot type t.
  Syn send(const Value& v, const UsageType& t, const Scope& scope, const Guards& guards, const std::string& at) {
    if (!v.is_chan()) {
      if (t.kind != UsageType::Kind::Variant)
        type_fail(TypeErrorKind::TypeMismatch, "", at, "variant " + render(v) + " sent on a channel slot");
      auto it = std::find(t.labels.begin(), t.labels.end(), v.name);
      if (it == t.labels.end())
        type_fail(TypeErrorKind::TypeMismatch, "", at, "label " + v.name + " is not in " + render(t));
      return send(v.payload(), t.args[static_cast<std::size_t>(it - t.labels.begin())], scope, guards, at);
    }
    const UsageType& d = lookup(scope, v.name, at);
    if (t.kind == UsageType::Kind::Variant || d.kind == UsageType::Kind::Variant) {
      if (!equal_types(d, t, v.name))
        type_fail(TypeErrorKind::PayloadMismatch, v.name, at,
                  v.name + " has type " + render(d) + " but the slot expects " + render(t));
      return {};
    }
    if (d.args.size() != t.args.size() || !equal_arg_lists(d.args, t.args, v.name))
      type_fail(TypeErrorKind::PayloadMismatch, v.name, at,
                v.name + " carries " + render(d) + " but the slot expects " + render(t));
    Usage u = relevel(t.usage, v.name, guards, at);
    if (u.is_empty()) return {};
    return Syn{{v.name, u}};
  }

  Usage relevel(const Usage& u, const Name& x, const Guards& guards, const std::string& at) {
    switch (u.kind) {
      case Usage::Kind::Empty: return u;
      case Usage::Kind::Par: return Usage::par(relevel(u.parts[0], x, guards, at), relevel(u.parts[1], x, guards, at));
      case Usage::Kind::Act: {
        LevelTerm o = obligation(x, guards, at);
        problem_.add(u.ob, 0, o, "delegated " + x + " keeps its obligation");
        return Usage::act(u.pol, o, u.cap, u.parts[0]);
      }
    }
    return u;
  }

  bool equal_arg_lists(const std::vector<UsageType>& a, const std::vector<UsageType>& b, const Name& n) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!equal_types(a[i], b[i], n)) return false;
    return true;
  }

  bool equal_types(const UsageType& a, const UsageType& b, const Name& n) {
    if (type_skeleton(a) != type_skeleton(b)) return false;
    if (a.kind == UsageType::Kind::Chan && !pair_usages(a.usage, b.usage, true, "payload of " + n)) return false;
    return equal_arg_lists(a.args, b.args, n);
  }

  /// Pairs the actions of two usages of the same shape. Equal mode equates
  /// both levels; otherwise s (synthesized) may carry a lower obligation
  /// than d (declared) and capabilities agree.
  bool pair_usages(const Usage& d, const Usage& s, bool equal, const std::string& why) {
    std::vector<Usage> dp = usage_parts(d);
    std::vector<Usage> sp = usage_parts(s);
    if (dp.size() != sp.size()) return false;
    std::vector<bool> used(dp.size(), false);
    for (const auto& a : sp) {
      std::string sk = skeleton(a);
      bool found = false;
      for (std::size_t i = 0; i < dp.size() && !found; ++i) {
        if (used[i] || skeleton(dp[i]) != sk) continue;
        used[i] = true;
        found = true;
        problem_.add_equal(dp[i].cap, a.cap, why);
        if (equal) {
          problem_.add_equal(dp[i].ob, a.ob, why);
        } else {
          problem_.add(a.ob, 0, dp[i].ob, why);
        }
        if (!pair_usages(dp[i].parts[0], a.parts[0], equal, why)) return false;
      }
      if (!found) return false;
    }
    return true;
  }

  void match(const UsageType& d, const Usage& s, const Name& n, const std::string& at) {
    if (d.kind == UsageType::Kind::Variant) {
      if (!s.is_empty()) type_fail(TypeErrorKind::TypeMismatch, n, at, n + " has a variant type but is used as a channel");
      return;
    }
    std::size_t declared = usage_parts(d.usage).size();
    std::size_t used = usage_parts(s).size();
    if (used < declared)
      type_fail(TypeErrorKind::LinearityViolation, n, at,
                n + " is declared " + render(d.usage) + " but only used as " + render(s));
    if (!pair_usages(d.usage, s, false, "use of " + n + " within its declaration"))
      type_fail(TypeErrorKind::TypeMismatch, n, at, n + " is declared " + render(d.usage) + " but used as " + render(s));
  }

  /// con at every reachable state, as level constraints.
  void reliable(const UsageType& t, const Name& x) {
    if (t.kind == UsageType::Kind::Chan) reliability_constraints(t.usage, x, problem_);
  }

  /// Cheapest binary parallel tree over the components, by largest cut.
  SoupCost sharing(const std::vector<Syn>& syns) {
    if (!opts_.measure_sharing) return {};
    std::size_t k = syns.size();
    std::vector<std::map<Name, std::string>> uses(k);
    for (std::size_t i = 0; i < k; ++i)
      for (const auto& [n, u] : syns[i])
        if (!u.is_empty()) uses[i][n] = skeleton(u);
    auto names_of = [&](unsigned mask) {
      std::map<Name, std::set<std::string>> out;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1u << i))
          for (const auto& [n, sk] : uses[i]) out[n].insert(sk);
      return out;
    };
    auto cut = [&](unsigned a, unsigned b) {
      auto na = names_of(a);
      auto nb = names_of(b);
      std::vector<Name> shared;
      for (const auto& [n, ska] : na) {
        auto it = nb.find(n);
        if (it == nb.end()) continue;
        if (opts_.count_assignments && ska != it->second) continue;
        shared.push_back(n);
      }
      return shared;
    };
    if (k > 12) {
      // Left-nested tree.
      SoupCost best;
      for (std::size_t i = 1; i < k; ++i) {
        auto s = cut((1u << i) - 1, 1u << i);
        if (s.size() > best.cost) best = SoupCost{s.size(), s};
      }
      return best;
    }
    unsigned full = (1u << k) - 1;
    std::vector<std::size_t> cost(full + 1, 0);
    std::vector<std::vector<Name>> worst(full + 1);
    for (unsigned mask = 1; mask <= full; ++mask) {
      if ((mask & (mask - 1)) == 0) continue;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      unsigned low = mask & (~mask + 1);
      for (unsigned a = (mask - 1) & mask; a; a = (a - 1) & mask) {
        if (!(a & low)) continue;
        unsigned b = mask ^ a;
        auto s = cut(a, b);
        std::size_t c = std::max({s.size(), cost[a], cost[b]});
        if (c < best) {
          best = c;
          if (s.size() >= std::max(cost[a], cost[b])) {
            worst[mask] = s;
          } else {
            worst[mask] = cost[a] >= cost[b] ? worst[a] : worst[b];
          }
        }
      }
      cost[mask] = best;
    }
    return SoupCost{cost[full], worst[full]};
  }

  LevelProblem problem_;
  LevelSupply supply_;
  KBOptions opts_;
  std::size_t degree_ = 0;
  std::string degree_at_;
};

std::optional<std::string> failing_name(const std::vector<std::string>& chain) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    auto pos = it->find("rel(");
    if (pos == std::string::npos) continue;
    auto end = it->find(')', pos);
    return it->substr(pos + 4, end - pos - 4);
  }
  return std::nullopt;
}

struct Run {
  std::optional<TypeError> error;
  KBDerivation derivation;
  std::size_t degree = 0;
  std::string degree_at;
  LevelSolution solution;
};

Run run(const KBContext& g, const Process& p, const KBOptions& opts) {
  Run r;
  try {
    validate(p, Dialect::PI);
    unsigned first = std::max(level_var_bound(g), level_var_bound(p));
    Engine e(first, opts);
    Scope scope;
    for (const auto& [n, t] : g) scope[n] = t;
    Syn syn = e.soup(p, scope, {}, r.derivation);
    e.check_root(g, syn, render(p));
    r.degree = e.degree();
    r.degree_at = e.degree_location();
    e.problem().reserve(e.var_count());
    unsigned l_max = opts.l_max ? opts.l_max : static_cast<unsigned>(std::max<std::size_t>(1, prefix_count(p)));
    r.solution = solve_levels(e.problem(), l_max);
    if (!r.solution.satisfiable) {
      auto name = failing_name(r.solution.failing_chain);
      std::string why = r.solution.failing_chain.empty() ? "no level assignment" : r.solution.failing_chain.back();
      r.error = TypeError{TypeErrorKind::ReliabilityFailure, name.value_or(""), render(p),
                          "no levels up to " + std::to_string(l_max) + " make every channel reliable: " + why, 0};
    }
  } catch (const TypeErrorException& e) {
    r.error = e.error();
  }
  return r;
}

}  // namespace

KBResult check_kb(const KBContext& g, const Process& p, std::size_t n, const KBOptions& opts) {
  Run r = run(g, p, opts);
  KBResult out;
  out.error = r.error;
  out.degree = r.degree;
  out.failing_chain = r.solution.failing_chain;
  if (!out.error && r.degree > n)
    out.error = TypeError{TypeErrorKind::SharingExceeded, "", r.degree_at,
                          "parallel composition shares " + std::to_string(r.degree) + " channels, more than " +
                              std::to_string(n),
                          static_cast<int>(r.degree)};
  if (!out.error) {
    out.derivation = std::move(r.derivation);
    out.levels = r.solution.values;
    for (const auto& [name, t] : g) out.context.set(name, instantiate(t, out.levels));
  }
  return out;
}

LevelInference infer_levels(const KBContext& g, const Process& p, std::size_t n, unsigned l_max) {
  KBOptions opts;
  opts.l_max = std::max(1u, l_max);
  KBResult r = check_kb(g, p, n, opts);
  LevelInference out;
  out.failing_chain = r.failing_chain;
  if (r.ok()) {
    out.satisfiable = true;
    out.assignment = r.levels;
  } else if (r.error->kind != TypeErrorKind::ReliabilityFailure) {
    out.error = r.error;
  }
  return out;
}

DegreeResult degree(const KBContext& g, const Process& p, const KBOptions& opts) {
  DegreeResult out;
  out.detail = check_kb(g, p, std::numeric_limits<std::size_t>::max(), opts);
  if (out.detail.ok()) {
    out.degree = out.detail.degree;
  } else {
    out.error = out.detail.error;
  }
  return out;
}

}  // namespace sesstk
