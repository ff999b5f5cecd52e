#include "sesstk/hierarchy.hpp"

#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "sesstk/check_st.hpp"
#include "sesstk/transform.hpp"
#include "unify.hpp"

namespace sesstk {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

Classification classify(const STContext& g, const Process& p, const ClassifyOptions& opts) {
  Classification c;
  STResult st = check_st(g, p);
  c.st_ok = st.ok();
  c.st_error = st.error;
  c.verdict = deadlock_verdict(p, Dialect::Session, opts.max_states);
  if (c.st_ok) {
    TypedEncoding te = encode_typed(g, p);
    DegreeResult d = degree(te.context, te.process, opts.kb);
    c.min_degree = d.degree;
    c.kb_error = d.error;
    c.kb_audit = d.detail.derivation;
    CHResult ch = check_ch(translate_ch(p), encode_ctx_c(g));
    c.in_l = ch.ok();
    c.ch_error = ch.error;
    c.ch_audit = ch.derivation;
    bool low = c.min_degree && *c.min_degree <= 1;
    c.cross_check = low == c.in_l;
  }
  return c;
}

Witness witness(std::size_t n, WitnessFamily family) {
  if (n == 0) throw std::invalid_argument("witness: n must be at least 1");
  bool q = family == WitnessFamily::Auto ? n % 2 == 1 : family == WitnessFamily::Q;
  SessionType in_end = SessionType::in(SessionType::end(), SessionType::end());
  SessionType out_end = SessionType::out(SessionType::end(), SessionType::end());
  auto a = [](std::size_t i) { return "a" + std::to_string(i); };
  auto b = [](std::size_t i) { return "b" + std::to_string(i); };
  Process left = Process::inact();
  Process right = Process::inact();
  std::vector<SessionType> types(n + 1);
  for (std::size_t i = n; i >= 2; --i) {
    if (q && i == n) {
      left = Process::in(a(i), {"y"}, left);
      right = Process::out(b(i), {Value::chan("n")}, right);
      types[i] = in_end;
    } else {
      left = Process::out(a(i), {Value::chan("x")}, left);
      right = Process::in(b(i), {"z"}, right);
      types[i] = out_end;
    }
  }
  left = Process::in(a(1), {"x"}, left);
  right = Process::out(b(1), {Value::chan("n")}, right);
  types[1] = in_end;
  Process body = Process::par(left, right);
  for (std::size_t i = n; i >= 1; --i) body = Process::res_session(a(i), b(i), types[i], body);
  return Witness{STContext{{"n", SessionType::end()}}, body};
}

// ---------------------------------------------------------------------------
// ≐
// ---------------------------------------------------------------------------

namespace {

using detail::UTerm;
using detail::Unifier;
using K = Process::Kind;
using TermCtx = std::map<Name, UTerm>;

struct NotTypable {};

/// Session-type inference for a process with unknown free names.
class STInference {
 public:
  STInference() : u_(detail::session_signature()) {}

  TermCtx infer(const Process& p) {
    switch (p.kind) {
      case K::Inact: return {};
      case K::Out: {
        TermCtx c = infer(p.cont());
        const Name& v = p.values.at(0).name;
        if (v == p.subject) throw NotTypable{};
        UTerm s = take(c, p.subject);
        UTerm t = u_.fresh();
        if (auto it = c.find(v); it != c.end()) {
          need(it->second, end());
          need(t, end());
        }
        c[v] = t;
        c[p.subject] = UTerm::con("out", {t, s});
        return c;
      }
      case K::In: {
        TermCtx c = infer(p.cont());
        UTerm t = take(c, p.binders.at(0));
        UTerm s = take(c, p.subject);
        c[p.subject] = UTerm::con("in", {t, s});
        return c;
      }
      case K::Sel: {
        TermCtx c = infer(p.cont());
        UTerm s = take(c, p.subject);
        c[p.subject] = UTerm::choice("select", {{p.labels[0], s}}, u_.fresh_row());
        return c;
      }
      case K::Branch: {
        std::vector<TermCtx> cs;
        std::vector<std::pair<std::string, UTerm>> alts;
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
          cs.push_back(infer(p.children[i]));
          alts.emplace_back(p.labels[i], take(cs.back(), p.subject));
        }
        TermCtx out;
        for (const auto& c : cs)
          for (const auto& [n, t] : c) out.emplace(n, t);
        for (const auto& [n, t] : out)
          for (const auto& c : cs) need(t, c.count(n) ? c.at(n) : end());
        out[p.subject] = UTerm::choice("branch", std::move(alts));
        return out;
      }
      case K::Par: {
        TermCtx a = infer(p.children[0]);
        TermCtx b = infer(p.children[1]);
        for (const auto& [n, t] : b) {
          auto it = a.find(n);
          if (it == a.end()) {
            a.emplace(n, t);
          } else {
            need(it->second, end());
            need(t, end());
          }
        }
        return a;
      }
      case K::ResSession: {
        TermCtx c = infer(p.children[0]);
        UTerm tx = take(c, p.subject);
        UTerm ty = take(c, p.other);
        need(tx, u_.dual(ty));
        if (p.st) need(tx, detail::to_term(*p.st));
        return c;
      }
      default: throw NotTypable{};
    }
  }

  bool agree(const TermCtx& a, const TermCtx& b) {
    try {
      for (const auto& [n, t] : a) need(t, b.count(n) ? b.at(n) : end());
      for (const auto& [n, t] : b)
        if (!a.count(n)) need(t, end());
      return true;
    } catch (const NotTypable&) {
      return false;
    }
  }

 private:
  static UTerm end() { return UTerm::con("end"); }

  UTerm take(TermCtx& c, const Name& n) {
    auto it = c.find(n);
    if (it == c.end()) return end();
    UTerm t = it->second;
    c.erase(it);
    return t;
  }

  void need(const UTerm& a, const UTerm& b) {
    if (!u_.unify(a, b)) throw NotTypable{};
  }

  Unifier u_;
};

bool st_cotypable(const Process& a, const Process& b) {
  try {
    STInference inf;
    TermCtx ca = inf.infer(a);
    TermCtx cb = inf.infer(b);
    return inf.agree(ca, cb);
  } catch (const NotTypable&) {
    return false;
  }
}

bool same_head(const Process& a, const Process& b) {
  return a.kind == b.kind && a.subject == b.subject && a.other == b.other && a.values == b.values &&
         a.binders == b.binders && a.labels == b.labels && a.bound == b.bound && a.st == b.st && a.ut == b.ut &&
         a.children.size() == b.children.size();
}

/// Positions of candidate holes, root first, ending at the smallest
/// subterm pair containing every difference.
std::vector<std::vector<std::size_t>> hole_paths(const Process& a, const Process& b) {
  std::vector<std::vector<std::size_t>> out{{}};
  const Process* x = &a;
  const Process* y = &b;
  std::vector<std::size_t> path;
  while (same_head(*x, *y)) {
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < x->children.size(); ++i)
      if (!(x->children[i] == y->children[i])) diff.push_back(i);
    if (diff.size() != 1) break;
    path.push_back(diff[0]);
    out.push_back(path);
    x = &x->children[diff[0]];
    y = &y->children[diff[0]];
  }
  return out;
}

const Process& at_path(const Process& p, const std::vector<std::size_t>& path) {
  const Process* cur = &p;
  for (std::size_t i : path) cur = &cur->children[i];
  return *cur;
}

}  // namespace

Tri doteq(const Process& p, const Process& q, const STContext& g) {
  bool session = is_valid(p, Dialect::Session) && is_valid(q, Dialect::Session);
  bool ch = is_valid(p, Dialect::CH) && is_valid(q, Dialect::CH);
  if (!session && !ch) return Tri::Unknown;
  if (session && (!check_st(g, p).ok() || !check_st(g, q).ok())) return Tri::False;
  Process a = normal_form(p);
  Process b = normal_form(q);
  if (alpha_equiv(a, b)) return Tri::True;
  auto paths = hole_paths(a, b);
  for (auto it = paths.rbegin(); it != paths.rend(); ++it) {
    const Process& x = at_path(a, *it);
    const Process& y = at_path(b, *it);
    if (session ? st_cotypable(x, y) : ch_cotypable(x, y)) return Tri::True;
  }
  return Tri::False;
}

// ---------------------------------------------------------------------------
// Operational correspondence
// ---------------------------------------------------------------------------

namespace {

using Kind = ReductionLabel::Kind;

/// States reached by at most one leading Choice step and then any number of
/// other steps. With `need_step`, the start state itself is excluded unless
/// revisited.
std::vector<std::size_t> after_choice(const StateGraph& gr, bool need_step) {
  std::set<std::size_t> seen;
  std::deque<std::size_t> work;
  bool any_choice = false;
  for (const auto* e : gr.out_edges(0))
    if (e->label.kind == Kind::Choice) {
      any_choice = true;
      if (seen.insert(e->to).second) work.push_back(e->to);
    }
  if (!need_step || !any_choice) {
    if (!need_step) {
      seen.insert(0);
      work.push_back(0);
    } else {
      for (const auto* e : gr.out_edges(0))
        if (seen.insert(e->to).second) work.push_back(e->to);
    }
  }
  while (!work.empty()) {
    std::size_t s = work.front();
    work.pop_front();
    for (const auto* e : gr.out_edges(s))
      if (e->label.kind != Kind::Choice && seen.insert(e->to).second) work.push_back(e->to);
  }
  return {seen.begin(), seen.end()};
}

struct Image {
  bool ok = false;
  bool over_budget = false;
  std::string error;
  Process term;
  StateGraph graph;
};

Image image_of(const STContext& g, const Process& p, std::size_t budget, const std::string& inx) {
  Image im;
  try {
    im.term = rewrite(g, p, RewriteOptions{inx});
    im.graph = explore(im.term, Dialect::CH, budget);
    im.ok = true;
  } catch (const BudgetExceeded& e) {
    im.over_budget = true;
    im.error = e.what();
  } catch (const TypeErrorException& e) {
    im.error = e.error().record();
  }
  return im;
}

Tri combine(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

}  // namespace

OpReport check_op_correspondence(const STContext& g, const Process& p, std::size_t budget, const std::string& inx) {
  OpReport report;
  StateGraph src;
  try {
    src = explore(p, Dialect::Session, budget);
  } catch (const BudgetExceeded& e) {
    report.item1.push_back(OpEntry{render(p), Tri::Unknown, e.what()});
    report.item1_status = report.item2_status = Tri::Unknown;
    return report;
  }
  std::map<std::size_t, Image> images;
  auto image = [&](std::size_t s) -> const Image& {
    auto it = images.find(s);
    if (it == images.end()) it = images.emplace(s, image_of(g, src.states[s], budget, inx)).first;
    return it->second;
  };
  auto unavailable = [](const Image& im) { return im.over_budget ? Tri::Unknown : Tri::False; };

  // Item I: every source step is matched by the images.
  for (const auto& e : src.edges) {
    OpEntry entry;
    entry.source = render(src.states[e.from]) + " --" + e.label.render() + "--> " + render(src.states[e.to]);
    const Image& from = image(e.from);
    const Image& to = image(e.to);
    if (!from.ok || !to.ok) {
      entry.status = unavailable(from.ok ? to : from);
      entry.detail = from.ok ? to.error : from.error;
    } else {
      std::vector<Process> targets{to.graph.states[0]};
      for (const auto* c : to.graph.out_edges(0))
        if (c->label.kind == Kind::Choice) targets.push_back(to.graph.states[c->to]);
      entry.status = Tri::False;
      entry.detail = "no reachable image state relates to the image of the target";
      bool strong = false;
      for (std::size_t q : after_choice(from.graph, false)) {
        for (const auto& t : targets) {
          if (alpha_equiv(from.graph.states[q], t)) {
            strong = true;
          } else if (doteq(from.graph.states[q], t, g) != Tri::True) {
            continue;
          }
          entry.status = Tri::True;
          entry.detail = std::string(strong ? "identical" : "related") + " via image state #" + std::to_string(q);
          break;
        }
        if (strong) break;
      }
    }
    report.item1_status = combine(report.item1_status, entry.status);
    report.item1.push_back(std::move(entry));
  }

  // Item II: every image run after a choice is matched by a source step.
  for (std::size_t s = 0; s < src.states.size(); ++s) {
    const Image& im = image(s);
    if (!im.ok) {
      OpEntry entry{render(src.states[s]), unavailable(im), im.error};
      report.item2_status = combine(report.item2_status, entry.status);
      report.item2.push_back(std::move(entry));
      continue;
    }
    auto outs = src.out_edges(s);
    for (std::size_t q : after_choice(im.graph, true)) {
      OpEntry entry;
      entry.source = render(src.states[s]) + " ~> " + render(im.graph.states[q]);
      entry.status = Tri::False;
      entry.detail = "no source step relates";
      for (const auto* e : outs) {
        const Image& to = image(e->to);
        if (!to.ok) {
          if (to.over_budget) entry.status = Tri::Unknown;
          continue;
        }
        if (doteq(im.graph.states[q], to.term, g) == Tri::True) {
          entry.status = Tri::True;
          entry.detail = "source step " + e->label.render();
          break;
        }
      }
      report.item2_status = combine(report.item2_status, entry.status);
      report.item2.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace sesstk
