#include "sesstk/transform.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sesstk/check_st.hpp"

namespace sesstk {

using K = Process::Kind;

namespace {

NameSet names_with_context(const Process& p, const STContext& g) {
  NameSet avoid = all_names(p);
  for (const auto& [n, t] : g) avoid.insert(n);
  return avoid;
}

Name image(const NameEnv& f, const Name& x) {
  auto it = f.find(x);
  return it == f.end() ? x : it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Translation into CH
// ---------------------------------------------------------------------------

namespace {

Process translate(const Process& p, NameSet& avoid) {
  switch (p.kind) {
    case K::Inact: return p;
    case K::Out: {
      Process body = translate(p.cont(), avoid);
      Name z = fresh_name("%z", avoid);
      return Process::bound_out(p.subject, z, Process::par(Process::fwd(z, p.values.at(0).name), std::move(body)));
    }
    case K::In: return Process::in(p.subject, p.binders, translate(p.cont(), avoid));
    case K::Sel: return Process::sel(p.subject, p.labels[0], translate(p.cont(), avoid));
    case K::Branch: {
      std::vector<std::pair<std::string, Process>> alts;
      for (std::size_t i = 0; i < p.labels.size(); ++i) alts.emplace_back(p.labels[i], translate(p.children[i], avoid));
      return Process::branch(p.subject, std::move(alts));
    }
    case K::Par: return Process::par(translate(p.children[0], avoid), translate(p.children[1], avoid));
    case K::ResSession: {
      Process body = translate(p.children[0], avoid);
      Name w = fresh_name("%w", avoid);
      body = rename(rename(body, p.subject, w), p.other, w);
      return Process::res(w, std::move(body));
    }
    default: throw DialectError(render(p), "session");
  }
}

}  // namespace

Process translate_ch(const Process& p) {
  validate(p, Dialect::Session);
  NameSet avoid = all_names(p);
  return translate(p, avoid);
}

// ---------------------------------------------------------------------------
// Encoding into PI
// ---------------------------------------------------------------------------

UsageType encode_pair(const SessionType& t, LevelSupply& levels) {
  if (t.is_end()) return UsageType::chan(Usage::empty());
  UsageType a = encode_su(t, levels);
  UsageType b = encode_su(dual(t), levels);
  return UsageType::chan(Usage::par(a.usage, b.usage), a.args);
}

namespace {

class Encoder {
 public:
  Encoder(NameSet avoid, bool typed) : avoid_(std::move(avoid)), typed_(typed) {}

  LevelSupply& levels() { return levels_; }

  using Env = std::map<Name, SessionType>;

  Process enc(const Process& p, NameEnv f, Env env) {
    const std::string at = typed_ ? render(p) : std::string();
    switch (p.kind) {
      case K::Inact: return p;
      case K::Out: {
        const Name& v = p.values.at(0).name;
        Name c = fresh_name("%c", avoid_);
        std::optional<UsageType> ann;
        if (typed_) {
          SessionType t = lookup(env, p.subject, at);
          if (t.kind != SessionType::Kind::Out)
            type_fail(TypeErrorKind::TypeMismatch, p.subject, at, p.subject + " has type " + render(t) + ", not an output");
          ann = encode_pair(t.cont(), levels_);
          env.erase(v);
          env[p.subject] = t.cont();
        }
        Name fx = image(f, p.subject);
        Name fv = image(f, v);
        f[p.subject] = c;
        Process body = enc(p.cont(), std::move(f), std::move(env));
        return Process::res(c, Process::out(fx, {Value::chan(fv), Value::chan(c)}, std::move(body)), ann);
      }
      case K::In: {
        const Name& y = p.binders.at(0);
        Name c = fresh_name("%c", avoid_);
        if (typed_) {
          SessionType t = lookup(env, p.subject, at);
          if (t.kind != SessionType::Kind::In)
            type_fail(TypeErrorKind::TypeMismatch, p.subject, at, p.subject + " has type " + render(t) + ", not an input");
          env[y] = t.payload();
          env[p.subject] = t.cont();
        }
        Name fx = image(f, p.subject);
        f.erase(y);
        f[p.subject] = c;
        return Process::in(fx, {y, c}, enc(p.cont(), std::move(f), std::move(env)));
      }
      case K::Sel: {
        Name c = fresh_name("%c", avoid_);
        std::optional<UsageType> ann;
        if (typed_) {
          SessionType t = lookup(env, p.subject, at);
          const SessionType* s = t.kind == SessionType::Kind::Select ? t.alt(p.labels[0]) : nullptr;
          if (!s)
            type_fail(TypeErrorKind::TypeMismatch, p.subject, at,
                      p.subject + " has type " + render(t) + ", which does not offer " + p.labels[0]);
          ann = encode_pair(*s, levels_);
          env[p.subject] = *s;
        }
        Name fx = image(f, p.subject);
        f[p.subject] = c;
        Process body = enc(p.cont(), std::move(f), std::move(env));
        return Process::res(c, Process::out(fx, {Value::variant(p.labels[0], Value::chan(c))}, std::move(body)), ann);
      }
      case K::Branch: {
        Name y = fresh_name("%c", avoid_);
        Name c = fresh_name("%c", avoid_);
        SessionType t;
        if (typed_) {
          t = lookup(env, p.subject, at);
          if (t.kind != SessionType::Kind::Branch || t.labels != p.labels)
            type_fail(TypeErrorKind::TypeMismatch, p.subject, at,
                      p.subject + " has type " + render(t) + ", which does not match the branch labels");
        }
        Name fx = image(f, p.subject);
        std::vector<std::tuple<std::string, Name, Process>> alts;
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
          NameEnv fi = f;
          fi[p.subject] = c;
          Env ei = env;
          if (typed_) ei[p.subject] = t.args[i];
          alts.emplace_back(p.labels[i], c, enc(p.children[i], std::move(fi), std::move(ei)));
        }
        return Process::in(fx, {y}, Process::case_of(Value::chan(y), std::move(alts)));
      }
      case K::Par: return Process::par(enc(p.children[0], f, env), enc(p.children[1], f, env));
      case K::ResSession: {
        Name c = fresh_name("%c", avoid_);
        std::optional<UsageType> ann;
        if (typed_) {
          if (!p.st) type_fail(TypeErrorKind::MissingAnnotation, p.subject, at, "restriction without a session type");
          ann = encode_pair(*p.st, levels_);
          env[p.subject] = *p.st;
          env[p.other] = dual(*p.st);
        }
        f[p.subject] = c;
        f[p.other] = c;
        return Process::res(c, enc(p.children[0], std::move(f), std::move(env)), ann);
      }
      default: throw DialectError(render(p), "session");
    }
  }

 private:
  SessionType lookup(const Env& env, const Name& x, const std::string& at) {
    auto it = env.find(x);
    if (it == env.end()) type_fail(TypeErrorKind::UnboundName, x, at, "name " + x + " is not in the context");
    return it->second;
  }

  NameSet avoid_;
  bool typed_;
  LevelSupply levels_;
};

}  // namespace

Process encode_proc(const Process& p, const NameEnv& f) {
  validate(p, Dialect::Session);
  NameSet avoid = all_names(p);
  for (const auto& [a, b] : f) {
    avoid.insert(a);
    avoid.insert(b);
  }
  Encoder e(std::move(avoid), false);
  return e.enc(p, f, {});
}

TypedEncoding encode_typed(const STContext& g, const Process& p) {
  validate(p, Dialect::Session);
  Encoder e(names_with_context(p, g), true);
  TypedEncoding out;
  out.context = encode_ctx_su(g, e.levels());
  Encoder::Env env;
  for (const auto& [n, t] : g) env[n] = t;
  out.process = e.enc(p, {}, std::move(env));
  out.level_count = e.levels().count();
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic processes and catalyzers
// ---------------------------------------------------------------------------

namespace {

Name pick_binder(NameSet& avoid) {
  if (!avoid.count("y")) {
    avoid.insert("y");
    return "y";
  }
  for (unsigned i = 1;; ++i) {
    Name n = "y" + std::to_string(i);
    if (!avoid.count(n)) {
      avoid.insert(n);
      return n;
    }
  }
}

Process characteristic(const SessionType& t, const Name& x, NameSet& avoid) {
  switch (t.kind) {
    case SessionType::Kind::End: return Process::inact();
    case SessionType::Kind::In: {
      Name y = pick_binder(avoid);
      return Process::in(x, {y}, Process::par(characteristic(t.payload(), y, avoid), characteristic(t.cont(), x, avoid)));
    }
    case SessionType::Kind::Out: {
      Name y = pick_binder(avoid);
      return Process::bound_out(
          x, y, Process::par(characteristic(dual(t.payload()), y, avoid), characteristic(t.cont(), x, avoid)));
    }
    case SessionType::Kind::Branch: {
      std::vector<std::pair<std::string, Process>> alts;
      for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], characteristic(t.args[i], x, avoid));
      return Process::branch(x, std::move(alts));
    }
    case SessionType::Kind::Select: {
      std::size_t least = static_cast<std::size_t>(
          std::min_element(t.labels.begin(), t.labels.end()) - t.labels.begin());
      return Process::sel(x, t.labels[least], characteristic(t.args[least], x, avoid));
    }
  }
  return Process::inact();
}

const Name kHole = "[]";

Process plug_into(const Process& term, const Process& q) {
  if (term.kind == K::Fwd && term.subject == kHole) return q;
  Process out = term;
  for (auto& c : out.children) c = plug_into(c, q);
  return out;
}

}  // namespace

Process char_proc(const SessionType& t, const Name& x) {
  NameSet avoid{x};
  return characteristic(t, x, avoid);
}

ProcessContext ProcessContext::hole() { return ProcessContext{Process::fwd(kHole, kHole)}; }

Process ProcessContext::plug(const Process& q) const { return plug_into(term, q); }

std::string ProcessContext::render() const {
  std::string s = sesstk::render(term);
  const std::string marker = "fwd " + kHole + " " + kHole;
  auto pos = s.find(marker);
  if (pos != std::string::npos) s.replace(pos, marker.size(), kHole);
  return s;
}

ProcessContext catalyzer(const STContext& g) {
  ProcessContext c = ProcessContext::hole();
  for (const auto& [x, t] : g) c.term = Process::res(x, Process::par(c.term, char_proc(dual(t), x)));
  return c;
}

Process fakepar(const Process& p1, const Process& p2, const Name& k, const std::string& inx) {
  if (inx != "inl" && inx != "inr") throw std::invalid_argument("fakepar: label must be inl or inr, got " + inx);
  if (free_names(p1).count(k) || free_names(p2).count(k))
    throw std::invalid_argument("fakepar: " + k + " occurs free in a branch");
  return Process::res(k, Process::par(Process::sel(k, inx, Process::inact()),
                                      Process::branch(k, {{"inl", p1}, {"inr", p2}})));
}

// ---------------------------------------------------------------------------
// Rewriting into L
// ---------------------------------------------------------------------------

namespace {

struct CrossEdge {
  std::size_t left;  // component holding x
  std::size_t right; // component holding y
  Name x;
  Name y;
  SessionType t;     // type of x
};

class Rewriter {
 public:
  Rewriter(NameSet avoid, std::string inx) : avoid_(std::move(avoid)), inx_(std::move(inx)) {}

  Process rw(STContext g, const Process& p) {
    switch (p.kind) {
      case K::Inact: return p;
      case K::Out: {
        const Name& v = p.values.at(0).name;
        const SessionType* t = g.find(p.subject);
        Name z = fresh_name("%z", avoid_);
        g.set(p.subject, t->cont());
        if (const SessionType* tv = g.find(v); tv && !tv->is_end()) g.erase(v);
        return Process::bound_out(p.subject, z, Process::par(Process::fwd(v, z), rw(std::move(g), p.cont())));
      }
      case K::In: {
        SessionType t = *g.find(p.subject);
        g.set(p.binders[0], t.payload());
        g.set(p.subject, t.cont());
        return Process::in(p.subject, p.binders, rw(std::move(g), p.cont()));
      }
      case K::Sel: {
        SessionType t = *g.find(p.subject);
        g.set(p.subject, *t.alt(p.labels[0]));
        return Process::sel(p.subject, p.labels[0], rw(std::move(g), p.cont()));
      }
      case K::Branch: {
        SessionType t = *g.find(p.subject);
        std::vector<std::pair<std::string, Process>> alts;
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
          STContext gi = g;
          gi.set(p.subject, *t.alt(p.labels[i]));
          alts.emplace_back(p.labels[i], rw(std::move(gi), p.children[i]));
        }
        return Process::branch(p.subject, std::move(alts));
      }
      default: return soup(std::move(g), p);
    }
  }

 private:
  /// Restrictions linking two different components are cuts; any other
  /// restriction is closed by a catalyzer around the whole cluster.
  Process soup(STContext g, const Process& p) {
    Soup s = flatten(p);
    std::vector<NameSet> fn;
    for (const auto& c : s.components) fn.push_back(free_names(c));
    auto users = [&](const Name& n) {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < fn.size(); ++i)
        if (fn[i].count(n)) out.push_back(i);
      return out;
    };
    STContext ambient;
    std::vector<CrossEdge> cross;
    for (const auto& r : s.restrictions) {
      SessionType t = *r.st;
      auto ux = users(r.x);
      auto uy = users(r.y);
      if (ux.size() == 1 && uy.size() == 1 && ux[0] != uy[0]) {
        cross.push_back(CrossEdge{ux[0], uy[0], r.x, r.y, t});
        continue;
      }
      ambient.set(r.x, t);
      ambient.set(r.y, dual(t));
    }
    for (const auto& [n, t] : ambient) g.set(n, t);
    std::vector<std::size_t> all(s.components.size());
    std::iota(all.begin(), all.end(), 0);
    Process body = cluster(g, s.components, fn, all, cross);
    return catalyzer(ambient).plug(body);
  }

  STContext restrict_to(const STContext& g, const std::vector<NameSet>& fn, const std::vector<std::size_t>& comps) {
    STContext out;
    for (const auto& [n, t] : g)
      for (std::size_t i : comps)
        if (fn[i].count(n)) {
          out.set(n, t);
          break;
        }
    return out;
  }

  Process characteristic_of(const STContext& g) {
    std::vector<Process> parts;
    for (const auto& [n, t] : g)
      if (!t.is_end()) parts.push_back(char_proc(t, n));
    return Process::par_all(std::move(parts));
  }

  /// Components `comps` with the cut edges among them.
  Process cluster(const STContext& g, const std::vector<Process>& cs, const std::vector<NameSet>& fn,
                  const std::vector<std::size_t>& comps, const std::vector<CrossEdge>& cross) {
    if (comps.empty()) return Process::inact();
    // Connected groups are independent and compose in parallel.
    std::vector<std::vector<std::size_t>> groups;
    std::vector<bool> seen(cs.size(), false);
    for (std::size_t start : comps) {
      if (seen[start]) continue;
      std::vector<std::size_t> group{start};
      seen[start] = true;
      for (std::size_t i = 0; i < group.size(); ++i)
        for (const auto& e : cross) {
          std::size_t other = e.left == group[i] ? e.right : e.right == group[i] ? e.left : group[i];
          if (other != group[i] && !seen[other]) {
            seen[other] = true;
            group.push_back(other);
          }
        }
      std::sort(group.begin(), group.end());
      groups.push_back(std::move(group));
    }
    std::vector<Process> parts;
    for (const auto& group : groups) parts.push_back(split(g, cs, fn, group, cross));
    return Process::par_all(std::move(parts));
  }

  Process split(const STContext& g, const std::vector<Process>& cs, const std::vector<NameSet>& fn,
                const std::vector<std::size_t>& group, const std::vector<CrossEdge>& cross) {
    if (group.size() == 1) return rw(restrict_to(g, fn, group), cs[group[0]]);
    std::size_t head = group[0];
    std::vector<std::size_t> rest(group.begin() + 1, group.end());
    STContext g1 = restrict_to(g, fn, {head});
    STContext g2 = restrict_to(g, fn, rest);
    STContext left_ends, right_ends;
    std::vector<CrossEdge> inner;
    std::vector<std::pair<Name, Name>> zs;  // (head end, rest end)
    for (const auto& e : cross) {
      bool in_l = std::count(group.begin(), group.end(), e.left) > 0;
      bool in_r = std::count(group.begin(), group.end(), e.right) > 0;
      if (!in_l || !in_r) continue;
      if (e.left == head) {
        left_ends.set(e.x, e.t);
        right_ends.set(e.y, dual(e.t));
        zs.emplace_back(e.x, e.y);
      } else if (e.right == head) {
        left_ends.set(e.y, dual(e.t));
        right_ends.set(e.x, e.t);
        zs.emplace_back(e.y, e.x);
      } else {
        inner.push_back(e);
      }
    }
    STContext zl, zr;
    std::vector<Name> fresh;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      fresh.push_back(fresh_name("%z", avoid_));
      zl.set(fresh[i], *left_ends.find(zs[i].first));
      zr.set(fresh[i], *right_ends.find(zs[i].second));
    }
    STContext gl = g1;
    for (const auto& [n, t] : left_ends) gl.set(n, t);
    Process pl = rw(gl, cs[head]);
    for (std::size_t i = 0; i < zs.size(); ++i) pl = rename(pl, zs[i].first, fresh[i]);
    STContext gr = g2;
    for (const auto& [n, t] : right_ends) gr.set(n, t);
    Process pr = cluster(gr, cs, fn, rest, inner);
    for (std::size_t i = 0; i < zs.size(); ++i) pr = rename(pr, zs[i].second, fresh[i]);
    Process left = Process::par(characteristic_of(g2), catalyzer(zl).plug(pl));
    Process right = Process::par(characteristic_of(g1), catalyzer(zr).plug(pr));
    Name k = fresh_name("%k", avoid_);
    return fakepar(left, right, k, inx_);
  }

  NameSet avoid_;
  std::string inx_;
};

}  // namespace

Process rewrite(const STContext& g, const Process& p, const RewriteOptions& opts) {
  STResult st = check_st(g, p);
  if (st.error) throw TypeErrorException(*st.error);
  Rewriter r(names_with_context(p, g), opts.inx);
  return r.rw(g, p);
}

}  // namespace sesstk
