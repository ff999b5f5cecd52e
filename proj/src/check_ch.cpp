#include "sesstk/check_ch.hpp"

#include <map>
#include <numeric>

#include "unify.hpp"

namespace sesstk {

using detail::UTerm;
using detail::Unifier;

std::string CHDerivation::dump(int indent) const {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += rule + "  " + process + " |- [" + render_context(context) + "]\n";
  for (const auto& c : children) out += c.dump(indent + 1);
  return out;
}

namespace {

using K = Process::Kind;
using TermCtx = std::map<Name, UTerm>;

struct Node {
  std::string rule;
  std::string process;
  TermCtx ctx;
  std::vector<Node> children;
};

/// A parallel cluster whose cut structure is checked once all types are known.
struct SoupRecord {
  std::string location;
  NameSet restricted;
  std::vector<TermCtx> components;
  /// Bound output: subject and object must end up in different trees.
  std::optional<std::pair<Name, Name>> separate;
};

class Inference {
 public:
  Inference() : u_(detail::ctype_signature()) {}

  Unifier& unifier() { return u_; }

  TermCtx soup(const Process& p, Node& node, std::optional<std::pair<Name, Name>> separate = std::nullopt) {
    Soup s = flatten(p);
    node.process = render(p);
    if (s.components.size() == 1 && s.restrictions.empty() && !separate) {
      node = component(s.components[0]);
      return node.ctx;
    }
    SoupRecord rec;
    rec.location = node.process;
    rec.separate = std::move(separate);
    for (const auto& r : s.restrictions) {
      if (r.pair)
        type_fail(TypeErrorKind::DialectViolation, r.x, rec.location, "session restriction in a CH process");
      rec.restricted.insert(r.x);
    }
    for (const auto& c : s.components) {
      node.children.push_back(component(c));
      rec.components.push_back(node.children.back().ctx);
    }
    std::map<Name, std::vector<UTerm>> occ;
    for (const auto& ctx : rec.components)
      for (const auto& [n, t] : ctx) occ[n].push_back(t);
    TermCtx out;
    bool cut = false;
    for (const auto& [n, ts] : occ) {
      bool bound = rec.restricted.count(n) > 0;
      if (bound && ts.size() == 2) {
        cut = true;
        if (!u_.unify(ts[0], u_.dual(ts[1])))
          type_fail(TypeErrorKind::DualityMismatch, n, rec.location,
                    "the two ends of " + n + " are not dual: " + u_.last_error());
        continue;
      }
      if (ts.size() >= 2 || bound) {
        for (const auto& t : ts) require_bullet(t, n, rec.location);
        if (bound) continue;
      }
      out[n] = ts.size() == 1 ? ts[0] : UTerm::con("bullet");
    }
    node.rule = cut ? "T-cut" : "T-mix";
    node.ctx = out;
    soups_.push_back(std::move(rec));
    return out;
  }

  void require_bullet(const UTerm& t, const Name& n, const std::string& at) {
    if (!u_.unify(t, UTerm::con("bullet")))
      type_fail(TypeErrorKind::LinearityViolation, n, at,
                n + " is shared between parallel components at non-bullet type " + u_.render(t));
  }

  UTerm take(TermCtx& ctx, const Name& n) {
    auto it = ctx.find(n);
    if (it == ctx.end()) return UTerm::con("bullet");
    UTerm t = it->second;
    ctx.erase(it);
    return t;
  }

  Node component(const Process& c) {
    Node node;
    node.process = render(c);
    const std::string& at = node.process;
    switch (c.kind) {
      case K::Inact: node.rule = "T-bullet"; return node;
      case K::Fwd: {
        if (c.subject == c.other)
          type_fail(TypeErrorKind::LinearityViolation, c.subject, at, "forwarder links a name to itself");
        node.rule = "T-fwd";
        UTerm a = u_.fresh();
        node.ctx[c.subject] = a;
        node.ctx[c.other] = u_.dual(a);
        return node;
      }
      case K::Out: {
        if (!c.bound)
          type_fail(TypeErrorKind::FreeOutputRejected, c.subject, at, "free output; translate the process first");
        const Name& y = c.values[0].name;
        if (y == c.subject) type_fail(TypeErrorKind::LinearityViolation, y, at, "output binder equals subject");
        node.rule = "T-tensor";
        node.children.emplace_back();
        TermCtx ctx = soup(c.cont(), node.children.back(), std::pair{c.subject, y});
        UTerm a = take(ctx, y);
        UTerm b = take(ctx, c.subject);
        ctx[c.subject] = UTerm::con("tensor", {a, b});
        node.ctx = std::move(ctx);
        return node;
      }
      case K::In: {
        const Name& y = c.binders.at(0);
        if (c.binders.size() != 1) type_fail(TypeErrorKind::DialectViolation, c.subject, at, "polyadic input");
        if (y == c.subject) type_fail(TypeErrorKind::LinearityViolation, y, at, "input binder equals subject");
        node.rule = "T-par";
        node.children.emplace_back();
        TermCtx ctx = soup(c.cont(), node.children.back());
        UTerm a = take(ctx, y);
        UTerm b = take(ctx, c.subject);
        ctx[c.subject] = UTerm::con("par", {a, b});
        node.ctx = std::move(ctx);
        return node;
      }
      case K::Sel: {
        node.rule = "T-plus";
        node.children.emplace_back();
        TermCtx ctx = soup(c.cont(), node.children.back());
        UTerm b = take(ctx, c.subject);
        ctx[c.subject] = UTerm::choice("plus", {{c.labels[0], b}}, u_.fresh_row());
        node.ctx = std::move(ctx);
        return node;
      }
      case K::Branch: {
        node.rule = "T-with";
        std::vector<TermCtx> ctxs;
        for (const auto& child : c.children) {
          node.children.emplace_back();
          ctxs.push_back(soup(child, node.children.back()));
        }
        std::vector<std::pair<std::string, UTerm>> alts;
        for (std::size_t i = 0; i < ctxs.size(); ++i) alts.emplace_back(c.labels[i], take(ctxs[i], c.subject));
        TermCtx out;
        for (const auto& ctx : ctxs)
          for (const auto& [n, t] : ctx) out.emplace(n, t);
        for (auto& [n, t] : out) {
          for (auto& ctx : ctxs) {
            UTerm other = ctx.count(n) ? ctx.at(n) : UTerm::con("bullet");
            if (!u_.unify(t, other))
              type_fail(TypeErrorKind::TypeMismatch, n, at,
                        "branches disagree on the type of " + n + ": " + u_.last_error());
          }
        }
        out[c.subject] = UTerm::choice("with", std::move(alts));
        node.ctx = std::move(out);
        return node;
      }
      case K::Case: type_fail(TypeErrorKind::DialectViolation, "", at, "case");
      case K::ResSession: type_fail(TypeErrorKind::DialectViolation, c.subject, at, "session restriction");
      default: break;
    }
    return node;
  }

  bool is_bullet(const UTerm& t) {
    UTerm r = u_.walk(t);
    if (r.kind == UTerm::Kind::Var) {
      u_.unify(r, UTerm::con("bullet"));
      return true;
    }
    return r.kind == UTerm::Kind::Con && r.ctor == "bullet";
  }

  /// Cut edges must form a forest; a bound output's two sides must not meet.
  void finish() {
    for (const auto& rec : soups_) {
      std::size_t n = rec.components.size();
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
      };
      for (const auto& name : rec.restricted) {
        std::vector<std::size_t> where;
        for (std::size_t i = 0; i < n; ++i)
          if (rec.components[i].count(name)) where.push_back(i);
        if (where.size() != 2 || is_bullet(rec.components[where[0]].at(name))) continue;
        std::size_t a = find(where[0]);
        std::size_t b = find(where[1]);
        if (a == b)
          type_fail(TypeErrorKind::CutArityError, name, rec.location,
                    "restricted name " + name + " closes a cycle: the two components already share a session");
        parent[a] = b;
      }
      if (!rec.separate) continue;
      const auto& [x, y] = *rec.separate;
      auto sides = [&](const Name& v) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n; ++i) {
          auto it = rec.components[i].find(v);
          if (it != rec.components[i].end() && !is_bullet(it->second)) out.push_back(find(i));
        }
        return out;
      };
      for (std::size_t a : sides(x))
        for (std::size_t b : sides(y))
          if (a == b)
            type_fail(TypeErrorKind::CutArityError, y, rec.location,
                      "output object " + y + " and continuation on " + x + " are not separable");
    }
  }

  CHDerivation to_derivation(const Node& n) {
    CHDerivation d;
    d.rule = n.rule;
    d.process = n.process;
    for (const auto& [name, t] : n.ctx) d.context.set(name, detail::to_ctype(u_.resolve(t)));
    for (const auto& c : n.children) d.children.push_back(to_derivation(c));
    return d;
  }

  CHContext resolve_ctx(const TermCtx& ctx) {
    CHContext out;
    for (const auto& [name, t] : ctx) out.set(name, detail::to_ctype(u_.resolve(t)));
    return out;
  }

 private:
  Unifier u_;
  std::vector<SoupRecord> soups_;
};

}  // namespace

CHResult check_ch(const Process& p, const CHContext& d) {
  CHResult r;
  try {
    Inference inf;
    Node root;
    TermCtx ctx = inf.soup(p, root);
    Unifier& u = inf.unifier();
    std::string at = render(p);
    for (const auto& [n, t] : ctx) {
      const CType* given = d.find(n);
      if (!given) type_fail(TypeErrorKind::UnboundName, n, at, "name " + n + " is not in the context");
      if (!u.unify(t, detail::to_term(*given)))
        type_fail(TypeErrorKind::TypeMismatch, n, at,
                  n + " is used at " + u.render(t) + " but declared " + render(*given) + ": " + u.last_error());
    }
    for (const auto& [n, t] : d)
      if (!ctx.count(n) && t.kind != CType::Kind::Bullet)
        type_fail(TypeErrorKind::LinearityViolation, n, at, n + " is unused but declared " + render(t));
    inf.finish();
    r.derivation = inf.to_derivation(root);
  } catch (const TypeErrorException& e) {
    r.error = e.error();
  }
  return r;
}

CHInference infer_ch(const Process& p) {
  CHInference r;
  try {
    Inference inf;
    Node root;
    TermCtx ctx = inf.soup(p, root);
    inf.finish();
    r.context = inf.resolve_ctx(ctx);
  } catch (const TypeErrorException& e) {
    r.error = e.error();
  }
  return r;
}

bool ch_cotypable(const Process& a, const Process& b) {
  try {
    Inference inf;
    Node ra, rb;
    TermCtx ca = inf.soup(a, ra);
    TermCtx cb = inf.soup(b, rb);
    Unifier& u = inf.unifier();
    for (const auto& [n, t] : ca)
      if (!u.unify(t, cb.count(n) ? cb.at(n) : UTerm::con("bullet"))) return false;
    for (const auto& [n, t] : cb)
      if (!ca.count(n) && !u.unify(t, UTerm::con("bullet"))) return false;
    inf.finish();
    return true;
  } catch (const TypeErrorException&) {
    return false;
  }
}

}  // namespace sesstk
