#include "sesstk/check_st.hpp"

namespace sesstk {

std::string STDerivation::dump(int indent) const {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += rule + "  [" + render_context(context) + "] |- " + process + "  leftover [" +
         render_context(leftover) + "]\n";
  for (const auto& c : children) out += c.dump(indent + 1);
  return out;
}

namespace {

using K = Process::Kind;

class Checker {
 public:
  STContext check(const STContext& g, const Process& p, STDerivation& node) {
    node.process = render(p);
    node.context = g;
    switch (p.kind) {
      case K::Inact:
        node.rule = "T-Nil";
        node.leftover = g;
        return g;
      case K::Par: {
        node.rule = "T-Par";
        node.children.resize(2);
        STContext mid = check(g, p.children[0], node.children[0]);
        node.leftover = check(mid, p.children[1], node.children[1]);
        return node.leftover;
      }
      case K::Out: return check_out(g, p, node);
      case K::In: return check_in(g, p, node);
      case K::Sel: return check_sel(g, p, node);
      case K::Branch: return check_branch(g, p, node);
      case K::ResSession: return check_res(g, p, node);
      case K::Res: type_fail(TypeErrorKind::DialectViolation, p.subject, node.process, "single restriction");
      case K::Fwd: type_fail(TypeErrorKind::DialectViolation, p.subject, node.process, "forwarder");
      case K::Case: type_fail(TypeErrorKind::DialectViolation, "", node.process, "case");
    }
    return g;
  }

 private:
  static const SessionType& lookup(const STContext& g, const Name& x, const std::string& at) {
    const SessionType* t = g.find(x);
    if (!t) type_fail(TypeErrorKind::UnboundName, x, at, "name " + x + " is not in the context");
    return *t;
  }

  static void expect_kind(const SessionType& t, SessionType::Kind k, const Name& x, const std::string& at,
                          const char* what) {
    if (t.kind != k)
      type_fail(TypeErrorKind::TypeMismatch, x, at,
                std::string("expected ") + what + " type for " + x + ", found " + render(t));
  }

  /// After a continuation, a name introduced or advanced by the prefix must be used up.
  static void require_done(STContext& out, const Name& x, const std::string& at) {
    if (const SessionType* t = out.find(x)) {
      if (!t->is_end())
        type_fail(TypeErrorKind::LinearityViolation, x, at, x + " left unused at " + render(*t));
      out.erase(x);
    }
  }

  static void restore(STContext& out, const Name& x, const std::optional<SessionType>& saved) {
    if (saved) out.set(x, *saved);
  }

  static std::optional<SessionType> take(STContext& g, const Name& x) {
    std::optional<SessionType> saved;
    if (const SessionType* t = g.find(x)) saved = *t;
    g.erase(x);
    return saved;
  }

  STContext continue_with(STContext g, const Name& x, SessionType s, const Process& cont, STDerivation& node,
                          const std::string& at) {
    g.set(x, std::move(s));
    node.children.resize(1);
    STContext out = check(g, cont, node.children[0]);
    require_done(out, x, at);
    return out;
  }

  STContext check_out(const STContext& g, const Process& p, STDerivation& node) {
    node.rule = "T-Out";
    const std::string& at = node.process;
    const SessionType t = lookup(g, p.subject, at);
    expect_kind(t, SessionType::Kind::Out, p.subject, at, "an output");
    STContext rest = g;
    rest.erase(p.subject);
    const Value& v = p.values.at(0);
    if (!v.is_chan()) type_fail(TypeErrorKind::DialectViolation, "", at, "variant value");
    if (v.name == p.subject)
      type_fail(TypeErrorKind::LinearityViolation, v.name, at, "a session endpoint cannot be sent over itself");
    const SessionType& tv = lookup(rest, v.name, at);
    if (!(tv == t.payload()))
      type_fail(TypeErrorKind::TypeMismatch, v.name, at,
                "expected " + render(t.payload()) + " for " + v.name + ", found " + render(tv));
    if (!tv.is_end()) rest.erase(v.name);
    node.leftover = continue_with(std::move(rest), p.subject, t.cont(), p.cont(), node, at);
    return node.leftover;
  }

  STContext check_in(const STContext& g, const Process& p, STDerivation& node) {
    node.rule = "T-In";
    const std::string& at = node.process;
    const SessionType t = lookup(g, p.subject, at);
    expect_kind(t, SessionType::Kind::In, p.subject, at, "an input");
    const Name& y = p.binders.at(0);
    if (y == p.subject)
      type_fail(TypeErrorKind::LinearityViolation, y, at, "input binder coincides with its subject");
    STContext inner = g;
    inner.erase(p.subject);
    std::optional<SessionType> saved = take(inner, y);
    inner.set(y, t.payload());
    STContext out = continue_with(std::move(inner), p.subject, t.cont(), p.cont(), node, at);
    require_done(out, y, at);
    restore(out, y, saved);
    node.leftover = out;
    return out;
  }

  STContext check_sel(const STContext& g, const Process& p, STDerivation& node) {
    node.rule = "T-Sel";
    const std::string& at = node.process;
    const SessionType t = lookup(g, p.subject, at);
    expect_kind(t, SessionType::Kind::Select, p.subject, at, "a select");
    const SessionType* s = t.alt(p.labels[0]);
    if (!s)
      type_fail(TypeErrorKind::TypeMismatch, p.subject, at, "label " + p.labels[0] + " not offered by " + render(t));
    node.leftover = continue_with(g, p.subject, *s, p.cont(), node, at);
    return node.leftover;
  }

  STContext check_branch(const STContext& g, const Process& p, STDerivation& node) {
    node.rule = "T-Brch";
    const std::string& at = node.process;
    const SessionType t = lookup(g, p.subject, at);
    expect_kind(t, SessionType::Kind::Branch, p.subject, at, "a branch");
    if (t.labels != p.labels)
      type_fail(TypeErrorKind::TypeMismatch, p.subject, at, "branch labels differ from " + render(t));
    node.children.resize(p.children.size());
    std::optional<STContext> common;
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      STContext inner = g;
      inner.set(p.subject, t.args[i]);
      STContext out = check(inner, p.children[i], node.children[i]);
      require_done(out, p.subject, at);
      if (common && !same_bindings(*common, out))
        type_fail(TypeErrorKind::LinearityViolation, p.subject, at,
                  "branches use the context differently: [" + render_context(*common) + "] vs [" +
                      render_context(out) + "]");
      if (!common) common = out;
    }
    node.leftover = *common;
    return *common;
  }

  static bool same_bindings(const STContext& a, const STContext& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [n, t] : a) {
      const SessionType* u = b.find(n);
      if (!u || !(*u == t)) return false;
    }
    return true;
  }

  STContext check_res(const STContext& g, const Process& p, STDerivation& node) {
    node.rule = "T-Res";
    const std::string& at = node.process;
    if (!p.st)
      type_fail(TypeErrorKind::MissingAnnotation, p.subject, at,
                "restriction new(" + p.subject + "," + p.other + ") needs a session type");
    STContext inner = g;
    std::optional<SessionType> saved_x = take(inner, p.subject);
    std::optional<SessionType> saved_y = take(inner, p.other);
    inner.set(p.subject, *p.st);
    inner.set(p.other, dual(*p.st));
    node.children.resize(1);
    STContext out = check(inner, p.cont(), node.children[0]);
    require_done(out, p.subject, at);
    require_done(out, p.other, at);
    restore(out, p.subject, saved_x);
    restore(out, p.other, saved_y);
    node.leftover = out;
    return out;
  }
};

}  // namespace

STResult check_st(const STContext& g, const Process& p) {
  STResult r;
  try {
    STContext out = Checker().check(g, p, r.derivation);
    for (const auto& [n, t] : out)
      if (!t.is_end())
        type_fail(TypeErrorKind::LinearityViolation, n, render(p), n + " left unused at " + render(t));
  } catch (const TypeErrorException& e) {
    r.error = e.error();
  }
  return r;
}

}  // namespace sesstk
