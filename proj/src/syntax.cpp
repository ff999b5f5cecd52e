#include "sesstk/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "lexer.hpp"

namespace sesstk {

using detail::Lexer;
using detail::Token;

const char* to_string(Dialect d) {
  switch (d) {
    case Dialect::Session: return "session";
    case Dialect::CH: return "ch";
    case Dialect::PI: return "pi";
  }
  return "?";
}

std::optional<Dialect> parse_dialect(std::string_view text) {
  std::string t(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "session" || t == "st") return Dialect::Session;
  if (t == "ch") return Dialect::CH;
  if (t == "pi" || t == "kb") return Dialect::PI;
  return std::nullopt;
}

// --- Constructors ------------------------------------------------------------------

Value Value::chan(Name n) {
  Value v;
  v.name = std::move(n);
  return v;
}

Value Value::variant(std::string label, Value payload) {
  Value v;
  v.kind = Kind::Variant;
  v.name = std::move(label);
  v.inner.push_back(std::move(payload));
  return v;
}

Process Process::inact() { return Process{}; }

Process Process::out(Name x, std::vector<Value> vs, Process cont) {
  Process p;
  p.kind = Kind::Out;
  p.subject = std::move(x);
  p.values = std::move(vs);
  p.children.push_back(std::move(cont));
  return p;
}

Process Process::bound_out(Name x, Name y, Process cont) {
  Process p = out(std::move(x), {Value::chan(std::move(y))}, std::move(cont));
  p.bound = true;
  return p;
}

Process Process::in(Name x, std::vector<Name> ys, Process cont) {
  Process p;
  p.kind = Kind::In;
  p.subject = std::move(x);
  p.binders = std::move(ys);
  p.children.push_back(std::move(cont));
  return p;
}

Process Process::sel(Name x, std::string label, Process cont) {
  Process p;
  p.kind = Kind::Sel;
  p.subject = std::move(x);
  p.labels.push_back(std::move(label));
  p.children.push_back(std::move(cont));
  return p;
}

Process Process::branch(Name x, std::vector<std::pair<std::string, Process>> alts) {
  if (alts.empty()) throw std::invalid_argument("branch: empty label set");
  std::sort(alts.begin(), alts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Process p;
  p.kind = Kind::Branch;
  p.subject = std::move(x);
  for (auto& [l, q] : alts) {
    if (!p.labels.empty() && p.labels.back() == l)
      throw std::invalid_argument("branch: duplicate label " + l);
    p.labels.push_back(l);
    p.children.push_back(std::move(q));
  }
  return p;
}

Process Process::par(Process a, Process b) {
  Process p;
  p.kind = Kind::Par;
  p.children = {std::move(a), std::move(b)};
  return p;
}

Process Process::par_all(std::vector<Process> parts) {
  if (parts.empty()) return inact();
  Process acc = std::move(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) acc = par(std::move(acc), std::move(parts[i]));
  return acc;
}

Process Process::res_session(Name x, Name y, std::optional<SessionType> t, Process body) {
  Process p;
  p.kind = Kind::ResSession;
  p.subject = std::move(x);
  p.other = std::move(y);
  p.st = std::move(t);
  p.children.push_back(std::move(body));
  return p;
}

Process Process::res(Name x, Process body, std::optional<UsageType> t) {
  Process p;
  p.kind = Kind::Res;
  p.subject = std::move(x);
  p.ut = std::move(t);
  p.children.push_back(std::move(body));
  return p;
}

Process Process::fwd(Name x, Name y) {
  Process p;
  p.kind = Kind::Fwd;
  p.subject = std::move(x);
  p.other = std::move(y);
  return p;
}

Process Process::case_of(Value v, std::vector<std::tuple<std::string, Name, Process>> alts) {
  if (alts.empty()) throw std::invalid_argument("case: empty label set");
  std::sort(alts.begin(), alts.end(),
            [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  Process p;
  p.kind = Kind::Case;
  p.values.push_back(std::move(v));
  for (auto& [l, b, q] : alts) {
    if (!p.labels.empty() && p.labels.back() == l)
      throw std::invalid_argument("case: duplicate label " + l);
    p.labels.push_back(l);
    p.binders.push_back(b);
    p.children.push_back(std::move(q));
  }
  return p;
}

const Process* Process::alt(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return &children[i];
  return nullptr;
}

// --- Parsing -------------------------------------------------------------------------

namespace {

bool is_keyword(std::string_view w) { return w == "new" || w == "fwd" || w == "case"; }

class ProcessParser {
 public:
  ProcessParser(std::string_view text, Dialect d) : lx_(text), dialect_(d) {}

  Process parse() {
    Process p = parse_par();
    if (!lx_.at_end()) lx_.fail("trailing input");
    return p;
  }

 private:
  Process parse_par() {
    Process left = parse_unary();
    while (lx_.accept_sym('|')) left = Process::par(std::move(left), parse_unary());
    return left;
  }

  Name name() {
    if (lx_.peek().kind == Token::Kind::Ident && is_keyword(lx_.peek().text))
      lx_.fail("expected a name");
    return lx_.expect_name();
  }

  Value value() {
    Name n = name();
    if (lx_.accept_sym('(')) {
      Value inner = value();
      lx_.expect_sym(')');
      return Value::variant(std::move(n), std::move(inner));
    }
    return Value::chan(std::move(n));
  }

  Process parse_unary() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Kind::Number) {
      if (t.text != "0") lx_.fail("expected a process");
      lx_.next();
      return Process::inact();
    }
    if (lx_.accept_sym('(')) {
      Process p = parse_par();
      lx_.expect_sym(')');
      return p;
    }
    if (lx_.accept_ident("new")) return parse_new();
    if (lx_.accept_ident("fwd")) {
      Name x = name();
      Name y = name();
      return Process::fwd(std::move(x), std::move(y));
    }
    if (lx_.accept_ident("case")) return parse_case();
    if (t.kind != Token::Kind::Ident) lx_.fail("expected a process");
    Name x = name();
    if (lx_.accept_sym('!')) {
      lx_.expect_sym('(');
      std::vector<Value> vs{value()};
      while (lx_.accept_sym(',')) vs.push_back(value());
      lx_.expect_sym(')');
      lx_.expect_sym('.');
      Process cont = parse_unary();
      if (dialect_ == Dialect::CH && vs.size() == 1 && vs[0].is_chan())
        return Process::bound_out(std::move(x), vs[0].name, std::move(cont));
      return Process::out(std::move(x), std::move(vs), std::move(cont));
    }
    if (lx_.accept_sym('?')) {
      lx_.expect_sym('(');
      std::vector<Name> ys{name()};
      while (lx_.accept_sym(',')) {
        ys.push_back(name());
        if (ys.back() == ys.front()) lx_.fail("binders of an input must be distinct");
      }
      lx_.expect_sym(')');
      lx_.expect_sym('.');
      return Process::in(std::move(x), std::move(ys), parse_unary());
    }
    if (lx_.accept_sym('#')) {
      std::string l = lx_.expect_name();
      lx_.expect_sym('.');
      return Process::sel(std::move(x), std::move(l), parse_unary());
    }
    if (lx_.accept_sym('&')) {
      lx_.expect_sym('{');
      std::vector<std::pair<std::string, Process>> alts;
      do {
        std::string l = lx_.expect_name();
        lx_.expect_sym(':');
        alts.emplace_back(std::move(l), parse_par());
      } while (lx_.accept_sym(','));
      lx_.expect_sym('}');
      try {
        return Process::branch(std::move(x), std::move(alts));
      } catch (const std::invalid_argument& e) {
        lx_.fail(e.what());
      }
    }
    lx_.fail("expected '!', '?', '#' or '&' after a subject");
  }

  Process parse_new() {
    if (!lx_.accept_sym('(')) {
      Name x = name();
      return Process::res(std::move(x), parse_unary());
    }
    Name x = name();
    if (lx_.accept_sym(',')) {
      Name y = name();
      if (y == x) lx_.fail("restricted endpoints must be distinct");
      std::optional<SessionType> t;
      if (lx_.accept_sym(':')) t = detail::parse_st_from(lx_);
      lx_.expect_sym(')');
      return Process::res_session(std::move(x), std::move(y), std::move(t), parse_unary());
    }
    std::optional<UsageType> t;
    if (lx_.accept_sym(':')) t = detail::parse_ut_from(lx_);
    lx_.expect_sym(')');
    return Process::res(std::move(x), parse_unary(), std::move(t));
  }

  Process parse_case() {
    Value v = value();
    lx_.expect_ident("of");
    lx_.expect_sym('{');
    std::vector<std::tuple<std::string, Name, Process>> alts;
    do {
      std::string l = lx_.expect_name();
      lx_.expect_sym('(');
      Name b = name();
      lx_.expect_sym(')');
      if (lx_.peek().kind != Token::Kind::Arrow) lx_.fail("expected '->'");
      lx_.next();
      alts.emplace_back(std::move(l), std::move(b), parse_par());
    } while (lx_.accept_sym(','));
    lx_.expect_sym('}');
    try {
      return Process::case_of(std::move(v), std::move(alts));
    } catch (const std::invalid_argument& e) {
      lx_.fail(e.what());
    }
  }

  Lexer lx_;
  Dialect dialect_;
};

}  // namespace

Process parse_process(std::string_view text, Dialect dialect) {
  Process p = ProcessParser(text, dialect).parse();
  validate(p, dialect);
  return p;
}

// --- Rendering -----------------------------------------------------------------------

std::string render(const Value& v) {
  if (v.is_chan()) return v.name;
  return v.name + "(" + render(v.payload()) + ")";
}

namespace {

std::string render_unary(const Process& p) {
  std::string s = render(p);
  return p.kind == Process::Kind::Par ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const Process& p) {
  using K = Process::Kind;
  switch (p.kind) {
    case K::Inact: return "0";
    case K::Out: {
      std::string out = p.subject + "!(";
      for (std::size_t i = 0; i < p.values.size(); ++i) out += (i ? ", " : "") + render(p.values[i]);
      return out + ")." + render_unary(p.cont());
    }
    case K::In: {
      std::string out = p.subject + "?(";
      for (std::size_t i = 0; i < p.binders.size(); ++i) out += (i ? ", " : "") + p.binders[i];
      return out + ")." + render_unary(p.cont());
    }
    case K::Sel: return p.subject + "#" + p.labels[0] + "." + render_unary(p.cont());
    case K::Branch: {
      std::string out = p.subject + "&{";
      for (std::size_t i = 0; i < p.labels.size(); ++i)
        out += (i ? ", " : "") + p.labels[i] + ": " + render(p.children[i]);
      return out + "}";
    }
    case K::Par: {
      const Process& r = p.children[1];
      return render(p.children[0]) + " | " + render_unary(r);
    }
    case K::ResSession: {
      std::string out = "new(" + p.subject + "," + p.other;
      if (p.st) out += ":" + render(*p.st);
      return out + ") " + render_unary(p.cont());
    }
    case K::Res:
      if (p.ut) return "new(" + p.subject + ":" + render(*p.ut) + ") " + render_unary(p.cont());
      return "new " + p.subject + " " + render_unary(p.cont());
    case K::Fwd: return "fwd " + p.subject + " " + p.other;
    case K::Case: {
      std::string out = "case " + render(p.values[0]) + " of {";
      for (std::size_t i = 0; i < p.labels.size(); ++i)
        out += (i ? ", " : "") + p.labels[i] + "(" + p.binders[i] + ")->" + render(p.children[i]);
      return out + "}";
    }
  }
  return "?";
}

// --- Dialects --------------------------------------------------------------------------

namespace {

bool has_variant(const std::vector<Value>& vs) {
  return std::any_of(vs.begin(), vs.end(), [](const Value& v) { return !v.is_chan(); });
}

void validate_rec(const Process& p, Dialect d) {
  using K = Process::Kind;
  const std::string dn = to_string(d);
  auto reject = [&](const std::string& construct) { throw DialectError(construct, dn); };
  switch (p.kind) {
    case K::Inact:
    case K::Par: break;
    case K::Out:
      if (d != Dialect::PI && has_variant(p.values)) reject("variant value");
      if (d != Dialect::PI && p.values.size() != 1) reject("polyadic output");
      if (p.values.empty() || p.values.size() > 2) reject("output arity " + std::to_string(p.values.size()));
      if (p.bound && (d != Dialect::CH || !p.values[0].is_chan())) reject("bound output");
      break;
    case K::In:
      if (d != Dialect::PI && p.binders.size() != 1) reject("polyadic input");
      if (p.binders.empty() || p.binders.size() > 2) reject("input arity " + std::to_string(p.binders.size()));
      break;
    case K::Sel:
      if (d == Dialect::PI) reject("select");
      break;
    case K::Branch:
      if (d == Dialect::PI) reject("branch");
      break;
    case K::ResSession:
      if (d != Dialect::Session) reject("new(x,y)");
      break;
    case K::Res:
      if (d == Dialect::Session) reject("new x");
      break;
    case K::Fwd:
      if (d != Dialect::CH) reject("fwd");
      break;
    case K::Case:
      if (d != Dialect::PI) reject("case");
      break;
  }
  for (const auto& c : p.children) validate_rec(c, d);
}

}  // namespace

void validate(const Process& p, Dialect dialect) { validate_rec(p, dialect); }

bool is_valid(const Process& p, Dialect dialect) {
  try {
    validate(p, dialect);
    return true;
  } catch (const DialectError&) {
    return false;
  }
}

// --- Names -------------------------------------------------------------------------------

namespace {

void value_names(const Value& v, NameSet& out) {
  if (v.is_chan()) {
    out.insert(v.name);
  } else {
    value_names(v.payload(), out);
  }
}

/// Names bound by p in child i.
std::vector<Name> bound_in_child(const Process& p, std::size_t i) {
  using K = Process::Kind;
  switch (p.kind) {
    case K::In: return p.binders;
    case K::Out:
      if (p.bound) return {p.values[0].name};
      return {};
    case K::ResSession: return {p.subject, p.other};
    case K::Res: return {p.subject};
    case K::Case: return {p.binders[i]};
    default: return {};
  }
}

void free_rec(const Process& p, NameSet& out) {
  using K = Process::Kind;
  switch (p.kind) {
    case K::Out:
    case K::In:
    case K::Sel:
    case K::Branch: out.insert(p.subject); break;
    case K::Fwd:
      out.insert(p.subject);
      out.insert(p.other);
      break;
    default: break;
  }
  if (!p.bound)
    for (const auto& v : p.values) value_names(v, out);
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    NameSet inner;
    free_rec(p.children[i], inner);
    for (const auto& b : bound_in_child(p, i)) inner.erase(b);
    out.insert(inner.begin(), inner.end());
  }
}

void all_rec(const Process& p, NameSet& out) {
  if (!p.subject.empty()) out.insert(p.subject);
  if (!p.other.empty()) out.insert(p.other);
  for (const auto& v : p.values) value_names(v, out);
  out.insert(p.binders.begin(), p.binders.end());
  for (const auto& c : p.children) all_rec(c, out);
}

}  // namespace

NameSet free_names(const Value& v) {
  NameSet out;
  value_names(v, out);
  return out;
}

NameSet free_names(const Process& p) {
  NameSet out;
  free_rec(p, out);
  return out;
}

NameSet all_names(const Process& p) {
  NameSet out;
  all_rec(p, out);
  return out;
}

std::size_t prefix_count(const Process& p) {
  std::size_t n = p.is_prefix() ? 1 : 0;
  for (const auto& c : p.children) n += prefix_count(c);
  return n;
}

std::size_t action_count(const Process& p) {
  std::size_t n = (p.is_prefix() || p.kind == Process::Kind::Fwd) ? 1 : 0;
  for (const auto& c : p.children) n += action_count(c);
  return n;
}

Name fresh_name(std::string_view base, NameSet& avoid) {
  for (unsigned i = 0;; ++i) {
    Name n = std::string(base) + std::to_string(i);
    if (avoid.insert(n).second) return n;
  }
}

std::vector<Process> par_components(const Process& p) {
  std::vector<Process> out;
  std::vector<const Process*> stack{&p};
  while (!stack.empty()) {
    const Process* q = stack.back();
    stack.pop_back();
    if (q->kind == Process::Kind::Par) {
      stack.push_back(&q->children[1]);
      stack.push_back(&q->children[0]);
    } else if (!q->is_inact()) {
      out.push_back(*q);
    }
  }
  return out;
}

// --- Substitution -----------------------------------------------------------------------

namespace {

Value subst_value(const Value& v, const Substitution& s) {
  if (v.is_chan()) {
    auto it = s.find(v.name);
    return it == s.end() ? v : it->second;
  }
  return Value::variant(v.name, subst_value(v.payload(), s));
}

Name subst_subject(const Name& x, const Substitution& s) {
  auto it = s.find(x);
  if (it == s.end()) return x;
  if (!it->second.is_chan())
    throw std::invalid_argument("cannot substitute variant " + render(it->second) + " for subject " + x);
  return it->second.name;
}

class Substituter {
 public:
  explicit Substituter(NameSet avoid) : avoid_(std::move(avoid)) {}

  Process run(const Process& p, const Substitution& s) {
    if (s.empty()) return p;
    using K = Process::Kind;
    Process q = p;
    switch (p.kind) {
      case K::Out:
      case K::In:
      case K::Sel:
      case K::Branch:
        q.subject = subst_subject(p.subject, s);
        break;
      case K::Fwd:
        q.subject = subst_subject(p.subject, s);
        q.other = subst_subject(p.other, s);
        return q;
      default: break;
    }
    if (!p.bound)
      for (auto& v : q.values) v = subst_value(v, s);
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      std::vector<Name> binders = bound_in_child(p, i);
      if (binders.empty()) {
        q.children[i] = run(p.children[i], s);
        continue;
      }
      Substitution inner = s;
      for (const auto& b : binders) inner.erase(b);
      NameSet fn_child = free_names(p.children[i]);
      NameSet incoming;
      for (const auto& [from, val] : inner)
        if (fn_child.count(from)) value_names(val, incoming);
      for (const auto& b : binders) {
        if (!incoming.count(b)) continue;
        Name fresh = fresh_name("%r", avoid_);
        inner[b] = Value::chan(fresh);
        rebind(q, i, b, fresh);
      }
      q.children[i] = run(p.children[i], inner);
    }
    return q;
  }

 private:
  static void rebind(Process& q, std::size_t child, const Name& from, const Name& to) {
    using K = Process::Kind;
    switch (q.kind) {
      case K::In:
        std::replace(q.binders.begin(), q.binders.end(), from, to);
        break;
      case K::Out: q.values[0].name = to; break;
      case K::ResSession:
        if (q.subject == from) q.subject = to;
        if (q.other == from) q.other = to;
        break;
      case K::Res: q.subject = to; break;
      case K::Case: q.binders[child] = to; break;
      default: break;
    }
  }

  NameSet avoid_;
};

}  // namespace

Process substitute(const Process& p, const Substitution& s) {
  NameSet avoid = all_names(p);
  for (const auto& [from, val] : s) {
    avoid.insert(from);
    value_names(val, avoid);
  }
  return Substituter(std::move(avoid)).run(p, s);
}

Process rename(const Process& p, const Name& from, const Name& to) {
  if (from == to) return p;
  return substitute(p, Substitution{{from, Value::chan(to)}});
}

// --- Alpha equivalence -------------------------------------------------------------------

namespace {

struct AlphaEnv {
  std::map<Name, int> left, right;
  int depth = 0;

  bool same(const Name& a, const Name& b) const {
    auto ia = left.find(a);
    auto ib = right.find(b);
    if (ia == left.end() && ib == right.end()) return a == b;
    if (ia == left.end() || ib == right.end()) return false;
    return ia->second == ib->second;
  }

  AlphaEnv bind(const std::vector<Name>& a, const std::vector<Name>& b) const {
    AlphaEnv e = *this;
    for (std::size_t i = 0; i < a.size(); ++i) {
      e.left[a[i]] = e.depth;
      e.right[b[i]] = e.depth;
      ++e.depth;
    }
    return e;
  }
};

bool alpha_value(const Value& a, const Value& b, const AlphaEnv& env) {
  if (a.kind != b.kind) return false;
  if (a.is_chan()) return env.same(a.name, b.name);
  return a.name == b.name && alpha_value(a.payload(), b.payload(), env);
}

bool alpha_rec(const Process& p, const Process& q, const AlphaEnv& env) {
  using K = Process::Kind;
  if (p.kind != q.kind || p.bound != q.bound || p.labels != q.labels || p.st != q.st || p.ut != q.ut ||
      p.values.size() != q.values.size() || p.binders.size() != q.binders.size() ||
      p.children.size() != q.children.size())
    return false;
  if (p.is_prefix() && !env.same(p.subject, q.subject)) return false;
  if (p.kind == K::Fwd) return env.same(p.subject, q.subject) && env.same(p.other, q.other);
  if (!p.bound)
    for (std::size_t i = 0; i < p.values.size(); ++i)
      if (!alpha_value(p.values[i], q.values[i], env)) return false;
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    AlphaEnv inner = env.bind(bound_in_child(p, i), bound_in_child(q, i));
    if (!alpha_rec(p.children[i], q.children[i], inner)) return false;
  }
  return true;
}

}  // namespace

bool alpha_equiv(const Process& p, const Process& q) { return alpha_rec(p, q, AlphaEnv{}); }

}  // namespace sesstk
