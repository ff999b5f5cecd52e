#include "sesstk/types.hpp"

#include <algorithm>
#include <stdexcept>

#include "lexer.hpp"

namespace sesstk {

using detail::Lexer;

const char* to_string(TypeErrorKind kind) {
  switch (kind) {
    case TypeErrorKind::UnboundName: return "UnboundName";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::LinearityViolation: return "LinearityViolation";
    case TypeErrorKind::DualityMismatch: return "DualityMismatch";
    case TypeErrorKind::FreeOutputRejected: return "FreeOutputRejected";
    case TypeErrorKind::CutArityError: return "CutArityError";
    case TypeErrorKind::ReliabilityFailure: return "ReliabilityFailure";
    case TypeErrorKind::SharingExceeded: return "SharingExceeded";
    case TypeErrorKind::PayloadMismatch: return "PayloadMismatch";
    case TypeErrorKind::MissingAnnotation: return "MissingAnnotation";
    case TypeErrorKind::DialectViolation: return "DialectViolation";
  }
  return "?";
}

std::string TypeError::record() const {
  std::string out = std::string("ERROR kind=") + to_string(kind) + " name=" +
                    (name.empty() ? "-" : name) + " at=" + (location.empty() ? "-" : location);
  if (kind == TypeErrorKind::SharingExceeded) out += " count=" + std::to_string(count);
  return out;
}

namespace {

template <class T>
void sort_alts(std::vector<std::pair<std::string, T>>& alts, const char* what) {
  if (alts.empty()) throw std::invalid_argument(std::string(what) + ": empty label set");
  std::sort(alts.begin(), alts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < alts.size(); ++i)
    if (alts[i].first == alts[i - 1].first)
      throw std::invalid_argument(std::string(what) + ": duplicate label " + alts[i].first);
}

template <class Node, class Alts>
Node make_choice(typename Node::Kind kind, Alts alts, const char* what) {
  sort_alts(alts, what);
  Node n;
  n.kind = kind;
  for (auto& [l, t] : alts) {
    n.labels.push_back(l);
    n.args.push_back(std::move(t));
  }
  return n;
}

}  // namespace

// --- SessionType -----------------------------------------------------------

SessionType SessionType::end() { return SessionType{}; }

SessionType SessionType::in(SessionType payload, SessionType cont) {
  SessionType t;
  t.kind = Kind::In;
  t.args = {std::move(payload), std::move(cont)};
  return t;
}

SessionType SessionType::out(SessionType payload, SessionType cont) {
  SessionType t;
  t.kind = Kind::Out;
  t.args = {std::move(payload), std::move(cont)};
  return t;
}

SessionType SessionType::branch(std::vector<std::pair<std::string, SessionType>> alts) {
  return make_choice<SessionType>(Kind::Branch, std::move(alts), "branch type");
}

SessionType SessionType::select(std::vector<std::pair<std::string, SessionType>> alts) {
  return make_choice<SessionType>(Kind::Select, std::move(alts), "select type");
}

const SessionType* SessionType::alt(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return &args[i];
  return nullptr;
}

std::size_t SessionType::depth() const {
  std::size_t d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return kind == Kind::End ? 0 : d + 1;
}

std::size_t SessionType::size() const {
  std::size_t s = 1;
  for (const auto& a : args) s += a.size();
  return s;
}

// --- CType -------------------------------------------------------------------

CType CType::bullet() { return CType{}; }

CType CType::tensor(CType a, CType b) {
  CType t;
  t.kind = Kind::Tensor;
  t.args = {std::move(a), std::move(b)};
  return t;
}

CType CType::par(CType a, CType b) {
  CType t;
  t.kind = Kind::Par;
  t.args = {std::move(a), std::move(b)};
  return t;
}

CType CType::with(std::vector<std::pair<std::string, CType>> alts) {
  return make_choice<CType>(Kind::With, std::move(alts), "with type");
}

CType CType::plus(std::vector<std::pair<std::string, CType>> alts) {
  return make_choice<CType>(Kind::Plus, std::move(alts), "plus type");
}

// --- Levels and usages ---------------------------------------------------------

bool level_leq(Level a, Level b) {
  if (b.omega) return true;
  if (a.omega) return false;
  return a.value <= b.value;
}

Level level_min(Level a, Level b) { return level_leq(a, b) ? a : b; }

std::string to_string(Level l) { return l.omega ? "OMEGA" : std::to_string(l.value); }

Usage Usage::empty() { return Usage{}; }

Usage Usage::act(Polarity pol, LevelTerm ob, LevelTerm cap, Usage cont) {
  Usage u;
  u.kind = Kind::Act;
  u.pol = pol;
  u.ob = ob;
  u.cap = cap;
  u.parts.push_back(std::move(cont));
  return u;
}

Usage Usage::par(Usage a, Usage b) {
  Usage u;
  u.kind = Kind::Par;
  u.parts = {std::move(a), std::move(b)};
  return u;
}

bool Usage::is_concrete() const {
  if (kind == Kind::Act && (ob.is_var || cap.is_var)) return false;
  return std::all_of(parts.begin(), parts.end(), [](const Usage& p) { return p.is_concrete(); });
}

std::size_t Usage::action_count() const {
  std::size_t n = kind == Kind::Act ? 1 : 0;
  for (const auto& p : parts) n += p.action_count();
  return n;
}

UsageType UsageType::chan(Usage u, std::vector<UsageType> payloads) {
  UsageType t;
  t.kind = Kind::Chan;
  t.usage = std::move(u);
  t.args = std::move(payloads);
  return t;
}

UsageType UsageType::variant(std::vector<std::pair<std::string, UsageType>> alts) {
  return make_choice<UsageType>(Kind::Variant, std::move(alts), "variant type");
}

bool UsageType::is_concrete() const {
  if (kind == Kind::Chan && !usage.is_concrete()) return false;
  return std::all_of(args.begin(), args.end(), [](const UsageType& a) { return a.is_concrete(); });
}

// --- Duality -------------------------------------------------------------------

SessionType dual(const SessionType& t) {
  switch (t.kind) {
    case SessionType::Kind::End: return t;
    case SessionType::Kind::In: return SessionType::out(t.payload(), dual(t.cont()));
    case SessionType::Kind::Out: return SessionType::in(t.payload(), dual(t.cont()));
    case SessionType::Kind::Branch:
    case SessionType::Kind::Select: {
      SessionType d = t;
      d.kind = t.kind == SessionType::Kind::Branch ? SessionType::Kind::Select
                                                   : SessionType::Kind::Branch;
      for (auto& a : d.args) a = dual(a);
      return d;
    }
  }
  return t;
}

CType dual(const CType& t) {
  CType d = t;
  switch (t.kind) {
    case CType::Kind::Bullet: return d;
    case CType::Kind::Tensor: d.kind = CType::Kind::Par; break;
    case CType::Kind::Par: d.kind = CType::Kind::Tensor; break;
    case CType::Kind::With: d.kind = CType::Kind::Plus; break;
    case CType::Kind::Plus: d.kind = CType::Kind::With; break;
  }
  for (auto& a : d.args) a = dual(a);
  return d;
}

Usage dual(const Usage& u) {
  Usage d = u;
  if (d.kind == Usage::Kind::Act) d.pol = opposite(d.pol);
  for (auto& p : d.parts) p = dual(p);
  return d;
}

UsageType dual(const UsageType& t) {
  if (t.kind == UsageType::Kind::Variant)
    throw std::invalid_argument("duality is undefined on variant types");
  return UsageType::chan(dual(t.usage), t.args);
}

// --- Encodings -------------------------------------------------------------------

namespace {

template <class NextLevels>
UsageType encode_su_impl(const SessionType& t, NextLevels& next) {
  using K = SessionType::Kind;
  if (t.kind == K::End) return UsageType::chan(Usage::empty());
  auto [o, k] = next();
  Polarity pol = (t.kind == K::In || t.kind == K::Branch) ? Polarity::In : Polarity::Out;
  Usage u = Usage::act(pol, o, k);
  switch (t.kind) {
    case K::In: {
      UsageType payload = encode_su_impl(t.payload(), next);
      UsageType cont = encode_su_impl(t.cont(), next);
      return UsageType::chan(u, {std::move(payload), std::move(cont)});
    }
    case K::Out: {
      UsageType payload = encode_su_impl(t.payload(), next);
      UsageType cont = encode_su_impl(dual(t.cont()), next);
      return UsageType::chan(u, {std::move(payload), std::move(cont)});
    }
    case K::Branch:
    case K::Select: {
      std::vector<std::pair<std::string, UsageType>> alts;
      for (std::size_t i = 0; i < t.labels.size(); ++i) {
        const SessionType& s = t.args[i];
        alts.emplace_back(t.labels[i],
                          encode_su_impl(t.kind == K::Branch ? s : dual(s), next));
      }
      return UsageType::chan(u, {UsageType::variant(std::move(alts))});
    }
    case K::End: break;
  }
  return UsageType::chan(Usage::empty());
}

}  // namespace

UsageType encode_su(const SessionType& t, LevelSupply& levels) {
  auto next = [&levels]() {
    LevelTerm o = levels.fresh();
    LevelTerm k = levels.fresh();
    return std::pair{o, k};
  };
  return encode_su_impl(t, next);
}

UsageType encode_su(const SessionType& t, unsigned ob, unsigned cap) {
  auto next = [ob, cap]() { return std::pair{LevelTerm::constant(ob), LevelTerm::constant(cap)}; };
  return encode_su_impl(t, next);
}

CType encode_c(const SessionType& t) {
  using K = SessionType::Kind;
  switch (t.kind) {
    case K::End: return CType::bullet();
    case K::In: return CType::par(encode_c(t.payload()), encode_c(t.cont()));
    case K::Out: return CType::tensor(encode_c(dual(t.payload())), encode_c(t.cont()));
    case K::Branch:
    case K::Select: {
      std::vector<std::pair<std::string, CType>> alts;
      for (std::size_t i = 0; i < t.labels.size(); ++i)
        alts.emplace_back(t.labels[i], encode_c(t.args[i]));
      return t.kind == K::Branch ? CType::with(std::move(alts)) : CType::plus(std::move(alts));
    }
  }
  return CType::bullet();
}

KBContext encode_ctx_su(const STContext& g, LevelSupply& levels, const Context<std::string>& rename) {
  KBContext out;
  for (const auto& [name, type] : g) {
    const std::string* target = rename.find(name);
    out.set(target ? *target : name, encode_su(type, levels));
  }
  return out;
}

CHContext encode_ctx_c(const STContext& g) {
  CHContext out;
  for (const auto& [name, type] : g) out.set(name, encode_c(type));
  return out;
}

// --- Rendering -------------------------------------------------------------------

namespace {

template <class T>
std::string render_alts(char head, const T& t) {
  std::string out(1, head);
  out += "{";
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    if (i) out += ", ";
    out += t.labels[i] + ": " + render(t.args[i]);
  }
  return out + "}";
}

std::string render_payload(const SessionType& t) {
  std::string s = render(t);
  return (t.kind == SessionType::Kind::In || t.kind == SessionType::Kind::Out) ? "(" + s + ")" : s;
}

std::string render_operand(const CType& t) {
  std::string s = render(t);
  return (t.kind == CType::Kind::Tensor || t.kind == CType::Kind::Par) ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const SessionType& t) {
  switch (t.kind) {
    case SessionType::Kind::End: return "end";
    case SessionType::Kind::In: return "?" + render_payload(t.payload()) + "." + render(t.cont());
    case SessionType::Kind::Out: return "!" + render_payload(t.payload()) + "." + render(t.cont());
    case SessionType::Kind::Branch: return render_alts('&', t);
    case SessionType::Kind::Select: return render_alts('+', t);
  }
  return "?";
}

std::string render(const CType& t) {
  switch (t.kind) {
    case CType::Kind::Bullet: return "bullet";
    case CType::Kind::Tensor: return render_operand(t.args[0]) + "*" + render_operand(t.args[1]);
    case CType::Kind::Par: return render_operand(t.args[0]) + " par " + render_operand(t.args[1]);
    case CType::Kind::With: return render_alts('&', t);
    case CType::Kind::Plus: return render_alts('+', t);
  }
  return "?";
}

std::string render(const LevelTerm& l) {
  return l.is_var ? "$" + std::to_string(l.n) : std::to_string(l.n);
}

std::string render(const Usage& u) {
  switch (u.kind) {
    case Usage::Kind::Empty: return "0";
    case Usage::Kind::Act: {
      std::string out = (u.pol == Polarity::In ? "?[" : "![") + render(u.ob) + "," + render(u.cap) + "]";
      if (!u.parts[0].is_empty()) out += "." + render(u.parts[0]);
      return out;
    }
    case Usage::Kind::Par: return "(" + render(u.parts[0]) + "|" + render(u.parts[1]) + ")";
  }
  return "?";
}

std::string render(const UsageType& t) {
  if (t.kind == UsageType::Kind::Variant) {
    std::string out = "<";
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      if (i) out += ", ";
      out += t.labels[i] + ": " + render(t.args[i]);
    }
    return out + ">";
  }
  std::string out = render(t.usage) + "[";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += render(t.args[i]);
  }
  return out + "]";
}

// --- Parsing ---------------------------------------------------------------------

namespace {

template <class T, class ParseOne>
std::vector<std::pair<std::string, T>> parse_alts(Lexer& lx, ParseOne parse_one) {
  lx.expect_sym('{');
  std::vector<std::pair<std::string, T>> alts;
  do {
    std::string l = lx.expect_name();
    lx.expect_sym(':');
    alts.emplace_back(l, parse_one(lx));
  } while (lx.accept_sym(','));
  lx.expect_sym('}');
  return alts;
}

template <class T, class Make>
T build_alts(Lexer& lx, std::vector<std::pair<std::string, T>> alts, Make make) {
  try {
    return make(std::move(alts));
  } catch (const std::invalid_argument& e) {
    lx.fail(e.what());
  }
}

SessionType parse_st(Lexer& lx) {
  if (lx.accept_sym('(')) {
    SessionType t = parse_st(lx);
    lx.expect_sym(')');
    return t;
  }
  if (lx.accept_ident("end")) return SessionType::end();
  if (lx.is_sym('?') || lx.is_sym('!')) {
    bool in = lx.next().text == "?";
    SessionType payload = parse_st(lx);
    lx.expect_sym('.');
    SessionType cont = parse_st(lx);
    return in ? SessionType::in(std::move(payload), std::move(cont))
              : SessionType::out(std::move(payload), std::move(cont));
  }
  if (lx.accept_sym('&'))
    return build_alts(lx, parse_alts<SessionType>(lx, parse_st), SessionType::branch);
  if (lx.accept_sym('+'))
    return build_alts(lx, parse_alts<SessionType>(lx, parse_st), SessionType::select);
  lx.fail("expected a session type");
}

CType parse_ct(Lexer& lx);

CType parse_ct_atom(Lexer& lx) {
  if (lx.accept_sym('(')) {
    CType t = parse_ct(lx);
    lx.expect_sym(')');
    return t;
  }
  if (lx.accept_ident("bullet")) return CType::bullet();
  if (lx.accept_sym('&')) return build_alts(lx, parse_alts<CType>(lx, parse_ct), CType::with);
  if (lx.accept_sym('+')) return build_alts(lx, parse_alts<CType>(lx, parse_ct), CType::plus);
  lx.fail("expected a C-type");
}

// Binary connectives associate to the right.
CType parse_ct(Lexer& lx) {
  CType left = parse_ct_atom(lx);
  if (lx.accept_sym('*')) return CType::tensor(std::move(left), parse_ct(lx));
  if (lx.accept_ident("par")) return CType::par(std::move(left), parse_ct(lx));
  return left;
}

LevelTerm parse_level(Lexer& lx) {
  if (lx.accept_sym('$')) return LevelTerm::var(lx.expect_number());
  return LevelTerm::constant(lx.expect_number());
}

Usage parse_us(Lexer& lx) {
  if (lx.peek().kind == detail::Token::Kind::Number && lx.peek().text == "0") {
    lx.next();
    return Usage::empty();
  }
  if (lx.accept_sym('(')) {
    Usage u = parse_us(lx);
    while (lx.accept_sym('|')) u = Usage::par(std::move(u), parse_us(lx));
    lx.expect_sym(')');
    return u;
  }
  if (lx.is_sym('?') || lx.is_sym('!')) {
    Polarity pol = lx.next().text == "?" ? Polarity::In : Polarity::Out;
    lx.expect_sym('[');
    LevelTerm o = parse_level(lx);
    lx.expect_sym(',');
    LevelTerm k = parse_level(lx);
    lx.expect_sym(']');
    Usage cont = Usage::empty();
    if (lx.accept_sym('.')) cont = parse_us(lx);
    return Usage::act(pol, o, k, std::move(cont));
  }
  lx.fail("expected a usage");
}

UsageType parse_ut(Lexer& lx) {
  if (lx.accept_sym('<')) {
    std::vector<std::pair<std::string, UsageType>> alts;
    do {
      std::string l = lx.expect_name();
      lx.expect_sym(':');
      alts.emplace_back(l, parse_ut(lx));
    } while (lx.accept_sym(','));
    lx.expect_sym('>');
    return build_alts(lx, std::move(alts), UsageType::variant);
  }
  Usage u = parse_us(lx);
  lx.expect_sym('[');
  std::vector<UsageType> payloads;
  if (!lx.is_sym(']')) {
    do {
      payloads.push_back(parse_ut(lx));
    } while (lx.accept_sym(','));
  }
  lx.expect_sym(']');
  if (payloads.size() > 2) lx.fail("channel types carry at most two payloads");
  return UsageType::chan(std::move(u), std::move(payloads));
}

template <class T, class ParseFn>
T parse_whole(std::string_view text, ParseFn fn) {
  Lexer lx(text);
  T t = fn(lx);
  if (!lx.at_end()) lx.fail("trailing input");
  return t;
}

template <class T, class ParseFn>
Context<T> parse_context(std::string_view text, ParseFn fn) {
  Context<T> g;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view line = text.substr(start, stop - start);
    ++line_no;
    start = stop + 1;
    std::size_t comment = line.find("--");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'name : type'", line_no, 1);
    Lexer name_lx(line.substr(0, colon));
    std::string name;
    try {
      name = name_lx.expect_name();
      if (!name_lx.at_end()) name_lx.fail("trailing input after name");
      if (g.contains(name)) throw ParseError("duplicate binding for " + name, line_no, 1);
      g.set(name, parse_whole<T>(line.substr(colon + 1), fn));
    } catch (const ParseError& e) {
      throw ParseError(std::string("context line ") + std::to_string(line_no) + ": " + e.what(),
                       line_no, e.column());
    }
  }
  return g;
}

}  // namespace

SessionType parse_session_type(std::string_view text) { return parse_whole<SessionType>(text, parse_st); }
CType parse_ctype(std::string_view text) { return parse_whole<CType>(text, parse_ct); }
UsageType parse_usage_type(std::string_view text) { return parse_whole<UsageType>(text, parse_ut); }
Usage parse_usage(std::string_view text) { return parse_whole<Usage>(text, parse_us); }

STContext parse_st_context(std::string_view text) { return parse_context<SessionType>(text, parse_st); }
CHContext parse_ch_context(std::string_view text) { return parse_context<CType>(text, parse_ct); }
KBContext parse_kb_context(std::string_view text) { return parse_context<UsageType>(text, parse_ut); }

namespace detail {
// Exposed to the process parser, which embeds type annotations.
SessionType parse_st_from(Lexer& lx) { return parse_st(lx); }
UsageType parse_ut_from(Lexer& lx) { return parse_ut(lx); }
}  // namespace detail

}  // namespace sesstk
