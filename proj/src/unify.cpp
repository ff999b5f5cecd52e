#include "unify.hpp"

#include <algorithm>

namespace sesstk::detail {

UTerm UTerm::var(unsigned id, bool neg) {
  UTerm t;
  t.kind = Kind::Var;
  t.id = id;
  t.neg = neg;
  return t;
}

UTerm UTerm::con(std::string ctor, std::vector<UTerm> args) {
  UTerm t;
  t.ctor = std::move(ctor);
  t.args = std::move(args);
  return t;
}

UTerm UTerm::choice(std::string ctor, std::vector<std::pair<std::string, UTerm>> alts,
                    std::optional<std::pair<unsigned, bool>> tail) {
  std::sort(alts.begin(), alts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  UTerm t;
  t.kind = Kind::Choice;
  t.ctor = std::move(ctor);
  for (auto& [l, a] : alts) {
    t.labels.push_back(l);
    t.args.push_back(std::move(a));
  }
  t.tail = tail;
  return t;
}

const Signature& ctype_signature() {
  static const Signature sig{{{"bullet", {"bullet", {}}},
                              {"tensor", {"par", {true, true}}},
                              {"par", {"tensor", {true, true}}},
                              {"with", {"plus", {}}},
                              {"plus", {"with", {}}}},
                             "bullet"};
  return sig;
}

const Signature& session_signature() {
  static const Signature sig{{{"end", {"end", {}}},
                              {"in", {"out", {false, true}}},
                              {"out", {"in", {false, true}}},
                              {"branch", {"select", {}}},
                              {"select", {"branch", {}}}},
                             "end"};
  return sig;
}

UTerm Unifier::dual(const UTerm& t) const {
  switch (t.kind) {
    case UTerm::Kind::Var: return UTerm::var(t.id, !t.neg);
    case UTerm::Kind::Con: {
      const auto& d = sig_.duals.at(t.ctor);
      UTerm r = UTerm::con(d.ctor, t.args);
      for (std::size_t i = 0; i < r.args.size(); ++i)
        if (d.dualize.at(i)) r.args[i] = dual(r.args[i]);
      return r;
    }
    case UTerm::Kind::Choice: {
      UTerm r = t;
      r.ctor = sig_.duals.at(t.ctor).ctor;
      for (auto& a : r.args) a = dual(a);
      if (r.tail) r.tail->second = !r.tail->second;
      return r;
    }
  }
  return t;
}

UTerm Unifier::walk(const UTerm& t) const {
  if (t.kind == UTerm::Kind::Var) {
    auto it = vars_.find(t.id);
    if (it == vars_.end()) return t;
    UTerm r = walk(it->second);
    return t.neg ? dual(r) : r;
  }
  if (t.kind == UTerm::Kind::Choice && t.tail) {
    UTerm r = t;
    while (r.tail) {
      auto it = rows_.find(r.tail->first);
      if (it == rows_.end()) break;
      bool neg = r.tail->second;
      for (std::size_t i = 0; i < it->second.labels.size(); ++i) {
        r.labels.push_back(it->second.labels[i]);
        r.args.push_back(neg ? dual(it->second.args[i]) : it->second.args[i]);
      }
      r.tail = it->second.tail;
      if (r.tail && neg) r.tail->second = !r.tail->second;
    }
    std::vector<std::pair<std::string, UTerm>> alts;
    for (std::size_t i = 0; i < r.labels.size(); ++i) alts.emplace_back(r.labels[i], r.args[i]);
    return UTerm::choice(r.ctor, std::move(alts), r.tail);
  }
  return t;
}

UTerm Unifier::resolve(const UTerm& t) const {
  UTerm r = walk(t);
  for (auto& a : r.args) a = resolve(a);
  return r;
}

bool Unifier::occurs(unsigned id, const UTerm& t) const {
  UTerm r = walk(t);
  if (r.kind == UTerm::Kind::Var) return r.id == id;
  return std::any_of(r.args.begin(), r.args.end(), [&](const UTerm& a) { return occurs(id, a); });
}

bool Unifier::occurs_row(unsigned id, const UTerm& t) const {
  UTerm r = walk(t);
  if (r.kind == UTerm::Kind::Choice && r.tail && r.tail->first == id) return true;
  return std::any_of(r.args.begin(), r.args.end(), [&](const UTerm& a) { return occurs_row(id, a); });
}

bool Unifier::fail(std::string msg) {
  error_ = std::move(msg);
  return false;
}

bool Unifier::bind(const UTerm& v, const UTerm& t) {
  if (occurs(v.id, t)) return fail("cyclic type for variable " + render(v));
  vars_[v.id] = v.neg ? dual(t) : t;
  return true;
}

bool Unifier::bind_row(std::pair<unsigned, bool> tail, Row row) {
  for (const auto& a : row.args)
    if (occurs_row(tail.first, a)) return fail("cyclic label row");
  if (tail.second) {
    for (auto& a : row.args) a = dual(a);
    if (row.tail) row.tail->second = !row.tail->second;
  }
  rows_[tail.first] = std::move(row);
  return true;
}

bool Unifier::unify(const UTerm& a0, const UTerm& b0) {
  UTerm a = walk(a0);
  UTerm b = walk(b0);
  if (a.kind == UTerm::Kind::Var && b.kind == UTerm::Kind::Var && a.id == b.id) {
    if (a.neg == b.neg) return true;
    return bind(UTerm::var(a.id), UTerm::con(sig_.self_dual));
  }
  if (a.kind == UTerm::Kind::Var) return bind(a, b);
  if (b.kind == UTerm::Kind::Var) return bind(b, a);
  if (a.kind != b.kind || a.ctor != b.ctor || (a.kind == UTerm::Kind::Con && a.args.size() != b.args.size()))
    return fail("cannot match " + render(a) + " with " + render(b));
  if (a.kind == UTerm::Kind::Choice) return unify_choice(a, b);
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify(a.args[i], b.args[i])) return false;
  return true;
}

bool Unifier::unify_choice(const UTerm& a, const UTerm& b) {
  Row only_a, only_b;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
    if (it == b.labels.end()) {
      only_a.labels.push_back(a.labels[i]);
      only_a.args.push_back(a.args[i]);
    } else if (!unify(a.args[i], b.args[static_cast<std::size_t>(it - b.labels.begin())])) {
      return false;
    }
  }
  for (std::size_t i = 0; i < b.labels.size(); ++i) {
    if (std::find(a.labels.begin(), a.labels.end(), b.labels[i]) == a.labels.end()) {
      only_b.labels.push_back(b.labels[i]);
      only_b.args.push_back(b.args[i]);
    }
  }
  std::string mismatch = "label sets differ: " + render(a) + " vs " + render(b);
  if (!only_a.labels.empty() && !b.tail) return fail(mismatch);
  if (!only_b.labels.empty() && !a.tail) return fail(mismatch);
  if (!a.tail && !b.tail) return true;
  if (a.tail && b.tail && a.tail->first == b.tail->first) {
    if (a.tail->second == b.tail->second && only_a.labels.empty() && only_b.labels.empty()) return true;
    return fail(mismatch);
  }
  std::optional<std::pair<unsigned, bool>> shared;
  if (a.tail && b.tail) shared = fresh_row();
  only_a.tail = shared;
  only_b.tail = shared;
  // The row of b absorbs the labels only a has, and vice versa.
  if (b.tail && !bind_row(*b.tail, std::move(only_a))) return false;
  if (a.tail && !bind_row(*a.tail, std::move(only_b))) return false;
  return true;
}

std::string Unifier::render(const UTerm& t0) const {
  UTerm t = walk(t0);
  switch (t.kind) {
    case UTerm::Kind::Var: return std::string(t.neg ? "~" : "") + "'a" + std::to_string(t.id);
    case UTerm::Kind::Con: {
      if (t.args.empty()) return t.ctor;
      std::string out = t.ctor + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? ", " : "") + render(t.args[i]);
      return out + ")";
    }
    case UTerm::Kind::Choice: {
      std::string out = t.ctor + "{";
      for (std::size_t i = 0; i < t.labels.size(); ++i)
        out += (i ? ", " : "") + t.labels[i] + ": " + render(t.args[i]);
      if (t.tail) out += std::string(t.labels.empty() ? "" : ", ") + "..";
      return out + "}";
    }
  }
  return "?";
}

namespace {

template <class T>
std::vector<std::pair<std::string, UTerm>> term_alts(const T& t) {
  std::vector<std::pair<std::string, UTerm>> alts;
  for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], to_term(t.args[i]));
  return alts;
}

template <class T, class Convert>
std::vector<std::pair<std::string, T>> back_alts(const UTerm& t, Convert convert) {
  std::vector<std::pair<std::string, T>> alts;
  for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], convert(t.args[i]));
  return alts;
}

}  // namespace

UTerm to_term(const CType& t) {
  switch (t.kind) {
    case CType::Kind::Bullet: return UTerm::con("bullet");
    case CType::Kind::Tensor: return UTerm::con("tensor", {to_term(t.args[0]), to_term(t.args[1])});
    case CType::Kind::Par: return UTerm::con("par", {to_term(t.args[0]), to_term(t.args[1])});
    case CType::Kind::With: return UTerm::choice("with", term_alts(t));
    case CType::Kind::Plus: return UTerm::choice("plus", term_alts(t));
  }
  return UTerm::con("bullet");
}

UTerm to_term(const SessionType& t) {
  switch (t.kind) {
    case SessionType::Kind::End: return UTerm::con("end");
    case SessionType::Kind::In: return UTerm::con("in", {to_term(t.payload()), to_term(t.cont())});
    case SessionType::Kind::Out: return UTerm::con("out", {to_term(t.payload()), to_term(t.cont())});
    case SessionType::Kind::Branch: return UTerm::choice("branch", term_alts(t));
    case SessionType::Kind::Select: return UTerm::choice("select", term_alts(t));
  }
  return UTerm::con("end");
}

CType to_ctype(const UTerm& t) {
  if (t.kind == UTerm::Kind::Var || t.ctor == "bullet") return CType::bullet();
  if (t.ctor == "tensor") return CType::tensor(to_ctype(t.args[0]), to_ctype(t.args[1]));
  if (t.ctor == "par") return CType::par(to_ctype(t.args[0]), to_ctype(t.args[1]));
  if (t.labels.empty()) return CType::bullet();
  auto alts = back_alts<CType>(t, [](const UTerm& a) { return to_ctype(a); });
  return t.ctor == "with" ? CType::with(std::move(alts)) : CType::plus(std::move(alts));
}

SessionType to_session(const UTerm& t) {
  if (t.kind == UTerm::Kind::Var || t.ctor == "end") return SessionType::end();
  if (t.ctor == "in") return SessionType::in(to_session(t.args[0]), to_session(t.args[1]));
  if (t.ctor == "out") return SessionType::out(to_session(t.args[0]), to_session(t.args[1]));
  if (t.labels.empty()) return SessionType::end();
  auto alts = back_alts<SessionType>(t, [](const UTerm& a) { return to_session(a); });
  return t.ctor == "branch" ? SessionType::branch(std::move(alts)) : SessionType::select(std::move(alts));
}

}  // namespace sesstk::detail
