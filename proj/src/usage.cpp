#include "sesstk/usage.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sesstk {

namespace {

void collect_parts(const Usage& u, std::vector<Usage>& out) {
  switch (u.kind) {
    case Usage::Kind::Empty: return;
    case Usage::Kind::Par:
      collect_parts(u.parts[0], out);
      collect_parts(u.parts[1], out);
      return;
    case Usage::Kind::Act: out.push_back(u); return;
  }
}

Usage join(std::vector<Usage> parts) {
  if (parts.empty()) return Usage::empty();
  Usage acc = std::move(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Usage::par(std::move(acc), std::move(parts[i]));
  return acc;
}

unsigned concrete(const LevelTerm& l) {
  if (l.is_var) throw std::invalid_argument("level variable $" + std::to_string(l.n) + " is not instantiated");
  return l.n;
}

}  // namespace

std::vector<Usage> usage_parts(const Usage& u) {
  std::vector<Usage> out;
  collect_parts(u, out);
  return out;
}

Usage canonical_usage(const Usage& u) {
  std::vector<Usage> parts = usage_parts(u);
  for (auto& p : parts) p.parts[0] = canonical_usage(p.parts[0]);
  std::sort(parts.begin(), parts.end(),
            [](const Usage& a, const Usage& b) { return render(a) < render(b); });
  return join(std::move(parts));
}

std::vector<Usage> usage_step(const Usage& u) {
  std::vector<Usage> parts = usage_parts(u);
  std::set<std::string> seen;
  std::vector<Usage> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].pol != Polarity::In) continue;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (parts[j].pol != Polarity::Out) continue;
      std::vector<Usage> next;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k == i || k == j) {
          next.push_back(parts[k].parts[0]);
        } else {
          next.push_back(parts[k]);
        }
      }
      Usage r = canonical_usage(join(std::move(next)));
      if (seen.insert(render(r)).second) out.push_back(std::move(r));
    }
  }
  return out;
}

Level ob(Polarity a, const Usage& u) {
  switch (u.kind) {
    case Usage::Kind::Empty: return Level::infinite();
    case Usage::Kind::Act: return u.pol == a ? Level::finite(concrete(u.ob)) : Level::infinite();
    case Usage::Kind::Par: return level_min(ob(a, u.parts[0]), ob(a, u.parts[1]));
  }
  return Level::infinite();
}

Level cap(Polarity a, const Usage& u) {
  switch (u.kind) {
    case Usage::Kind::Empty: return Level::infinite();
    case Usage::Kind::Act: return u.pol == a ? Level::finite(concrete(u.cap)) : Level::infinite();
    case Usage::Kind::Par: return level_min(cap(a, u.parts[0]), cap(a, u.parts[1]));
  }
  return Level::infinite();
}

bool con(const Usage& u) {
  return level_leq(ob(Polarity::Out, u), cap(Polarity::In, u)) &&
         level_leq(ob(Polarity::In, u), cap(Polarity::Out, u));
}

bool rel(const Usage& u) {
  std::set<std::string> seen;
  std::vector<Usage> todo{canonical_usage(u)};
  seen.insert(render(todo.back()));
  while (!todo.empty()) {
    Usage cur = std::move(todo.back());
    todo.pop_back();
    if (!con(cur)) return false;
    for (auto& n : usage_step(cur))
      if (seen.insert(render(n)).second) todo.push_back(std::move(n));
  }
  return true;
}

Usage lift(unsigned t, const Usage& u) {
  switch (u.kind) {
    case Usage::Kind::Empty: return u;
    case Usage::Kind::Act: {
      Usage r = u;
      r.ob = LevelTerm::constant(std::max(concrete(u.ob), t));
      return r;
    }
    case Usage::Kind::Par: return Usage::par(lift(t, u.parts[0]), lift(t, u.parts[1]));
  }
  return u;
}

UsageType lift(unsigned t, const UsageType& ty) {
  if (ty.kind == UsageType::Kind::Variant) return ty;
  return UsageType::chan(lift(t, ty.usage), ty.args);
}

KBContext lift(unsigned t, const KBContext& g) {
  KBContext out;
  for (const auto& [n, ty] : g) out.set(n, lift(t, ty));
  return out;
}

KBContext ctx_compose(const KBContext& g1, const KBContext& g2) {
  KBContext out = g1;
  for (const auto& [n, t2] : g2) {
    UsageType* t1 = out.find(n);
    if (!t1) {
      out.set(n, t2);
      continue;
    }
    if (t1->kind != t2.kind || t1->args != t2.args || (t1->kind == UsageType::Kind::Variant && !(*t1 == t2)))
      type_fail(TypeErrorKind::PayloadMismatch, n, "",
                "cannot compose " + render(*t1) + " with " + render(t2));
    if (t1->kind == UsageType::Kind::Chan) t1->usage = Usage::par(t1->usage, t2.usage);
  }
  return out;
}

KBContext semi(const std::string& x, Polarity a, unsigned o, unsigned k, const KBContext& g,
               std::vector<UsageType> payloads) {
  KBContext out;
  LevelTerm lo = LevelTerm::constant(o);
  LevelTerm lk = LevelTerm::constant(k);
  if (const UsageType* tx = g.find(x)) {
    if (tx->kind != UsageType::Kind::Chan)
      type_fail(TypeErrorKind::TypeMismatch, x, "", "prefix on variant-typed name");
    out.set(x, UsageType::chan(Usage::act(a, lo, lk, tx->usage), tx->args));
  } else {
    out.set(x, UsageType::chan(Usage::act(a, lo, lk), std::move(payloads)));
  }
  for (const auto& [n, ty] : g)
    if (n != x) out.set(n, lift(k + 1, ty));
  return out;
}

Usage instantiate(const Usage& u, const std::vector<unsigned>& assign) {
  Usage r = u;
  if (r.kind == Usage::Kind::Act) {
    if (r.ob.is_var) r.ob = LevelTerm::constant(assign.at(r.ob.n));
    if (r.cap.is_var) r.cap = LevelTerm::constant(assign.at(r.cap.n));
  }
  for (auto& p : r.parts) p = instantiate(p, assign);
  return r;
}

UsageType instantiate(const UsageType& t, const std::vector<unsigned>& assign) {
  UsageType r = t;
  r.usage = instantiate(t.usage, assign);
  for (auto& a : r.args) a = instantiate(a, assign);
  return r;
}

}  // namespace sesstk
