#include <algorithm>
#include <map>
#include <numeric>

#include "sesstk/syntax.hpp"

namespace sesstk {

namespace {

void flatten_into(const Process& p, Soup& s, NameSet& taken, NameSet& avoid) {
  using K = Process::Kind;
  switch (p.kind) {
    case K::Inact: return;
    case K::Par:
      flatten_into(p.children[0], s, taken, avoid);
      flatten_into(p.children[1], s, taken, avoid);
      return;
    case K::ResSession: {
      Process body = p.cont();
      Restriction r{true, p.subject, p.other, p.st, std::nullopt};
      Substitution sub;
      for (Name* n : {&r.x, &r.y}) {
        if (taken.count(*n)) {
          Name fresh = fresh_name("%t", avoid);
          sub[*n] = Value::chan(fresh);
          *n = fresh;
        }
        taken.insert(*n);
      }
      if (!sub.empty()) body = substitute(body, sub);
      s.restrictions.push_back(std::move(r));
      flatten_into(body, s, taken, avoid);
      return;
    }
    case K::Res: {
      Process body = p.cont();
      Restriction r{false, p.subject, "", std::nullopt, p.ut};
      if (taken.count(r.x)) {
        Name fresh = fresh_name("%t", avoid);
        body = rename(body, r.x, fresh);
        r.x = fresh;
      }
      taken.insert(r.x);
      s.restrictions.push_back(std::move(r));
      flatten_into(body, s, taken, avoid);
      return;
    }
    default: s.components.push_back(p); return;
  }
}

/// Free names of p in left-to-right textual order, first occurrences only.
void occurrence_order(const Process& p, const NameSet& bound, std::vector<Name>& out) {
  auto note = [&](const Name& n) {
    if (!bound.count(n) && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  using K = Process::Kind;
  if (p.is_prefix()) note(p.subject);
  if (p.kind == K::Fwd) {
    note(p.subject);
    note(p.other);
  }
  if (!p.bound) {
    for (const auto& v : p.values) {
      const Value* cur = &v;
      while (!cur->is_chan()) cur = &cur->payload();
      note(cur->name);
    }
  }
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    NameSet inner = bound;
    switch (p.kind) {
      case K::In: inner.insert(p.binders.begin(), p.binders.end()); break;
      case K::Out:
        if (p.bound) inner.insert(p.values[0].name);
        break;
      case K::ResSession:
        inner.insert(p.subject);
        inner.insert(p.other);
        break;
      case K::Res: inner.insert(p.subject); break;
      case K::Case: inner.insert(p.binders[i]); break;
      default: break;
    }
    occurrence_order(p.children[i], inner, out);
  }
}

Name level_name(std::size_t level) { return "%" + std::to_string(level); }

Process nf_soup(const Process& p, std::size_t base);

/// Normalizes one component: its own binders become %base, %base+1, ...
Process nf_component(const Process& c, std::size_t base) {
  using K = Process::Kind;
  Process q = c;
  switch (c.kind) {
    case K::In: {
      Substitution sub;
      for (std::size_t i = 0; i < c.binders.size(); ++i) {
        q.binders[i] = level_name(base + i);
        sub[c.binders[i]] = Value::chan(q.binders[i]);
      }
      q.children[0] = nf_soup(substitute(c.cont(), sub), base + c.binders.size());
      return q;
    }
    case K::Out:
      if (c.bound) {
        q.values[0].name = level_name(base);
        q.children[0] = nf_soup(rename(c.cont(), c.values[0].name, q.values[0].name), base + 1);
      } else {
        q.children[0] = nf_soup(c.cont(), base);
      }
      return q;
    case K::Sel:
    case K::Branch:
      for (auto& child : q.children) child = nf_soup(child, base);
      return q;
    case K::Case:
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        q.binders[i] = level_name(base);
        q.children[i] = nf_soup(rename(c.children[i], c.binders[i], q.binders[i]), base + 1);
      }
      return q;
    default: return q;
  }
}

std::size_t name_count(const std::vector<Restriction>& rs) {
  std::size_t n = 0;
  for (const auto& r : rs) n += r.pair ? 2 : 1;
  return n;
}

struct Iterate {
  Soup next;
  Process result;
};

Iterate canonical_step(const Soup& s, std::size_t base) {
  std::size_t inner_base = base + name_count(s.restrictions);
  std::vector<Process> normed;
  for (const auto& c : s.components) normed.push_back(nf_component(c, inner_base));

  Substitution mask;
  std::map<Name, std::size_t> owner;
  for (std::size_t i = 0; i < s.restrictions.size(); ++i) {
    const Restriction& r = s.restrictions[i];
    mask[r.x] = Value::chan("%_");
    owner[r.x] = i;
    if (r.pair) {
      mask[r.y] = Value::chan("%_");
      owner[r.y] = i;
    }
  }
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& c : normed) keys.emplace_back(render(substitute(c, mask)), render(c));
  std::vector<std::size_t> order(normed.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  Substitution sub;
  std::vector<std::pair<std::size_t, Restriction>> placed;
  std::size_t level = base;
  for (std::size_t idx : order) {
    std::vector<Name> names;
    occurrence_order(normed[idx], {}, names);
    for (const auto& n : names) {
      auto it = owner.find(n);
      if (it == owner.end() || sub.count(n)) continue;
      Restriction r = s.restrictions[it->second];
      if (r.pair) {
        if (n == r.y) {
          std::swap(r.x, r.y);
          if (r.st) r.st = dual(*r.st);
        }
        sub[r.x] = Value::chan(level_name(level));
        sub[r.y] = Value::chan(level_name(level + 1));
        r.x = level_name(level);
        r.y = level_name(level + 1);
        placed.emplace_back(level, std::move(r));
        level += 2;
      } else {
        sub[r.x] = Value::chan(level_name(level));
        r.x = level_name(level);
        placed.emplace_back(level, std::move(r));
        level += 1;
      }
    }
  }

  Iterate out;
  for (auto& [lvl, r] : placed) out.next.restrictions.push_back(std::move(r));
  std::vector<Process> comps;
  for (std::size_t idx : order) {
    Process c = substitute(normed[idx], sub);
    out.next.components.push_back(c);
    comps.push_back(nf_component(c, inner_base));
  }
  out.result = assemble(Soup{out.next.restrictions, std::move(comps)});
  return out;
}

Process nf_soup(const Process& p, std::size_t base) {
  Soup s = flatten(p);
  collect_garbage(s);
  if (s.restrictions.empty()) {
    std::vector<Process> comps;
    for (const auto& c : s.components) comps.push_back(nf_component(c, base));
    std::sort(comps.begin(), comps.end(),
              [](const Process& a, const Process& b) { return render(a) < render(b); });
    return Process::par_all(std::move(comps));
  }
  // Old level names of restrictions would clash with the binder levels.
  {
    NameSet avoid = all_names(assemble(s));
    Substitution tmp;
    for (auto& r : s.restrictions) {
      Name x = fresh_name("%s", avoid);
      tmp[r.x] = Value::chan(x);
      r.x = x;
      if (r.pair) {
        Name y = fresh_name("%s", avoid);
        tmp[r.y] = Value::chan(y);
        r.y = y;
      }
    }
    for (auto& c : s.components) c = substitute(c, tmp);
  }
  // Iterate to a fixpoint; on a cycle pick its least rendering.
  std::vector<std::string> seen;
  std::vector<Process> results;
  for (;;) {
    Iterate it = canonical_step(s, base);
    std::string key = render(it.result);
    auto pos = std::find(seen.begin(), seen.end(), key);
    if (pos != seen.end()) {
      std::size_t start = static_cast<std::size_t>(pos - seen.begin());
      std::size_t best = start;
      for (std::size_t i = start; i < seen.size(); ++i)
        if (seen[i] < seen[best]) best = i;
      return results[best];
    }
    seen.push_back(std::move(key));
    results.push_back(it.result);
    s = std::move(it.next);
  }
}

}  // namespace

Soup flatten(const Process& p) {
  Soup s;
  NameSet taken = free_names(p);
  NameSet avoid = all_names(p);
  flatten_into(p, s, taken, avoid);
  return s;
}

Process assemble(const Soup& s) {
  Process body = Process::par_all(s.components);
  for (auto it = s.restrictions.rbegin(); it != s.restrictions.rend(); ++it) {
    if (it->pair) {
      body = Process::res_session(it->x, it->y, it->st, std::move(body));
    } else {
      body = Process::res(it->x, std::move(body), it->ut);
    }
  }
  return body;
}

void collect_garbage(Soup& s) {
  NameSet used;
  for (const auto& c : s.components) {
    NameSet fn = free_names(c);
    used.insert(fn.begin(), fn.end());
  }
  std::erase_if(s.restrictions, [&](const Restriction& r) {
    return !used.count(r.x) && !(r.pair && used.count(r.y));
  });
}

Process normal_form(const Process& p) {
  std::size_t base = 0;
  for (const auto& n : free_names(p)) {
    if (n.size() < 2 || n[0] != '%') continue;
    if (!std::all_of(n.begin() + 1, n.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    base = std::max(base, static_cast<std::size_t>(std::stoul(n.substr(1))) + 1);
  }
  return nf_soup(p, base);
}

}  // namespace sesstk
