#include <doctest.h>

#include <map>
#include <random>

#include "sesstk/check_st.hpp"
#include "sesstk/generate.hpp"

using namespace sesstk;

namespace {

Process sp(const char* s) { return parse_process(s, Dialect::Session); }
STContext ctx(const char* s) { return parse_st_context(s); }

// Declarative typing by search over every context split.
class Oracle {
 public:
  using Ctx = std::map<Name, SessionType>;

  bool typed(const STContext& g, const Process& p) {
    Ctx c;
    for (const auto& [x, t] : g.bindings()) c[x] = t;
    return derive(c, p);
  }

 private:
  int fresh_ = 0;

  Name fresh() { return "%o" + std::to_string(++fresh_); }

  static bool all_un(const Ctx& c) {
    for (const auto& [x, t] : c)
      if (!t.is_end()) return false;
    return true;
  }

  bool derive(const Ctx& c, const Process& p) {
    using K = Process::Kind;
    switch (p.kind) {
      case K::Inact: return all_un(c);
      case K::Par: {
        std::vector<Name> lin;
        Ctx un;
        for (const auto& [x, t] : c) (t.is_end() ? (void)un.emplace(x, t) : lin.push_back(x));
        for (unsigned mask = 0; mask < (1u << lin.size()); ++mask) {
          Ctx l = un, r = un;
          for (std::size_t i = 0; i < lin.size(); ++i) ((mask >> i) & 1 ? l : r)[lin[i]] = c.at(lin[i]);
          if (derive(l, p.children[0]) && derive(r, p.children[1])) return true;
        }
        return false;
      }
      case K::ResSession: {
        if (!p.st) return false;
        Name x = fresh(), y = fresh();
        Process body = rename(rename(p.children[0], p.subject, x), p.other, y);
        Ctx inner = c;
        inner[x] = *p.st;
        inner[y] = dual(*p.st);
        return derive(inner, body);
      }
      case K::In: {
        auto it = c.find(p.subject);
        if (it == c.end() || it->second.kind != SessionType::Kind::In) return false;
        Ctx inner = c;
        inner[p.subject] = it->second.cont();
        Name y = fresh();
        inner[y] = it->second.payload();
        return derive(inner, rename(p.children[0], p.binders[0], y));
      }
      case K::Out: {
        auto it = c.find(p.subject);
        if (it == c.end() || it->second.kind != SessionType::Kind::Out) return false;
        const SessionType& pay = it->second.payload();
        const Name& v = p.values[0].name;
        auto vt = c.find(v);
        if (v == p.subject || vt == c.end() || !(vt->second == pay)) return false;
        Ctx inner = c;
        inner[p.subject] = it->second.cont();
        if (!pay.is_end()) inner.erase(v);
        return derive(inner, p.children[0]);
      }
      case K::Sel: {
        auto it = c.find(p.subject);
        if (it == c.end() || it->second.kind != SessionType::Kind::Select) return false;
        const SessionType* s = it->second.alt(p.labels[0]);
        if (!s) return false;
        Ctx inner = c;
        inner[p.subject] = *s;
        return derive(inner, p.children[0]);
      }
      case K::Branch: {
        auto it = c.find(p.subject);
        if (it == c.end() || it->second.kind != SessionType::Kind::Branch) return false;
        if (it->second.labels != p.labels) return false;
        for (std::size_t i = 0; i < p.labels.size(); ++i) {
          Ctx inner = c;
          inner[p.subject] = it->second.args[i];
          if (!derive(inner, p.children[i])) return false;
        }
        return true;
      }
      default: return false;
    }
  }
};

class RandomTerms {
 public:
  explicit RandomTerms(std::uint64_t seed) : rng_(seed) {}

  STContext context() {
    STContext g{{"n", SessionType::end()}};
    for (const char* x : {"a", "b"}) g.set(x, random_session_type(rng_, 2));
    return g;
  }

  Process term(std::vector<Name> scope, int budget) {
    int k = pick(0, 9);
    if (budget <= 0 || k == 0) return Process::inact();
    Name x = scope[pick(0, static_cast<int>(scope.size()) - 1)];
    switch (k) {
      case 1:
      case 2: {
        Name y = "v" + std::to_string(++names_);
        scope.push_back(y);
        return Process::in(x, {y}, term(scope, budget - 1));
      }
      case 3:
      case 4: {
        Name v = scope[pick(0, static_cast<int>(scope.size()) - 1)];
        return Process::out(x, {Value::chan(v)}, term(scope, budget - 1));
      }
      case 5: return Process::sel(x, pick(0, 1) ? "a" : "b", term(scope, budget - 1));
      case 6: {
        std::vector<std::pair<std::string, Process>> alts{{"a", term(scope, budget / 2 - 1)}};
        if (pick(0, 1)) alts.emplace_back("b", term(scope, budget / 2 - 1));
        return Process::branch(x, std::move(alts));
      }
      case 7: return Process::par(term(scope, budget / 2), term(scope, budget / 2));
      default: {
        Name a = "s" + std::to_string(++names_), b = "t" + std::to_string(++names_);
        SessionType t = random_session_type(rng_, 2);
        std::vector<Name> l = scope, r = scope;
        l.push_back(a);
        r.push_back(b);
        return Process::res_session(a, b, t, Process::par(term(l, budget / 2), term(r, budget / 2)));
      }
    }
  }

  /// One local change to a term: a subject, value, label, annotation or branch.
  Process mutate(const Process& p) {
    Process q = p;
    std::vector<Process*> nodes;
    collect(q, nodes);
    Process* n = nodes[pick(0, static_cast<int>(nodes.size()) - 1)];
    std::vector<Name> names;
    for (const auto& x : all_names(q)) names.push_back(x);
    names.push_back("n");
    Name other = names[pick(0, static_cast<int>(names.size()) - 1)];
    using K = Process::Kind;
    switch (n->kind) {
      case K::Out:
        if (pick(0, 1)) {
          n->values[0] = Value::chan(other);
        } else {
          n->subject = other;
        }
        break;
      case K::In: n->subject = other; break;
      case K::Sel: n->labels[0] = n->labels[0] == "a" ? "b" : "a"; break;
      case K::Branch:
        if (n->labels.size() > 1) {
          n->labels.pop_back();
          n->children.pop_back();
        } else {
          n->subject = other;
        }
        break;
      case K::ResSession:
        if (pick(0, 1)) {
          n->st = random_session_type(rng_, 2);
        } else {
          n->st = dual(*n->st);
        }
        break;
      case K::Par: n->children[pick(0, 1)] = Process::inact(); break;
      default: break;
    }
    return q;
  }

 private:
  std::mt19937_64 rng_;
  int names_ = 0;

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static void collect(Process& p, std::vector<Process*>& out) {
    out.push_back(&p);
    for (auto& c : p.children) collect(c, out);
  }
};

}  // namespace

TEST_SUITE("check_st") {
  TEST_CASE("reference terms") {
    STResult cyc = check_st(ctx("n: end"), sp("new(x,y:!end.end) new(w,z:!end.end) (x!(n).w!(n).0 | z?(t).y?(s).0)"));
    CHECK(cyc.ok());
    CHECK(check_st(ctx("x: end"), Process::inact()).ok());
    STResult unbound = check_st(STContext{}, sp("x!(n).0"));
    REQUIRE_FALSE(unbound.ok());
    CHECK(unbound.error->kind == TypeErrorKind::UnboundName);
    CHECK(unbound.error->name == "x");
  }

  TEST_CASE("errors") {
    STResult lin = check_st(ctx("x: !end.end"), Process::inact());
    REQUIRE_FALSE(lin.ok());
    CHECK(lin.error->kind == TypeErrorKind::LinearityViolation);
    STResult mismatch = check_st(ctx("n: end\nx: ?end.end"), sp("x!(n).0"));
    REQUIRE_FALSE(mismatch.ok());
    CHECK(mismatch.error->kind == TypeErrorKind::TypeMismatch);
    STResult twice = check_st(ctx("n: end\nx: !end.end"), sp("x!(n).0 | x!(n).0"));
    CHECK_FALSE(twice.ok());
    STResult unannotated = check_st(ctx("n: end"), sp("new(x,y) (x!(n).0 | y?(s).0)"));
    CHECK_FALSE(unannotated.ok());
  }

  TEST_CASE("derivation") {
    STResult r = check_st(ctx("n: end"), sp("new(x,y:!end.end) (x!(n).0 | y?(s).0)"));
    REQUIRE(r.ok());
    CHECK_FALSE(r.derivation.rule.empty());
  }

  TEST_CASE("property: agrees with declarative search on random terms") {
    RandomTerms gen(5);
    Oracle oracle;
    std::size_t yes = 0, no = 0;
    for (int i = 0; i < 6000; ++i) {
      STContext g = gen.context();
      Process p = gen.term({"a", "b", "n"}, 6);
      if (prefix_count(p) > 6) continue;
      bool expected = oracle.typed(g, p);
      CHECK_MESSAGE(check_st(g, p).ok() == expected, (render_context(g) + " |- " + render(p)));
      (expected ? yes : no)++;
    }
    CHECK(yes > 0);
    CHECK(no > 100);
  }

  TEST_CASE("property: agrees with declarative search on mutated typed terms") {
    RandomTerms gen(9);
    Oracle oracle;
    std::size_t yes = 0, no = 0;
    for (const auto& t : generate_terms(13, 300, GenOptions{6, 2, 3})) {
      CHECK(oracle.typed(t.context, t.process));
      for (int k = 0; k < 4; ++k) {
        Process m = gen.mutate(t.process);
        bool expected = oracle.typed(t.context, m);
        CHECK_MESSAGE(check_st(t.context, m).ok() == expected, render(m));
        (expected ? yes : no)++;
      }
    }
    CHECK(yes > 20);
    CHECK(no > 20);
  }
}
