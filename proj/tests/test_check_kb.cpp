#include <doctest.h>

#include <random>
#include <set>

#include "sesstk/check_kb.hpp"
#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/transform.hpp"
#include "sesstk/usage.hpp"

using namespace sesstk;

namespace {

Usage us(const char* s) { return parse_usage(s); }
Process sp(const char* s) { return parse_process(s, Dialect::Session); }

// Reliability from the definitions, on flattened parallel parts.
struct Act {
  Polarity pol;
  unsigned ob, cap;
  Usage cont;
};

void parts_of(const Usage& u, std::vector<Act>& out) {
  if (u.kind == Usage::Kind::Par) {
    parts_of(u.parts[0], out);
    parts_of(u.parts[1], out);
  } else if (u.kind == Usage::Kind::Act) {
    out.push_back({u.pol, u.ob.n, u.cap.n, u.parts.empty() ? Usage::empty() : u.parts[0]});
  }
}

constexpr unsigned kOmega = 1000;

unsigned oracle_ob(Polarity a, const std::vector<Act>& ps) {
  unsigned m = kOmega;
  for (const auto& p : ps)
    if (p.pol == a) m = std::min(m, p.ob);
  return m;
}

unsigned oracle_cap(Polarity a, const std::vector<Act>& ps) {
  unsigned m = kOmega;
  for (const auto& p : ps)
    if (p.pol == a) m = std::min(m, p.cap);
  return m;
}

bool oracle_con(const std::vector<Act>& ps) {
  for (Polarity a : {Polarity::In, Polarity::Out})
    if (oracle_ob(opposite(a), ps) > oracle_cap(a, ps)) return false;
  return true;
}

Usage rebuild(const std::vector<Act>& ps) {
  Usage u = Usage::empty();
  for (const auto& p : ps) {
    Usage a = Usage::act(p.pol, LevelTerm::constant(p.ob), LevelTerm::constant(p.cap), p.cont);
    u = u.is_empty() ? a : Usage::par(u, a);
  }
  return u;
}

bool oracle_rel(const Usage& u, std::set<std::string>& seen) {
  std::vector<Act> ps;
  parts_of(u, ps);
  if (!oracle_con(ps)) return false;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (ps[i].pol != Polarity::In || ps[j].pol != Polarity::Out) continue;
      std::vector<Act> rest;
      for (std::size_t k = 0; k < ps.size(); ++k)
        if (k != i && k != j) rest.push_back(ps[k]);
      parts_of(ps[i].cont, rest);
      parts_of(ps[j].cont, rest);
      Usage next = canonical_usage(rebuild(rest));
      if (seen.insert(render(next)).second && !oracle_rel(next, seen)) return false;
    }
  }
  return true;
}

Usage random_usage(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5), lvl(0, 2);
  int k = depth <= 0 ? 0 : pick(rng);
  if (k == 0) return Usage::empty();
  if (k <= 1) return Usage::par(random_usage(rng, depth - 1), random_usage(rng, depth - 1));
  Polarity p = k <= 3 ? Polarity::In : Polarity::Out;
  return Usage::act(p, LevelTerm::constant(lvl(rng)), LevelTerm::constant(lvl(rng)), random_usage(rng, depth - 1));
}

struct Sample {
  std::string name;
  STContext g;
  Process p;
  bool closed = true;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (const auto& e : corpus()) out.push_back({e.name, e.context, e.process, e.closed});
  std::size_t i = 0;
  for (auto& t : generate_terms(23, 80)) out.push_back({"gen" + std::to_string(i++), t.context, t.process});
  return out;
}

}  // namespace

TEST_SUITE("check_kb") {
  TEST_CASE("usage reduction") {
    auto r = usage_step(us("(?[0,0]|![0,0])"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].is_empty());
    CHECK(usage_step(Usage::empty()).empty());
    auto r2 = usage_step(us("(?[0,0].![1,1]|![0,0].?[1,1])"));
    REQUIRE(r2.size() == 1);
    CHECK(render(r2[0]) == "(![1,1]|?[1,1])");
  }

  TEST_CASE("obligations and capabilities") {
    CHECK(ob(Polarity::In, us("?[2,5]")) == Level::finite(2));
    CHECK(cap(Polarity::In, us("?[2,5]")) == Level::finite(5));
    CHECK(ob(Polarity::Out, Usage::empty()) == Level::infinite());
    CHECK(ob(Polarity::In, us("(?[1,0]|?[3,0])")) == Level::finite(1));
  }

  TEST_CASE("reliability") {
    CHECK(rel(Usage::empty()));
    CHECK_FALSE(rel(us("?[0,0]")));
    CHECK(rel(us("(?[0,0]|![0,0])")));
    CHECK_FALSE(rel(us("(?[0,0].?[0,0]|![0,0])")));
  }

  TEST_CASE("context composition") {
    KBContext c = ctx_compose(parse_kb_context("x: ?[0,0][]"), parse_kb_context("x: ![0,0][]"));
    CHECK(render_context(c) == "x: (?[0,0]|![0,0])[]");
    KBContext v = ctx_compose(parse_kb_context("x: <l: ?[0,0][]>"), parse_kb_context("x: <l: ?[0,0][]>"));
    CHECK(render_context(v) == "x: <l: ?[0,0][]>");
    KBContext d = ctx_compose(parse_kb_context("x: ?[0,0][]"), parse_kb_context("y: ![1,1][]"));
    CHECK(d.size() == 2);
    CHECK_THROWS_AS(ctx_compose(parse_kb_context("x: ?[0,0][0[]]"), parse_kb_context("x: ![0,0][]")),
                    TypeErrorException);
  }

  TEST_CASE("lift and semi") {
    CHECK(render(lift(3, us("?[1,0]"))) == "?[3,0]");
    CHECK(render(lift(2, us("(?[1,0]|![5,0])"))) == "(?[2,0]|![5,0])");
    CHECK(render_context(semi("x", Polarity::In, 0, 0, KBContext{})) == "x: ?[0,0][]");
    CHECK(render_context(semi("x", Polarity::Out, 0, 2, parse_kb_context("y: ?[1,0][]"))) ==
          "x: ![0,2][], y: ?[3,0][]");
    CHECK(render_context(semi("x", Polarity::In, 1, 0, parse_kb_context("x: ![2,2][]"))) == "x: ?[1,0].![2,2][]");
  }

  TEST_CASE("level solver") {
    LevelProblem p;
    p.add(LevelTerm::var(0), 1, LevelTerm::var(1), "a");
    p.add(LevelTerm::var(1), 1, LevelTerm::var(2), "b");
    LevelSolution s = solve_levels(p, 2);
    REQUIRE(s.satisfiable);
    CHECK(s.values == std::vector<unsigned>{0, 1, 2});
    CHECK_FALSE(solve_levels(p, 1).satisfiable);
    p.add(LevelTerm::var(2), 1, LevelTerm::var(0), "c");
    LevelSolution cyc = solve_levels(p, 8);
    CHECK_FALSE(cyc.satisfiable);
    CHECK_FALSE(cyc.failing_chain.empty());
    LevelProblem q;
    q.add(LevelTerm::constant(1), 0, LevelTerm::var(0), "floor");
    q.add_disjunction({{{LevelTerm::var(0), 0, LevelTerm::constant(0), "x"},
                        {LevelTerm::var(1), 0, LevelTerm::constant(0), "y"}},
                       "either"});
    LevelSolution qs = solve_levels(q, 3);
    REQUIRE(qs.satisfiable);
    CHECK(qs.values[0] == 1);
    CHECK(qs.values[1] == 0);
  }

  TEST_CASE("degree of sharing") {
    TypedEncoding p2 = encode_typed(witness(2).context, witness(2).process);
    CHECK(check_kb(p2.context, p2.process, 2).ok());
    KBResult one = check_kb(p2.context, p2.process, 1);
    REQUIRE_FALSE(one.ok());
    CHECK(one.error->kind == TypeErrorKind::SharingExceeded);
    CHECK(one.error->count == 2);
    CHECK(check_kb(KBContext{}, Process::inact(), 0).ok());
    CHECK(degree(p2.context, p2.process).degree == 2u);
    TypedEncoding single = encode_typed(parse_st_context("n: end"), sp("new(x,y:!end.end)(x!(n).0 | y?(s).0)"));
    CHECK(degree(single.context, single.process).degree == 1u);
    CHECK(degree(KBContext{}, parse_process("0 | 0", Dialect::PI)).degree == 0u);
  }

  TEST_CASE("level inference") {
    const CorpusEntry& cyc = corpus_entry("cyclic");
    TypedEncoding c = encode_typed(cyc.context, cyc.process);
    KBResult r = check_kb(c.context, c.process, 4);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->kind == TypeErrorKind::ReliabilityFailure);
    CHECK_FALSE(r.failing_chain.empty());
    for (std::size_t n = 0; n <= 3; ++n) CHECK_FALSE(infer_levels(c.context, c.process, n, 8).satisfiable);
    const CorpusEntry& fixed = corpus_entry("cyclic_fixed");
    TypedEncoding f = encode_typed(fixed.context, fixed.process);
    CHECK(infer_levels(f.context, f.process, 2, 8).satisfiable);
    LevelInference nil = infer_levels(KBContext{}, Process::inact(), 0, 1);
    CHECK(nil.satisfiable);
    CHECK(nil.assignment.empty());
  }

  TEST_CASE("count modes") {
    KBOptions names, assignments;
    assignments.count_assignments = true;
    for (const auto& s : samples()) {
      TypedEncoding e = encode_typed(s.g, s.p);
      DegreeResult a = degree(e.context, e.process, names);
      DegreeResult b = degree(e.context, e.process, assignments);
      CHECK(a.degree.has_value() == b.degree.has_value());
      if (a.degree && b.degree) CHECK(*b.degree <= *a.degree);
    }
  }

  TEST_CASE("property: reliability agrees with the definition") {
    std::mt19937_64 rng(3);
    std::size_t reliable = 0;
    for (int i = 0; i < 3000; ++i) {
      Usage u = random_usage(rng, 4);
      std::set<std::string> seen;
      bool expected = oracle_rel(canonical_usage(u), seen);
      CHECK_MESSAGE(rel(u) == expected, render(u));
      std::vector<Act> ps;
      parts_of(u, ps);
      CHECK(con(u) == oracle_con(ps));
      if (rel(u)) {
        CHECK(con(u));
        for (const auto& v : usage_step(u)) CHECK(rel(v));
      }
      reliable += expected;
    }
    CHECK(reliable > 100);
  }

  TEST_CASE("property: encoded dual pairs are reliable") {
    for (const auto& t : types_up_to_depth(2)) {
      LevelSupply levels;
      UsageType pair = encode_pair(t, levels);
      LevelProblem p;
      p.reserve(levels.count());
      reliability_constraints(pair.usage, "x", p);
      LevelSolution s = solve_levels(p, 4);
      REQUIRE(s.satisfiable);
      CHECK(rel(instantiate(pair.usage, s.values)));
    }
  }

  TEST_CASE("property: degree is monotone") {
    for (const auto& s : samples()) {
      TypedEncoding e = encode_typed(s.g, s.p);
      DegreeResult d = degree(e.context, e.process);
      if (!d.degree) continue;
      if (*d.degree > 0) CHECK_FALSE(check_kb(e.context, e.process, *d.degree - 1).ok());
      for (std::size_t n = *d.degree; n <= *d.degree + 3; ++n) CHECK(check_kb(e.context, e.process, n).ok());
    }
  }

  TEST_CASE("property: closed KB-typed terms are deadlock free") {
    for (const auto& s : samples()) {
      if (!s.closed) continue;
      TypedEncoding e = encode_typed(s.g, s.p);
      if (!degree(e.context, e.process).degree) continue;
      CHECK_MESSAGE(deadlock_verdict(e.process, Dialect::PI).deadlock_free, s.name);
      CHECK_MESSAGE(deadlock_verdict(s.p, Dialect::Session).deadlock_free, s.name);
    }
  }

  TEST_CASE("property: reduction preserves KB typing") {
    for (const auto& s : samples()) {
      TypedEncoding e = encode_typed(s.g, s.p);
      DegreeResult d = degree(e.context, e.process);
      if (!d.degree) continue;
      StateGraph g = explore(e.process, Dialect::PI);
      for (const auto& st : g.states) CHECK_MESSAGE(check_kb(e.context, st, *d.degree).ok(), render(st));
    }
  }
}
