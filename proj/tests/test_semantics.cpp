#include <doctest.h>

#include "sesstk/check_ch.hpp"
#include "sesstk/check_st.hpp"
#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/transform.hpp"

using namespace sesstk;
using LK = ReductionLabel::Kind;

namespace {

Process sp(const char* s) { return parse_process(s, Dialect::Session); }

const char* kCyclic = "new(x,y:!end.end) new(w,z:!end.end) (x!(n).w!(n).0 | z?(t).y?(s).0)";
const char* kFixed = "new(x,y:!end.end) new(w,z:!end.end) (x!(n).w!(n).0 | y?(s).z?(t).0)";
const char* kP2 = "new(a1,b1:?end.end) new(a2,b2:!end.end) (a1?(x).a2!(x).0 | b1!(n).b2?(z).0)";

struct Sample {
  STContext g;
  Process p;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (const auto& e : corpus()) out.push_back({e.context, e.process});
  for (auto& t : generate_terms(11, 80)) out.push_back({t.context, t.process});
  return out;
}

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("step") {
    auto rs = step(sp("new(x,y:!end.end)(x!(n).0 | y?(z).0)"), Dialect::Session);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].label.kind == LK::Com);
    CHECK(render(rs[0].target) == "0");
    CHECK(step(Process::inact(), Dialect::Session).empty());
    auto fw = step(parse_process("new x (fwd x y | x!(n).0)", Dialect::CH), Dialect::CH);
    REQUIRE(fw.size() == 1);
    CHECK(fw[0].label.kind == LK::Fwd);
    CHECK(alpha_equiv(fw[0].target, parse_process("y!(n).0", Dialect::CH)));
    auto sel = step(sp("new(x,y:+{a: end, b: end}) (x#b.0 | y&{a: 0, b: y!(n).0})"), Dialect::Session);
    REQUIRE(sel.size() == 1);
    CHECK(sel[0].label.kind == LK::Case);
    CHECK(sel[0].label.data == "b");
  }

  TEST_CASE("pi dialect: polyadic communication and case") {
    auto rs = step(parse_process("new c (c!(a, b).0 | c?(x, y).x!(y).0)", Dialect::PI), Dialect::PI);
    REQUIRE(rs.size() == 1);
    CHECK(render(rs[0].target) == "a!(b).0");
    auto cs = step(parse_process("case l(u) of {l(x) -> x!(n).0, r(y) -> 0}", Dialect::PI), Dialect::PI);
    REQUIRE(cs.size() == 1);
    CHECK(render(cs[0].target) == "u!(n).0");
  }

  TEST_CASE("explore") {
    StateGraph g0 = explore(Process::inact(), Dialect::Session);
    CHECK(g0.states.size() == 1);
    CHECK(g0.terminals.size() == 1);
    StateGraph g2 = explore(sp(kP2), Dialect::Session);
    CHECK(g2.states.size() == 3);
    CHECK(g2.edges.size() == 2);
    REQUIRE(g2.terminals.size() == 1);
    CHECK(render(g2.states[g2.terminals[0]]) == "0");
    for (const auto& e : g2.edges) CHECK(e.label.kind == LK::Com);
    StateGraph gc = explore(sp(kCyclic), Dialect::Session);
    CHECK(gc.states.size() == 1);
    CHECK(gc.terminals.size() == 1);
    CHECK(is_live(gc.states[0]));
    CHECK_THROWS_AS(explore(sp(kP2), Dialect::Session, 2), BudgetExceeded);
  }

  TEST_CASE("liveness") {
    CHECK_FALSE(is_live(Process::inact()));
    CHECK(is_live(sp("new(x,y)(x!(n).0 | y?(z).0)")));
    CHECK(is_live(sp(kCyclic)));
  }

  TEST_CASE("deadlock verdict") {
    Verdict stuck = deadlock_verdict(sp(kCyclic), Dialect::Session);
    CHECK_FALSE(stuck.deadlock_free);
    CHECK(stuck.witness.empty());
    CHECK(deadlock_verdict(sp(kFixed), Dialect::Session).deadlock_free);
    CHECK(deadlock_verdict(Process::inact(), Dialect::Session).deadlock_free);
    Verdict later = deadlock_verdict(sp("new(a,b:!end.end) (a!(n).0 | b?(u).new(x,y:!end.end) new(w,z:!end.end) "
                                        "(x!(n).w!(n).0 | z?(t).y?(s).0))"),
                                     Dialect::Session);
    CHECK_FALSE(later.deadlock_free);
    CHECK(later.witness.size() == 1);
  }

  TEST_CASE("well formedness") {
    CHECK(well_formed(sp(kFixed)));
    CHECK_FALSE(well_formed(sp("new(x,y)(x!(n).0 | y!(n).0)")));
    CHECK(well_formed(Process::inact()));
  }

  TEST_CASE("trace rendering is deterministic") {
    Process p = corpus_entry("ring").process;
    CHECK(render_trace(explore(p, Dialect::Session)) == render_trace(explore(p, Dialect::Session)));
  }

  TEST_CASE("property: reductions shrink the action count") {
    for (const auto& s : samples()) {
      StateGraph g = explore(s.p, Dialect::Session);
      for (const auto& e : g.edges) CHECK(action_count(g.states[e.to]) < action_count(g.states[e.from]));
      Process ch = translate_ch(s.p);
      StateGraph gc = explore(ch, Dialect::CH);
      for (const auto& e : gc.edges) CHECK(action_count(gc.states[e.to]) < action_count(gc.states[e.from]));
    }
  }

  TEST_CASE("property: reachable states keep within the initial free names") {
    for (const auto& s : samples()) {
      NameSet fn = free_names(s.p);
      StateGraph g = explore(s.p, Dialect::Session);
      for (const auto& st : g.states)
        for (const auto& x : free_names(st)) CHECK_MESSAGE(fn.count(x), render(st));
    }
  }

  TEST_CASE("property: typed closed terms are well formed") {
    for (const auto& s : samples()) {
      bool closed = true;
      for (const auto& [x, t] : s.g.bindings()) closed = closed && t.is_end();
      if (closed && check_st(s.g, s.p).ok()) CHECK(well_formed(s.p));
    }
  }

  TEST_CASE("property: progress of closed C-typed terms") {
    std::size_t live = 0;
    for (const auto& s : samples()) {
      Process ch = translate_ch(s.p);
      CHContext d = encode_ctx_c(s.g);
      bool closed = true;
      for (const auto& [x, t] : d.bindings()) closed = closed && t == CType::bullet();
      if (!closed || !check_ch(ch, d).ok()) continue;
      StateGraph g = explore(ch, Dialect::CH);
      for (std::size_t i = 0; i < g.states.size(); ++i) {
        if (!is_live(g.states[i])) continue;
        ++live;
        CHECK_FALSE(step(g.states[i], Dialect::CH).empty());
      }
    }
    CHECK(live > 0);
  }
}
