#include <doctest.h>

#include "sesstk/check_ch.hpp"
#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/transform.hpp"

using namespace sesstk;

namespace {

Process ch(const char* s) { return parse_process(s, Dialect::CH); }
Process sp(const char* s) { return parse_process(s, Dialect::Session); }

struct Sample {
  STContext g;
  Process p;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (const auto& e : corpus()) out.push_back({e.context, e.process});
  for (auto& t : generate_terms(17, 120)) out.push_back({t.context, t.process});
  return out;
}

}  // namespace

TEST_SUITE("check_ch") {
  TEST_CASE("axiom and cut") {
    CHECK(check_ch(ch("fwd x y"), parse_ch_context("x: bullet\ny: bullet")).ok());
    CHECK(check_ch(translate_ch(sp("new(x,y:!end.end) (x!(n).0 | y?(s).0)")), parse_ch_context("n: bullet")).ok());
    CHResult p2 = check_ch(translate_ch(witness(2).process), parse_ch_context("n: bullet"));
    REQUIRE_FALSE(p2.ok());
    CHECK(p2.error->kind == TypeErrorKind::CutArityError);
  }

  TEST_CASE("rejections") {
    CHResult lin = check_ch(Process::inact(), parse_ch_context("x: bullet*bullet"));
    REQUIRE_FALSE(lin.ok());
    CHECK(lin.error->kind == TypeErrorKind::LinearityViolation);
    CHResult free_out = check_ch(parse_process("x!(a).0", Dialect::PI), parse_ch_context("x: bullet*bullet"));
    CHECK_FALSE(free_out.ok());
    CHResult mismatch = check_ch(ch("x?(y).0"), parse_ch_context("x: bullet*bullet"));
    REQUIRE_FALSE(mismatch.ok());
    CHECK(mismatch.error->kind == TypeErrorKind::TypeMismatch);
    CHResult cyc = check_ch(translate_ch(corpus_entry("cyclic").process), parse_ch_context("n: bullet"));
    REQUIRE_FALSE(cyc.ok());
    CHECK(cyc.error->kind == TypeErrorKind::CutArityError);
  }

  TEST_CASE("connectives") {
    CHECK(check_ch(ch("x?(y).0"), parse_ch_context("x: bullet par bullet")).ok());
    CHECK(check_ch(ch("x!(y).(0 | 0)"), parse_ch_context("x: bullet*bullet")).ok());
    CHECK(check_ch(ch("x#a.0"), parse_ch_context("x: +{a: bullet, b: bullet}")).ok());
    CHECK(check_ch(ch("x&{a: 0, b: 0}"), parse_ch_context("x: &{a: bullet, b: bullet}")).ok());
    CHECK_FALSE(check_ch(ch("x&{a: 0}"), parse_ch_context("x: &{a: bullet, b: bullet}")).ok());
    CHResult d = check_ch(ch("x?(y).0"), parse_ch_context("x: bullet par bullet"));
    REQUIRE(d.ok());
    CHECK(d.derivation.rule == "T-par");
  }

  TEST_CASE("inference") {
    CHInference inf = infer_ch(ch("x?(y).y?(z).0"));
    REQUIRE_FALSE(inf.error);
    CHECK(check_ch(ch("x?(y).y?(z).0"), inf.context).ok());
    CHECK(ch_cotypable(ch("x?(y).0"), ch("x?(z).0")));
    CHECK_FALSE(ch_cotypable(ch("x?(y).0"), ch("x!(y).(0 | 0)")));
  }

  TEST_CASE("property: inference agrees with checking") {
    for (const auto& s : samples()) {
      Process p = translate_ch(s.p);
      CHInference inf = infer_ch(p);
      bool checked = check_ch(p, encode_ctx_c(s.g)).ok();
      if (checked) CHECK_FALSE(inf.error);
      if (!inf.error) CHECK(check_ch(p, inf.context).ok());
    }
  }

  TEST_CASE("property: C-typing matches degree at most one") {
    for (const auto& s : samples()) {
      bool checked = check_ch(translate_ch(s.p), encode_ctx_c(s.g)).ok();
      Classification c = classify(s.g, s.p);
      CHECK_MESSAGE(checked == (c.min_degree && *c.min_degree <= 1), render(s.p));
    }
  }

  TEST_CASE("property: accepted terms closed by a catalyzer are deadlock free") {
    for (const auto& s : samples()) {
      Process p = translate_ch(s.p);
      if (!check_ch(p, encode_ctx_c(s.g)).ok()) continue;
      Process closed = catalyzer(s.g).plug(p);
      CHECK_MESSAGE(deadlock_verdict(closed, Dialect::CH).deadlock_free, render(closed));
    }
  }

  TEST_CASE("property: reduction preserves C-typing") {
    for (const auto& s : samples()) {
      Process p = translate_ch(s.p);
      CHContext d = encode_ctx_c(s.g);
      if (!check_ch(p, d).ok()) continue;
      StateGraph g = explore(p, Dialect::CH);
      for (const auto& st : g.states) CHECK_MESSAGE(check_ch(st, d).ok(), render(st));
    }
  }
}
