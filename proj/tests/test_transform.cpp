#include <doctest.h>

#include "sesstk/check_ch.hpp"
#include "sesstk/check_kb.hpp"
#include "sesstk/check_st.hpp"
#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/transform.hpp"

using namespace sesstk;

namespace {

Process sp(const char* s) { return parse_process(s, Dialect::Session); }
Process ch(const char* s) { return parse_process(s, Dialect::CH); }
SessionType st(const char* s) { return parse_session_type(s); }

struct Sample {
  std::string name;
  STContext g;
  Process p;
};

std::vector<Sample> samples() {
  std::vector<Sample> out;
  for (const auto& e : corpus()) out.push_back({e.name, e.context, e.process});
  std::size_t i = 0;
  for (auto& t : generate_terms(41, 80)) out.push_back({"gen" + std::to_string(i++), t.context, t.process});
  return out;
}

bool in_kn(const Sample& s) {
  if (!check_st(s.g, s.p).ok()) return false;
  TypedEncoding e = encode_typed(s.g, s.p);
  return degree(e.context, e.process).degree.has_value();
}

}  // namespace

TEST_SUITE("transform") {
  TEST_CASE("translation into CH") {
    CHECK(render(translate_ch(sp("x!(v).0"))) == "x!(%z0).(fwd %z0 v | 0)");
    CHECK(alpha_equiv(translate_ch(sp("new(x,y:!end.end)(x!(n).0 | y?(z).0)")),
                      ch("new x (x!(a).(fwd a n | 0) | x?(z).0)")));
    CHECK(render(translate_ch(sp("x#l.0"))) == "x#l.0");
  }

  TEST_CASE("encoding into PI") {
    CHECK(render(encode_proc(sp("x#l.0"))) == "new %c0 x!(l(%c0)).0");
    CHECK(render(encode_proc(sp("new(x,y:!end.end)(x!(n).0 | y?(z).0)"))) ==
          "new %c0 (new %c2 %c0!(n, %c2).0 | %c0?(z, %c1).0)");
    CHECK(render(encode_proc(Process::inact())) == "0");
    CHECK(render(encode_proc(sp("x!(v).0"), {{"x", "c"}})) == "new %c0 c!(v, %c0).0");
  }

  TEST_CASE("characteristic processes") {
    CHECK(render(char_proc(SessionType::end(), "x")) == "0");
    CHECK(render(char_proc(st("?end.end"), "x")) == "x?(y).(0 | 0)");
    CHECK(render(char_proc(st("+{a: end, b: end}"), "x")) == "x#a.0");
    for (const auto& t : types_up_to_depth(2))
      CHECK_MESSAGE(check_ch(char_proc(t, "x"), CHContext{{"x", encode_c(t)}}).ok(), render(t));
  }

  TEST_CASE("catalyzers") {
    CHECK(catalyzer(STContext{}).render() == "[]");
    CHECK(catalyzer(STContext{{"x", SessionType::end()}}).render() == "new x ([] | 0)");
    CHECK(catalyzer(STContext{{"x", st("!end.end")}}).render() == "new x ([] | x?(y).(0 | 0))");
    CHECK(ProcessContext::hole().plug(Process::inact()) == Process::inact());
  }

  TEST_CASE("pseudo-nondeterministic choice") {
    Process f = fakepar(Process::inact(), Process::inact(), "k");
    CHECK(render(f) == "new k (k#inl.0 | k&{inl: 0, inr: 0})");
    auto r = step(f, Dialect::CH);
    REQUIRE(r.size() == 1);
    CHECK(r[0].label.kind == ReductionLabel::Kind::Choice);
    CHECK(r[0].label.data == "INL");
    CHECK(r[0].target == normal_form(parse_process("0 | 0", Dialect::CH)));
    CHECK(render(fakepar(Process::inact(), Process::inact(), "k", "inr")) ==
          "new k (k#inr.0 | k&{inl: 0, inr: 0})");
    CHECK_THROWS_AS(fakepar(ch("k#a.0"), Process::inact(), "k"), std::invalid_argument);
    CHECK_THROWS_AS(fakepar(Process::inact(), Process::inact(), "k", "left"), std::invalid_argument);
  }

  TEST_CASE("rewriting") {
    CHECK(rewrite(STContext{{"x", SessionType::end()}}, Process::inact()) == Process::inact());
    STContext g{{"x", st("?end.end")}};
    Process r = rewrite(g, sp("x?(y).0"));
    CHECK(r.kind == Process::Kind::In);
    CHECK(r.subject == "x");
    CHECK_THROWS_AS(rewrite(STContext{}, sp("x!(v).0")), TypeErrorException);
    Witness p2 = witness(2);
    CHECK(check_ch(rewrite(p2.context, p2.process), encode_ctx_c(p2.context)).ok());
  }

  TEST_CASE("rewriting is compositional") {
    STContext g{{"n", SessionType::end()}};
    Process p = sp("new(x,y:!end.end)(x!(n).0 | y?(z).0)");
    Process r = rewrite(g, p);
    REQUIRE(r.kind == Process::Kind::Res);
    const Name k = r.subject;
    REQUIRE(r.children[0].kind == Process::Kind::Par);
    const Process& sel = r.children[0].children[0];
    const Process& br = r.children[0].children[1];
    CHECK(sel.kind == Process::Kind::Sel);
    CHECK(sel.subject == k);
    CHECK(sel.labels == std::vector<std::string>{"inl"});
    REQUIRE(br.kind == Process::Kind::Branch);
    CHECK(br.subject == k);
    CHECK(br.labels == std::vector<std::string>{"inl", "inr"});

    // Each branch: characteristic processes of the other side, then the
    // one-sided rewrite closed by a catalyzer.
    auto side = [](const Process& alt) {
      REQUIRE(alt.kind == Process::Kind::Par);
      CHECK(alt.children[0] == Process::inact());
      const Process& cat = alt.children[1];
      REQUIRE(cat.kind == Process::Kind::Res);
      REQUIRE(cat.children[0].kind == Process::Kind::Par);
      return std::make_tuple(cat.subject, cat.children[0].children[0], cat.children[0].children[1]);
    };
    auto [z1, left, chi1] = side(br.children[0]);
    CHECK(alpha_equiv(rename(left, z1, "x"),
                      rewrite(STContext{{"n", SessionType::end()}, {"x", st("!end.end")}}, sp("x!(n).0"))));
    CHECK(alpha_equiv(rename(chi1, z1, "x"), char_proc(st("?end.end"), "x")));
    auto [z2, right, chi2] = side(br.children[1]);
    CHECK(alpha_equiv(rename(right, z2, "y"), rewrite(STContext{{"y", st("?end.end")}}, sp("y?(z).0"))));
    CHECK(alpha_equiv(rename(chi2, z2, "y"), char_proc(st("!end.end"), "y")));
  }

  TEST_CASE("property: rewrite maps restriction-of-parallel to a choice") {
    for (auto& t : generate_terms(5, 60)) {
      Process r = rewrite(t.context, t.process);
      REQUIRE(r.kind == Process::Kind::Res);
      REQUIRE(r.children[0].kind == Process::Kind::Par);
      CHECK(r.children[0].children[0].kind == Process::Kind::Sel);
      CHECK(r.children[0].children[1].kind == Process::Kind::Branch);
      CHECK(is_valid(r, Dialect::CH));
    }
  }

  TEST_CASE("property: catalyzers preserve typability") {
    std::size_t checked = 0;
    for (const auto& s : samples()) {
      Process t = translate_ch(s.p);
      CHContext full = encode_ctx_c(s.g);
      if (!check_ch(t, full).ok()) continue;
      const auto& bs = s.g.bindings();
      for (std::size_t mask = 0; mask < (std::size_t{1} << bs.size()); ++mask) {
        STContext sub;
        CHContext rest = full;
        for (std::size_t i = 0; i < bs.size(); ++i)
          if (mask >> i & 1) {
            sub.set(bs[i].first, bs[i].second);
            rest.erase(bs[i].first);
          }
        CHECK_MESSAGE(check_ch(catalyzer(sub).plug(t), rest).ok(), s.name);
        ++checked;
      }
    }
    CHECK(checked > 10);
  }

  TEST_CASE("property: rewriting preserves typability") {
    std::size_t checked = 0;
    for (const auto& s : samples()) {
      if (!in_kn(s)) continue;
      for (const char* inx : {"inl", "inr"}) {
        Process r = rewrite(s.g, s.p, RewriteOptions{inx});
        CHResult c = check_ch(r, encode_ctx_c(s.g));
        CHECK_MESSAGE(c.ok(), (s.name + ": " + render(r)));
      }
      ++checked;
    }
    CHECK(checked > 50);
  }

  TEST_CASE("property: typed encoding is KB-typable") {
    for (const auto& s : samples()) {
      if (!check_st(s.g, s.p).ok()) {
        CHECK_THROWS_AS(encode_typed(s.g, s.p), TypeErrorException);
        continue;
      }
      TypedEncoding e = encode_typed(s.g, s.p);
      CHECK(level_var_bound(e.context) <= e.level_count);
      CHECK(level_var_bound(e.process) <= e.level_count);
    }
  }
}
