#include <doctest.h>

#include "sesstk/generate.hpp"
#include "sesstk/types.hpp"

using namespace sesstk;

namespace {

SessionType st(const char* s) { return parse_session_type(s); }

// Independent duality and C-type encoding, written directly from the tables.
SessionType oracle_dual(const SessionType& t) {
  using K = SessionType::Kind;
  std::vector<std::pair<std::string, SessionType>> alts;
  switch (t.kind) {
    case K::End: return t;
    case K::In: return SessionType::out(t.payload(), oracle_dual(t.cont()));
    case K::Out: return SessionType::in(t.payload(), oracle_dual(t.cont()));
    case K::Branch:
      for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], oracle_dual(t.args[i]));
      return SessionType::select(alts);
    case K::Select:
      for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], oracle_dual(t.args[i]));
      return SessionType::branch(alts);
  }
  return t;
}

CType oracle_c(const SessionType& t) {
  using K = SessionType::Kind;
  std::vector<std::pair<std::string, CType>> alts;
  switch (t.kind) {
    case K::End: return CType::bullet();
    case K::In: return CType::par(oracle_c(t.payload()), oracle_c(t.cont()));
    case K::Out: return CType::tensor(oracle_c(oracle_dual(t.payload())), oracle_c(t.cont()));
    case K::Branch:
    case K::Select:
      for (std::size_t i = 0; i < t.labels.size(); ++i) alts.emplace_back(t.labels[i], oracle_c(t.args[i]));
      return t.kind == K::Branch ? CType::with(alts) : CType::plus(alts);
  }
  return CType::bullet();
}

std::size_t nodes(const UsageType& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += nodes(a);
  return n;
}

std::size_t nodes(const CType& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += nodes(a);
  return n;
}

}  // namespace

TEST_SUITE("types") {
  TEST_CASE("duality table") {
    CHECK(dual(st("!end.end")) == st("?end.end"));
    CHECK(dual(CType::bullet()) == CType::bullet());
    CHECK(dual(st("&{l: end}")) == st("+{l: end}"));
    CHECK(render(dual(st("!(?end.end).&{a: end, b: ?end.end}"))) == render(st("?(?end.end).+{a: end, b: !end.end}")));
  }

  TEST_CASE("usage encoding") {
    CHECK(render(encode_su(st("end"), 0, 0)) == "0[]");
    CHECK(render(encode_su(st("?end.end"), 0, 0)) == "?[0,0][0[], 0[]]");
    CHECK(encode_su(st("!(?end.end).end"), 1, 2) ==
          UsageType::chan(Usage::act(Polarity::Out, LevelTerm::constant(1), LevelTerm::constant(2)),
                          {encode_su(st("?end.end"), 1, 2), encode_su(st("end"), 1, 2)}));
    LevelSupply levels;
    CHECK(render(encode_su(st("?end.end"), levels)) == "?[$0,$1][0[], 0[]]");
    CHECK(levels.count() == 2);
  }

  TEST_CASE("C-type encoding") {
    CHECK(encode_c(st("end")) == CType::bullet());
    CHECK(encode_c(st("!end.end")) == CType::tensor(CType::bullet(), CType::bullet()));
    CHECK(encode_c(st("+{l: end}")) == CType::plus({{"l", CType::bullet()}}));
  }

  TEST_CASE("context encodings") {
    CHECK(encode_ctx_c(STContext{}).size() == 0);
    CHECK(render_context(encode_ctx_c(parse_st_context("n: end"))) == "n: bullet");
    LevelSupply levels;
    KBContext g = encode_ctx_su(parse_st_context("x: ?end.end\nn: end"), levels);
    REQUIRE(g.size() == 2);
    CHECK(render(*g.find("x")) == "?[$0,$1][0[], 0[]]");
    CHECK(render(*g.find("n")) == "0[]");
  }

  TEST_CASE("render and parse round trip") {
    for (const auto& t : types_up_to_depth(2)) CHECK(parse_session_type(render(t)) == t);
    for (const auto& t : types_up_to_depth(2)) {
      CType c = encode_c(t);
      CHECK(parse_ctype(render(c)) == c);
      UsageType u = encode_su(t, 1, 3);
      CHECK(parse_usage_type(render(u)) == u);
    }
  }

  TEST_CASE("population sizes") {
    CHECK(types_up_to_depth(1).size() == 7);
    CHECK(types_up_to_depth(2).size() == 211);
    CHECK(types_up_to_depth(3).size() == 178507);
    CHECK(spine_types(5).size() == 66667);
    CHECK(type_population().size() == 178507 + 66667 - 667);
  }

  TEST_CASE("property: duality agrees with the oracle and is an involution") {
    for (const auto& t : types_up_to_depth(2)) {
      CHECK(dual(t) == oracle_dual(t));
      CHECK(dual(dual(t)) == t);
      CType c = encode_c(t);
      CHECK(dual(dual(c)) == c);
      UsageType u = encode_su(t, 0, 1);
      CHECK(dual(dual(u)) == u);
    }
  }

  TEST_CASE("property: C encoding agrees with the oracle") {
    for (const auto& t : types_up_to_depth(2)) CHECK(encode_c(t) == oracle_c(t));
  }

  TEST_CASE("property: duality and encodings, both directions") {
    std::vector<SessionType> ts = types_up_to_depth(2);
    std::vector<CType> cs;
    std::vector<UsageType> us;
    for (const auto& t : ts) {
      cs.push_back(encode_c(t));
      us.push_back(encode_su(t, 0, 0));
    }
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      SessionType d = dual(ts[i]);
      CType dc = dual(cs[i]);
      UsageType du = dual(us[i]);
      for (std::size_t j = 0; j < ts.size(); ++j) {
        bool is_dual = d == ts[j];
        mismatches += is_dual != (dc == cs[j]);
        mismatches += is_dual != (du == us[j]);
      }
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("property: encodings are size-linear") {
    for (const auto& t : type_population()) {
      REQUIRE(nodes(encode_c(t)) == t.size());
      LevelSupply levels;
      REQUIRE(nodes(encode_su(t, levels)) <= 2 * t.size());
    }
  }
}
