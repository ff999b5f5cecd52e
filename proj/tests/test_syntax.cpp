#include <doctest.h>

#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/syntax.hpp"
#include "sesstk/transform.hpp"

using namespace sesstk;

namespace {

Process sp(const char* s) { return parse_process(s, Dialect::Session); }

const char* kP2 = "new(a1,b1:?end.end) new(a2,b2:!end.end) (a1?(x).a2!(x).0 | b1!(n).b2?(z).0)";

/// Every binder renamed to a fresh name, by rebuilding through substitution.
Process rename_binders(const Process& p, int& counter) {
  using K = Process::Kind;
  Process q = p;
  auto fresh = [&] { return "r" + std::to_string(++counter); };
  switch (p.kind) {
    case K::In: {
      Substitution s;
      for (auto& b : q.binders) {
        Name f = fresh();
        s[b] = Value::chan(f);
        b = f;
      }
      q.children[0] = rename_binders(substitute(p.children[0], s), counter);
      return q;
    }
    case K::ResSession: {
      Name x = fresh(), y = fresh();
      Process body = substitute(p.children[0], {{p.subject, Value::chan(x)}, {p.other, Value::chan(y)}});
      q.subject = x;
      q.other = y;
      q.children[0] = rename_binders(body, counter);
      return q;
    }
    default:
      for (auto& c : q.children) c = rename_binders(c, counter);
      return q;
  }
}

std::vector<Process> sample_terms() {
  std::vector<Process> out;
  for (const auto& e : corpus()) out.push_back(e.process);
  for (const auto& g : generate_terms(7, 60)) out.push_back(g.process);
  return out;
}

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("parse") {
    CHECK(sp("0").kind == Process::Kind::Inact);
    Process p2 = sp(kP2);
    CHECK(p2.kind == Process::Kind::ResSession);
    CHECK(p2.subject == "a1");
    CHECK(render(p2) == kP2);
    CHECK(prefix_count(p2) == 4);
    CHECK_THROWS_AS(sp("fwd x y"), DialectError);
    CHECK_NOTHROW(parse_process("fwd x y", Dialect::CH));
    CHECK_THROWS_AS(sp("x!(n)."), ParseError);
    CHECK_THROWS_AS(parse_process("new(x,y) 0", Dialect::CH), DialectError);
    CHECK_NOTHROW(parse_process("x!(a, b).0", Dialect::PI));
    CHECK_THROWS(sp("x!(a, b).0"));
    CHECK_THROWS(sp("x?(y, y).0"));
    CHECK_THROWS(sp("x&{a: 0, a: 0}"));
  }

  TEST_CASE("render") {
    CHECK(render(Process::inact()) == "0");
    CHECK(render(Process::branch("x", {{"inl", Process::inact()}, {"inr", Process::inact()}})) ==
          "x&{inl: 0, inr: 0}");
    Process p2 = sp(kP2);
    CHECK(alpha_equiv(sp(render(p2).c_str()), p2));
  }

  TEST_CASE("free names") {
    CHECK(free_names(sp("x!(n).0")) == NameSet{"x", "n"});
    CHECK(free_names(sp("new(x,y) (x!(n).0 | y?(s).0)")) == NameSet{"n"});
    CHECK(free_names(sp(kP2)) == NameSet{"n"});
  }

  TEST_CASE("substitution") {
    CHECK(render(substitute(sp("x!(z).0"), {{"z", Value::chan("v")}})) == "x!(v).0");
    CHECK(render(substitute(sp("x?(z).z!(w).0"), {{"z", Value::chan("v")}})) == "x?(z).z!(w).0");
    CHECK(render(substitute(sp("y?(s).0"), {{"y", Value::chan("u")}})) == "u?(s).0");
    // Capture avoidance: the bound s must move out of the way of the incoming s.
    Process q = substitute(sp("x?(s).y!(s).0"), {{"y", Value::chan("s")}});
    CHECK(free_names(q) == NameSet{"x", "s"});
    CHECK_FALSE(alpha_equiv(q, sp("x?(s).s!(s).0")));
  }

  TEST_CASE("normal form") {
    Process p = sp("new(x,y:!end.end) (x!(n).0 | y?(s).0)");
    CHECK(render(normal_form(Process::par(Process::inact(), Process::par(p, Process::inact())))) ==
          render(normal_form(p)));
    CHECK(render(normal_form(parse_process("new x 0", Dialect::CH))) == "0");
    CHECK(render(normal_form(sp("new(x,y)(0 | x!(n).0 | 0)"))) == render(normal_form(sp("new(a,b)(a!(n).0)"))));
  }

  TEST_CASE("alpha equivalence") {
    CHECK(alpha_equiv(sp("x?(y).0"), sp("x?(z).0")));
    CHECK_FALSE(alpha_equiv(sp("x?(y).0"), sp("x!(y).0")));
    Process w = witness(3).process;
    int counter = 0;
    Process renamed = rename_binders(w, counter);
    CHECK(render(renamed) != render(w));
    CHECK(alpha_equiv(w, renamed));
  }

  TEST_CASE("property: render and parse round trip in every dialect") {
    for (const auto& p : sample_terms()) {
      CHECK(alpha_equiv(parse_process(render(p), Dialect::Session), p));
      Process ch = translate_ch(p);
      CHECK(alpha_equiv(parse_process(render(ch), Dialect::CH), ch));
      Process pi = encode_proc(p);
      CHECK(alpha_equiv(parse_process(render(pi), Dialect::PI), pi));
    }
  }

  TEST_CASE("property: free names after substitution") {
    const std::vector<Name> targets{"n", "u", "x1", "y2", "z3"};
    std::size_t k = 0;
    for (const auto& p : sample_terms()) {
      for (const auto& c : flatten(p).components) {
        NameSet fn = free_names(c);
        Substitution s;
        for (const auto& x : fn)
          if (k++ % 2 == 0) s[x] = Value::chan(targets[k % targets.size()]);
        s["unused"] = Value::chan("w");
        NameSet expected;
        for (const auto& x : fn)
          if (!s.count(x)) expected.insert(x);
        for (const auto& [x, v] : s)
          if (fn.count(x)) expected.insert(v.name);
        CHECK(free_names(substitute(c, s)) == expected);
      }
    }
  }

  TEST_CASE("property: normal form is idempotent and keeps free names") {
    for (const auto& p : sample_terms()) {
      Process n = normal_form(p);
      CHECK(render(normal_form(n)) == render(n));
      CHECK(free_names(n) == free_names(p));
      int counter = 0;
      CHECK(render(normal_form(rename_binders(p, counter))) == render(n));
    }
  }
}
