#include <doctest.h>

#include <functional>
#include <set>

#include "sesstk/check_st.hpp"
#include "sesstk/generate.hpp"

using namespace sesstk;

namespace {

// Every restriction sits above a chain of restrictions ending in a parallel
// composition that separates its two endpoints.
bool cut_positioned(const Process& p) {
  if (p.kind == Process::Kind::ResSession) {
    const Process* body = &p.children[0];
    while (body->kind == Process::Kind::ResSession) body = &body->children[0];
    if (body->kind != Process::Kind::Par) return false;
    NameSet l = free_names(body->children[0]), r = free_names(body->children[1]);
    bool split = (l.count(p.subject) && !l.count(p.other) && !r.count(p.subject)) ||
                 (r.count(p.subject) && !r.count(p.other) && !l.count(p.subject));
    if (!split) return false;
  }
  for (const auto& c : p.children)
    if (!cut_positioned(c)) return false;
  return true;
}

}  // namespace

TEST_SUITE("generate") {
  TEST_CASE("type enumeration") {
    CHECK(types_up_to_depth(0).size() == 1);
    CHECK(types_up_to_depth(1).size() == 7);
    for (const auto& t : types_up_to_depth(2)) CHECK(t.depth() <= 2);
    std::set<std::string> seen;
    for (const auto& t : types_up_to_depth(2)) seen.insert(render(t));
    CHECK(seen.size() == types_up_to_depth(2).size());
    for (const auto& t : spine_types(4)) CHECK(t.depth() <= 4);
  }

  TEST_CASE("random types respect the depth bound") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) CHECK(random_session_type(rng, 3).depth() <= 3);
  }

  TEST_CASE("generation is deterministic per seed") {
    auto a = generate_terms(11, 40), b = generate_terms(11, 40), c = generate_terms(12, 40);
    REQUIRE(a.size() == 40);
    bool differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].process == b[i].process);
      differ = differ || !(a[i].process == c[i].process);
    }
    CHECK(differ);
  }

  TEST_CASE("property: generated terms are typed, bounded and cut-positioned") {
    GenOptions opts;
    for (const auto& t : generate_terms(2024, 300, opts)) {
      std::size_t n = prefix_count(t.process);
      CHECK(n >= 1);
      CHECK(n <= opts.max_prefixes);
      CHECK(check_st(t.context, t.process).ok());
      CHECK_MESSAGE(cut_positioned(t.process), render(t.process));
      CHECK(free_names(t.process).size() <= 1);
    }
  }

  TEST_CASE("options are honoured") {
    GenOptions small;
    small.max_prefixes = 3;
    small.max_type_depth = 1;
    for (const auto& t : generate_terms(5, 100, small)) CHECK(prefix_count(t.process) <= 3);
  }
}
