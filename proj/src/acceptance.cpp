#include "sesstk/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "sesstk/check_ch.hpp"
#include "sesstk/check_kb.hpp"
#include "sesstk/check_st.hpp"
#include "sesstk/corpus.hpp"
#include "sesstk/generate.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/transform.hpp"
#include "sesstk/usage.hpp"

namespace sesstk {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string degree_text(const std::optional<std::size_t>& d) {
  return d ? std::to_string(*d) : "none";
}

ClassifyOptions classify_options(const AcceptanceOptions& opts) {
  ClassifyOptions c;
  c.kb.measure_sharing = !opts.disable_sharing;
  return c;
}

KBOptions kb_options(const AcceptanceOptions& opts) {
  KBOptions k;
  k.measure_sharing = !opts.disable_sharing;
  return k;
}

/// Duality with the choice constructors left unswapped.
SessionType broken_dual(const SessionType& t) {
  using K = SessionType::Kind;
  SessionType out = t;
  switch (t.kind) {
    case K::End: break;
    case K::In: out.kind = K::Out; break;
    case K::Out: out.kind = K::In; break;
    case K::Branch: out.kind = K::Select; break;
    case K::Select: break;
  }
  if (t.kind == K::In || t.kind == K::Out) {
    out.args[1] = broken_dual(t.args[1]);
  } else {
    for (auto& a : out.args) a = broken_dual(a);
  }
  return out;
}

void hierarchy_strictness(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "strict hierarchy: witness(n) has least degree n";
  r.limit = 5;
  std::ostringstream out;
  r.pass = true;
  double slowest = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    Witness w = witness(n);
    auto t0 = Clock::now();
    Classification c = classify(w.context, w.process, classify_options(opts));
    slowest = std::max(slowest, since(t0));
    out << (n > 1 ? " " : "") << "w" << n << "=" << degree_text(c.min_degree);
    if (c.min_degree != n) r.pass = false;
  }
  if (slowest > r.limit) r.pass = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "; slowest %.2fs", slowest);
  r.detail = out.str() + buf;
}

void k1_in_k2(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "two shared sessions: accepted at degree 2, rejected at 1";
  const CorpusEntry& e = corpus_entry("witness2");
  TypedEncoding enc = encode_typed(e.context, e.process);
  KBResult at2 = check_kb(enc.context, enc.process, 2, kb_options(opts));
  KBResult at1 = check_kb(enc.context, enc.process, 1, kb_options(opts));
  bool rejected = at1.error && at1.error->kind == TypeErrorKind::SharingExceeded && at1.error->count == 2;
  r.pass = at2.ok() && rejected;
  r.detail = std::string("n=2 ") + (at2.ok() ? "accepted" : at2.error->record()) + "; n=1 " +
             (at1.ok() ? "accepted" : at1.error->record());
}

void l_equals_k1(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "L = K1 on corpus and generated terms";
  r.limit = 60;
  std::vector<std::pair<STContext, Process>> terms;
  for (const auto& e : corpus()) terms.emplace_back(e.context, e.process);
  for (auto& g : generate_terms(opts.seed, opts.generated)) terms.emplace_back(g.context, g.process);
  std::size_t agree = 0, in_l = 0, k1 = 0;
  std::string first;
  for (const auto& [g, p] : terms) {
    Classification c = classify(g, p, classify_options(opts));
    bool low = c.min_degree && *c.min_degree <= 1;
    in_l += c.in_l;
    k1 += low;
    if (c.st_ok && c.in_l == low) {
      ++agree;
    } else if (first.empty()) {
      first = render(p);
    }
  }
  r.pass = agree == terms.size();
  r.detail = std::to_string(terms.size()) + " terms, " + std::to_string(in_l) + " in L, " + std::to_string(k1) +
             " in K1, " + std::to_string(terms.size() - agree) + " disagreements";
  if (!first.empty()) r.detail += "; first: " + first;
}

void duality_commutes(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "duality commutes with both type encodings";
  r.limit = 10;
  std::function<SessionType(const SessionType&)> d = [](const SessionType& t) { return dual(t); };
  if (opts.broken_duality) d = broken_dual;
  std::size_t involution = 0, su = 0, c = 0;
  std::vector<SessionType> pop = type_population();
  for (const auto& t : pop) {
    SessionType dt = d(t);
    if (!(d(dt) == t)) ++involution;
    LevelSupply a, b;
    if (!(dual(encode_su(t, a)) == encode_su(dt, b))) ++su;
    if (!(dual(encode_c(t)) == encode_c(dt))) ++c;
  }
  r.pass = involution == 0 && su == 0 && c == 0;
  r.detail = std::to_string(pop.size()) + " types; failures: involution " + std::to_string(involution) +
             ", usage encoding " + std::to_string(su) + ", C-type encoding " + std::to_string(c);
}

void encoded_duals_reliable(CriterionResult& r, const AcceptanceOptions&) {
  r.title = "encoded dual pairs admit reliable levels";
  std::size_t unsat = 0, unreliable = 0;
  unsigned top = 0;
  std::vector<SessionType> pop = type_population();
  for (const auto& t : pop) {
    LevelSupply s;
    UsageType pair = encode_pair(t, s);
    if (pair.usage.is_empty()) continue;
    LevelProblem problem;
    problem.reserve(s.count());
    reliability_constraints(pair.usage, "x", problem);
    LevelSolution sol = solve_levels(problem, 8);
    if (!sol.satisfiable) {
      ++unsat;
      continue;
    }
    for (unsigned v : sol.values) top = std::max(top, v);
    if (!rel(instantiate(pair.usage, sol.values))) ++unreliable;
  }
  r.pass = unsat == 0 && unreliable == 0;
  r.detail = std::to_string(pop.size()) + " types; unsatisfiable " + std::to_string(unsat) + ", unreliable " +
             std::to_string(unreliable) + ", highest level " + std::to_string(top);
}

void deadlock_freedom(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "closed KB-typed terms are deadlock free";
  std::size_t checked = 0;
  std::string bad;
  for (const auto& e : corpus()) {
    if (!e.closed) continue;
    Classification c = classify(e.context, e.process, classify_options(opts));
    if (!c.min_degree) continue;
    ++checked;
    TypedEncoding enc = encode_typed(e.context, e.process);
    bool df = c.verdict.deadlock_free && deadlock_verdict(enc.process, Dialect::PI).deadlock_free;
    if (!df) bad += " " + e.name;
  }
  const CorpusEntry& cyc = corpus_entry("cyclic");
  Classification c = classify(cyc.context, cyc.process, classify_options(opts));
  bool cyclic_ok = c.st_ok && !c.min_degree && !c.verdict.deadlock_free;
  r.pass = bad.empty() && cyclic_ok && checked > 0;
  r.detail = std::to_string(checked) + " typed closed terms, stuck:" + (bad.empty() ? " none" : bad) +
             "; cyclic st=" + (c.st_ok ? "ok" : "rejected") + " kb=" + degree_text(c.min_degree) +
             " verdict=" + (c.verdict.deadlock_free ? "deadlock-free" : "stuck");
}

void rewrite_preserves(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "rewriting preserves typability";
  r.limit = 30;
  std::size_t checked = 0;
  std::string bad;
  for (const auto& e : corpus()) {
    Classification c = classify(e.context, e.process, classify_options(opts));
    if (!c.min_degree || *c.min_degree > 4) continue;
    ++checked;
    try {
      CHResult res = check_ch(rewrite(e.context, e.process), encode_ctx_c(e.context));
      if (!res.ok()) bad += " " + e.name + "(" + res.error->record() + ")";
    } catch (const std::exception& ex) {
      bad += " " + e.name + "(" + ex.what() + ")";
    }
  }
  r.pass = bad.empty() && checked > 0;
  r.detail = std::to_string(checked) + " terms rewritten; failures:" + (bad.empty() ? " none" : bad);
}

void op_correspondence(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "operational correspondence of the rewriting";
  r.limit = 60;
  std::ostringstream out;
  r.pass = true;
  for (const char* name : {"witness2", "cyclic_fixed", "witness3"}) {
    const CorpusEntry& e = corpus_entry(name);
    OpReport rep = check_op_correspondence(e.context, e.process, opts.budget);
    std::size_t unknown = 0;
    for (const auto* items : {&rep.item1, &rep.item2})
      for (const auto& it : *items) unknown += it.status == Tri::Unknown;
    if (rep.item1_status == Tri::False || rep.item2_status == Tri::False) r.pass = false;
    out << name << ": I=" << to_string(rep.item1_status) << "(" << rep.item1.size() << ") II="
        << to_string(rep.item2_status) << "(" << rep.item2.size() << ")";
    if (unknown) out << " unknown=" << unknown;
    out << "; ";
  }
  r.detail = out.str();
}

void subject_reduction(CriterionResult& r, const AcceptanceOptions& opts) {
  r.title = "reduction preserves typing in all three systems";
  std::size_t edges[3] = {0, 0, 0};
  std::string bad;
  for (const auto& e : corpus()) {
    if (check_st(e.context, e.process).ok()) {
      StateGraph sg = explore(e.process, Dialect::Session);
      for (const auto& ed : sg.edges) {
        ++edges[0];
        if (!check_st(e.context, sg.states[ed.to]).ok()) bad += " st:" + e.name;
      }
    }
    Process ch = translate_ch(e.process);
    CHContext delta = encode_ctx_c(e.context);
    if (check_ch(ch, delta).ok()) {
      StateGraph sg = explore(ch, Dialect::CH);
      for (const auto& ed : sg.edges) {
        ++edges[1];
        if (!check_ch(sg.states[ed.to], delta).ok()) bad += " ch:" + e.name;
      }
    }
    TypedEncoding enc = encode_typed(e.context, e.process);
    DegreeResult d = degree(enc.context, enc.process, kb_options(opts));
    if (d.degree) {
      StateGraph sg = explore(enc.process, Dialect::PI);
      for (const auto& ed : sg.edges) {
        ++edges[2];
        if (!check_kb(enc.context, sg.states[ed.to], *d.degree, kb_options(opts)).ok()) bad += " kb:" + e.name;
      }
    }
  }
  r.pass = bad.empty();
  r.detail = "edges st=" + std::to_string(edges[0]) + " ch=" + std::to_string(edges[1]) +
             " kb=" + std::to_string(edges[2]) + "; failures:" + (bad.empty() ? " none" : bad);
}

void characteristic_typable(CriterionResult& r, const AcceptanceOptions&) {
  r.title = "characteristic processes are C-typable";
  std::size_t bad = 0;
  std::string first;
  std::vector<SessionType> pop = type_population();
  for (const auto& t : pop) {
    CHResult res = check_ch(char_proc(t, "x"), CHContext{{"x", encode_c(t)}});
    if (!res.ok() && bad++ == 0) first = render(t) + " " + res.error->record();
  }
  r.pass = bad == 0;
  r.detail = std::to_string(pop.size()) + " types, " + std::to_string(bad) + " rejected";
  if (!first.empty()) r.detail += "; first: " + first;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  CriterionResult r;
  r.id = id;
  auto t0 = Clock::now();
  try {
    switch (id) {
      case 1: hierarchy_strictness(r, opts); break;
      case 2: k1_in_k2(r, opts); break;
      case 3: l_equals_k1(r, opts); break;
      case 4: duality_commutes(r, opts); break;
      case 5: encoded_duals_reliable(r, opts); break;
      case 6: deadlock_freedom(r, opts); break;
      case 7: rewrite_preserves(r, opts); break;
      case 8: op_correspondence(r, opts); break;
      case 9: subject_reduction(r, opts); break;
      case 10: characteristic_typable(r, opts); break;
      default: r.title = "unknown criterion"; r.detail = "no criterion " + std::to_string(id); return r;
    }
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = std::string("exception: ") + ex.what();
  }
  r.seconds = since(t0);
  // Criterion 1 limits each run, checked above.
  if (id != 1 && r.limit > 0 && r.seconds > r.limit) r.pass = false;
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    bool wanted = opts.only.empty();
    for (int k : opts.only) wanted = wanted || k == id;
    if (wanted) out.push_back(run_criterion(id, opts));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  if (r.limit > 0) {
    std::snprintf(head, sizeof head, "%s %2d  (%.2fs / %gs%s)", r.pass ? "PASS" : "FAIL", r.id, r.seconds, r.limit,
                  r.id == 1 ? " per run" : "");
  } else {
    std::snprintf(head, sizeof head, "%s %2d  (%.2fs)", r.pass ? "PASS" : "FAIL", r.id, r.seconds);
  }
  return std::string(head) + "  " + r.title + ": " + r.detail;
}

}  // namespace sesstk
