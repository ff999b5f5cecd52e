#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sesstk/acceptance.hpp"
#include "sesstk/check_ch.hpp"
#include "sesstk/check_kb.hpp"
#include "sesstk/check_st.hpp"
#include "sesstk/hierarchy.hpp"
#include "sesstk/semantics.hpp"
#include "sesstk/transform.hpp"

using json = nlohmann::ordered_json;
using namespace sesstk;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  std::ostringstream out;
  if (path == "-") {
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  out << in.rdbuf();
  return out.str();
}

/// Terms are separated by blank lines.
std::vector<std::string> split_terms(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line, cur;
  auto flush = [&] {
    if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
    cur.clear();
  };
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
    } else {
      cur += line + "\n";
    }
  }
  flush();
  if (out.empty()) throw UsageError("no term in input");
  return out;
}

json error_json(const TypeError& e) {
  json j{{"kind", to_string(e.kind)}, {"name", e.name}, {"at", e.location}, {"message", e.message}};
  if (e.kind == TypeErrorKind::SharingExceeded) j["count"] = e.count;
  return j;
}

struct Output {
  bool pretty = false;
  void emit(const json& j) const { std::cout << (pretty ? j.dump(2) : j.dump()) << "\n"; }
};

struct Common {
  std::string ctx_file;
  std::string term_file;
  unsigned l_max = 0;
  std::string count_mode = "names";
  std::size_t max_states = kDefaultMaxStates;

  KBOptions kb() const {
    KBOptions o;
    o.l_max = l_max;
    o.count_assignments = count_mode == "assignments";
    return o;
  }
};

bool try_session(const std::string& ctx, const std::string& term, STContext& g, Process& p) {
  try {
    g = parse_st_context(ctx);
    p = parse_process(term, Dialect::Session);
    return true;
  } catch (const ParseError&) {
  } catch (const DialectError&) {
  }
  return false;
}

int cmd_check(const Common& c, const std::string& system, std::optional<std::size_t> n, const Output& out) {
  if (n && system != "kb") throw UsageError("--degree is only valid with --system kb");
  std::string ctx = read_input(c.ctx_file);
  int status = kOk;
  for (const auto& text : split_terms(read_input(c.term_file))) {
    json j{{"system", system}};
    std::optional<TypeError> err;
    STContext sg;
    Process sp;
    bool session = try_session(ctx, text, sg, sp);
    if (system == "st") {
      if (!session) {
        sg = parse_st_context(ctx);
        sp = parse_process(text, Dialect::Session);
      }
      j["term"] = render(sp);
      err = check_st(sg, sp).error;
    } else if (system == "ch") {
      Process p = session ? translate_ch(sp) : parse_process(text, Dialect::CH);
      CHContext d = session ? encode_ctx_c(sg) : parse_ch_context(ctx);
      j["term"] = render(p);
      err = check_ch(p, d).error;
    } else {
      KBContext g;
      Process p;
      if (session) {
        TypedEncoding enc = encode_typed(sg, sp);
        g = enc.context;
        p = enc.process;
      } else {
        g = parse_kb_context(ctx);
        p = parse_process(text, Dialect::PI);
      }
      j["term"] = render(p);
      if (n) {
        KBResult r = check_kb(g, p, *n, c.kb());
        j["degree"] = *n;
        err = r.error;
      } else {
        DegreeResult d = degree(g, p, c.kb());
        if (d.degree) j["degree"] = *d.degree;
        err = d.error;
      }
    }
    j["ok"] = !err;
    if (err) {
      j["error"] = error_json(*err);
      std::cerr << err->record() << "\n";
      status = kRejected;
    }
    out.emit(j);
  }
  return status;
}

int cmd_classify(const Common& c, const Output& out) {
  STContext g = parse_st_context(read_input(c.ctx_file));
  ClassifyOptions opts;
  opts.kb = c.kb();
  opts.max_states = c.max_states;
  int status = kOk;
  for (const auto& text : split_terms(read_input(c.term_file))) {
    Process p = parse_process(text, Dialect::Session);
    Classification r = classify(g, p, opts);
    json j{{"term", render(p)},
           {"st_ok", r.st_ok},
           {"min_degree", r.min_degree ? json(*r.min_degree) : json("NOT_TYPABLE")},
           {"in_L", r.in_l},
           {"verdict", r.verdict.deadlock_free ? "DeadlockFree" : "Stuck"},
           {"cross_check", r.cross_check}};
    if (r.st_error) j["st_error"] = error_json(*r.st_error);
    if (r.kb_error) j["kb_error"] = error_json(*r.kb_error);
    if (r.ch_error) j["ch_error"] = error_json(*r.ch_error);
    if (!r.st_ok) status = kRejected;
    out.emit(j);
  }
  return status;
}

int cmd_encode(const std::string& target, const std::string& term_file, const std::string& ctx_file, bool as_json,
               const Output& out) {
  for (const auto& text : split_terms(read_input(term_file))) {
    Process p = parse_process(text, Dialect::Session);
    json j{{"target", target}};
    if (target == "ch") {
      j["process"] = render(translate_ch(p));
    } else if (ctx_file.empty()) {
      j["process"] = render(encode_proc(p));
    } else {
      TypedEncoding enc = encode_typed(parse_st_context(read_input(ctx_file)), p);
      j["context"] = render_context(enc.context);
      j["process"] = render(enc.process);
    }
    if (as_json) {
      out.emit(j);
    } else {
      std::cout << j["process"].get<std::string>() << "\n";
    }
  }
  return kOk;
}

int cmd_rewrite(const std::string& ctx_file, const std::string& term_file, const std::string& inx, bool as_json,
                const Output& out) {
  STContext g = parse_st_context(read_input(ctx_file));
  for (const auto& text : split_terms(read_input(term_file))) {
    Process p = parse_process(text, Dialect::Session);
    std::string r = render(rewrite(g, p, RewriteOptions{inx}));
    if (as_json) {
      out.emit(json{{"term", render(p)}, {"rewrite", r}, {"context", render_context(encode_ctx_c(g))}});
    } else {
      std::cout << r << "\n";
    }
  }
  return kOk;
}

int cmd_run(const std::string& term_file, const std::string& dialect_name, std::size_t max_states, bool trace,
            const Output& out) {
  auto dialect = parse_dialect(dialect_name);
  if (!dialect) throw UsageError("unknown dialect " + dialect_name);
  for (const auto& text : split_terms(read_input(term_file))) {
    Process p = parse_process(text, *dialect);
    json j{{"term", render(p)}, {"dialect", to_string(*dialect)}};
    try {
      Verdict v = deadlock_verdict(p, *dialect, max_states);
      j["states"] = v.graph.states.size();
      j["edges"] = v.graph.edges.size();
      j["terminals"] = v.graph.terminals.size();
      j["verdict"] = v.deadlock_free ? "DeadlockFree" : "Stuck";
      if (!v.deadlock_free) {
        j["stuck_state"] = render(v.graph.states[v.stuck_state]);
        j["path"] = render_path(v.graph, v.witness);
      }
      if (trace) j["trace"] = render_trace(v.graph);
    } catch (const BudgetExceeded& e) {
      j["verdict"] = "Unknown";
      j["budget_exceeded"] = true;
      std::cerr << e.what() << "\n";
      out.emit(j);
      return kRejected;
    }
    out.emit(j);
  }
  return kOk;
}

int cmd_witness(std::size_t n, const std::string& family, bool context) {
  WitnessFamily f = family == "p" ? WitnessFamily::P : family == "q" ? WitnessFamily::Q : WitnessFamily::Auto;
  Witness w = witness(n, f);
  std::cout << (context ? render_context(w.context) : render(w.process)) << "\n";
  return kOk;
}

int cmd_selftest(const AcceptanceOptions& opts) {
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    CriterionResult r = run_criterion(id, opts);
    all = all && r.pass;
    std::cout << format_result(r) << std::endl;
  }
  return all ? kOk : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session process checker: typing, encodings, classification and exploration"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--pretty", out.pretty, "Indent JSON reports");

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_ctx) {
    if (with_ctx) sub->add_option("ctx", common.ctx_file, "Context file (.ctx, - for stdin)")->required();
    sub->add_option("term", common.term_file, "Term file (.sp, - for stdin)")->required();
  };
  auto add_kb = [&](CLI::App* sub) {
    sub->add_option("--l-max", common.l_max, "Level bound (0: prefix count)");
    sub->add_option("--count-mode", common.count_mode, "Sharing count")
        ->check(CLI::IsMember({"names", "assignments"}));
  };

  auto* check = app.add_subcommand("check", "Type-check a term in one system");
  std::string system;
  std::optional<std::size_t> degree_opt;
  check->add_option("--system", system, "st, ch or kb")->required()->check(CLI::IsMember({"st", "ch", "kb"}));
  check->add_option("--degree", degree_opt, "Sharing degree (kb only)");
  add_kb(check);
  add_common(check, true);

  auto* cls = app.add_subcommand("classify", "Classify a session term in the hierarchy");
  cls->add_option("--max-states", common.max_states, "Exploration budget");
  add_kb(cls);
  add_common(cls, true);

  auto* enc = app.add_subcommand("encode", "Encode a session term");
  std::string target = "pi", enc_ctx;
  bool as_json = false;
  enc->add_option("--target", target, "pi or ch")->check(CLI::IsMember({"pi", "ch"}));
  enc->add_option("--context", enc_ctx, "Context file; annotates the pi encoding with usage types");
  enc->add_flag("--json", as_json, "Print a JSON report");
  enc->add_option("term", common.term_file, "Term file")->required();

  auto* rw = app.add_subcommand("rewrite", "Rewrite a session term into the linear fragment");
  std::string inx = "inl";
  rw->add_option("--inx", inx, "Branch taken by the pseudo-choice")->check(CLI::IsMember({"inl", "inr"}));
  rw->add_flag("--json", as_json, "Print a JSON report");
  add_common(rw, true);

  auto* run = app.add_subcommand("run", "Explore the reduction graph of a term");
  std::string dialect = "session";
  bool trace = false;
  run->add_option("--dialect", dialect, "session, ch or pi");
  run->add_option("--max-states", common.max_states, "Exploration budget");
  run->add_flag("--trace", trace, "Include the full state graph");
  run->add_option("term", common.term_file, "Term file")->required();

  auto* wit = app.add_subcommand("witness", "Print a member of the witness family");
  std::size_t wn = 1;
  std::string family = "auto";
  bool wctx = false;
  wit->add_option("n", wn, "Size")->required()->check(CLI::PositiveNumber);
  wit->add_option("--family", family, "auto, p or q")->check(CLI::IsMember({"auto", "p", "q"}));
  wit->add_flag("--context", wctx, "Print the context instead of the term");

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  AcceptanceOptions acc;
  self->add_option("--only", acc.only, "Criterion ids")->delimiter(',');
  self->add_option("--seed", acc.seed, "Generator seed");
  self->add_option("--generated", acc.generated, "Generated terms");
  self->add_flag("--mutate-duality", acc.broken_duality, "Break duality on choices");
  self->add_flag("--mutate-sharing", acc.disable_sharing, "Stop counting shared names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(common, system, degree_opt, out);
    if (*cls) return cmd_classify(common, out);
    if (*enc) return cmd_encode(target, common.term_file, enc_ctx, as_json, out);
    if (*rw) return cmd_rewrite(common.ctx_file, common.term_file, inx, as_json, out);
    if (*run) return cmd_run(common.term_file, dialect, common.max_states, trace, out);
    if (*wit) return cmd_witness(wn, family, wctx);
    if (*self) return cmd_selftest(acc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DialectError& e) {
    std::cerr << "dialect error: " << e.what() << "\n";
    return kUsage;
  } catch (const TypeErrorException& e) {
    std::cerr << e.what() << "\n";
    return kRejected;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
