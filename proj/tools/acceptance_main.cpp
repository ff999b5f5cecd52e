#include <CLI11.hpp>
#include <iostream>

#include "sesstk/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite: one pass/fail line per criterion"};
  sesstk::AcceptanceOptions opts;
  app.add_option("--only", opts.only, "Criterion ids")->delimiter(',');
  app.add_option("--seed", opts.seed, "Generator seed");
  app.add_option("--generated", opts.generated, "Generated terms");
  app.add_flag("--mutate-duality", opts.broken_duality, "Break duality on choices");
  app.add_flag("--mutate-sharing", opts.disable_sharing, "Stop counting shared names");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (int id = 1; id <= sesstk::kCriterionCount; ++id) {
    bool wanted = opts.only.empty();
    for (int k : opts.only) wanted = wanted || k == id;
    if (!wanted) continue;
    sesstk::CriterionResult r = sesstk::run_criterion(id, opts);
    failed += !r.pass;
    std::cout << sesstk::format_result(r) << std::endl;
  }
  std::cout << (failed ? "FAILED " + std::to_string(failed) : std::string("ALL PASS")) << std::endl;
  return failed ? 1 : 0;
}
