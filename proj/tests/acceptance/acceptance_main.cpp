// Runs AC1..AC10 and prints one PASS/FAIL line per criterion. Artifacts and a
// summary go under --out. Exit status is nonzero if any criterion fails.
#include "erw/harness/acceptance.hpp"
#include "erw/harness/csv.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
  using namespace erw::harness;
  CLI::App app{"Acceptance criteria"};
  std::string out = "acceptance";
  AcceptanceContext ctx;
  bool verbose = false;
  app.add_option("--out", out, "Artifact directory");
  app.add_option("--seed", ctx.seed, "Master seed");
  app.add_option("--workers", ctx.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--verbose", verbose, "Print per-criterion details");
  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path dir(out);
  std::string summary;
  std::size_t failed = 0;
  auto report = [&](const AcceptanceResult& r) {
    std::cout << r.line() << "\n";
    char t[32];
    std::snprintf(t, sizeof t, "%.1f", r.seconds);
    std::cerr << "  (" << r.id << " took " << t << " s)\n";
    if (verbose && !r.details.empty()) std::cerr << r.details << "\n";
    std::cout.flush();
    for (const auto& a : r.artifacts) write_text(dir / a.name, a.text);
    summary += r.line() + "\n";
    if (!r.details.empty()) write_text(dir / (r.id + "_details.txt"), r.details);
    failed += r.pass ? 0 : 1;
  };

  try {
    run_acceptance(ctx, report);
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  write_text(dir / "summary.txt", summary);
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
