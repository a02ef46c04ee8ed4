#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "conelab/conelab.hpp"

namespace {

void add_common_options(CLI::App* sub, conelab::ExperimentConfig& cfg) {
  sub->add_option("--cone", cfg.cone_file, "JSON cone description file");
  sub->add_option("--family", cfg.family_specs,
                  "cone family spec kind:dim[:key=value,...] (repeatable)");
  sub->add_option("--seed", cfg.seed, "master RNG seed")->capture_default_str();
  sub->add_option("--samples", cfg.samples, "boundary samples per curve/section")
      ->capture_default_str();
  sub->add_option("--interior-points", cfg.interior_points,
                  "interior points (or sections) examined per cone")
      ->capture_default_str();
  sub->add_option("--tol", cfg.tol, "verification tolerance")->capture_default_str();
  sub->add_option("--pass-threshold", cfg.pass_threshold,
                  "defect at or below this counts as a pass")
      ->capture_default_str();
  sub->add_option("--fail-threshold", cfg.fail_threshold,
                  "defect at or above this counts as a fail")
      ->capture_default_str();
  sub->add_option("--out", cfg.out_path, "write the JSON report to this path");
  sub->add_option("--csv", cfg.csv_path, "write the CSV summary to this path");
  sub->add_option("--trace", cfg.trace_path,
                  "write the optimizer trace to this path (centroid-search only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cone-lab: empirical checks relating ellipsoidal cone sections,\n"
               "flat boundary intersections, and centrally symmetric sections"};
  app.require_subcommand(1);

  conelab::ExperimentConfig cfg;
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"fbi-sweep", "measure flatness of boundary-intersection curves at interior points"},
      {"css-sweep", "measure central symmetry of randomly oriented bounded sections"},
      {"equivalence-matrix", "cross-check ellipsoid fit vs flatness vs symmetry per cone"},
      {"gamma-dump", "emit boundary-intersection curves as JSON"},
      {"hammer-stress", "check centroid chord-ratio bounds across random sections"},
      {"centroid-search", "search for the section whose centroid is a given interior point"},
  };
  for (const auto& [name, desc] : experiments) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common_options(sub, cfg);
    conelab::Experiment kind = conelab::experiment_from_string(name);
    sub->callback([&cfg, kind] { cfg.experiment = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    conelab::ExperimentResult res = conelab::run_experiment(cfg);
    conelab::write_outputs(res, cfg);
    if (cfg.out_path.empty()) {
      std::cout << res.report.dump(2) << "\n";
    } else {
      std::cout << "report written to " << cfg.out_path << "\n";
    }
    return res.exit_code;
  } catch (const conelab::SearchBudgetExhausted& e) {
    std::cerr << "search budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const conelab::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
