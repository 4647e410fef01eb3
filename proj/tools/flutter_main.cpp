#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "flutter/commands.hpp"
#include "flutter/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  std::uint64_t seed = flutter::SelfcheckOptions{}.seed;
  std::string fault;
};

int run(const std::string& verb, const Flags& f) {
#ifdef _OPENMP
  if (f.threads > 0) omp_set_num_threads(f.threads);
#endif
  if (verb == "selfcheck") {
    flutter::SelfcheckOptions opts;
    opts.seed = f.seed;
    if (!f.fault.empty()) {
      if (f.fault != "f3-sign") throw flutter::ConfigError("unknown fault '" + f.fault + "'");
      opts.inject_f3_sign_error = true;
    }
    return flutter::cmd_selfcheck(opts, std::cout, f.out);
  }
  if (f.config.empty()) throw flutter::ConfigError(verb + " requires --config");
  const flutter::RunConfig cfg = flutter::load_config(f.config);
  const auto manifest = flutter::run_command(verb, cfg, f.out);
  std::cout << manifest["results"].dump(2) << '\n';
  return flutter::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flutter instability analysis for nonassociative elastoplastic solids"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "run configuration (key = value)");
  app.add_option("--out", f.out, "output directory (overrides output.directory)");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", f.seed, "seed for randomized checks");
  app.add_option("--inject-fault", f.fault)->group("");
  for (const char* verb : {"flutter-map", "thresholds", "greens-profile", "dipole-field", "selfcheck"}) {
    app.add_subcommand(verb)->fallthrough();
  }
  app.get_subcommand("flutter-map")->description("flutter region mask over (H/mu, theta_n)");
  app.get_subcommand("thresholds")->description("positive-definiteness and ellipticity thresholds");
  app.get_subcommand("greens-profile")->description("Green's tensor along a radial ray");
  app.get_subcommand("dipole-field")->description("displacement map of a pulsating force dipole");
  app.get_subcommand("selfcheck")->description("fast invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? flutter::kExitOk : flutter::kExitConfig;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return run(verb, f);
  } catch (const flutter::ConfigError& e) {
    std::cerr << "flutter: config error: " << e.what() << '\n';
    return flutter::kExitConfig;
  } catch (const flutter::NumericalError& e) {
    std::cerr << "flutter: numerical failure: " << e.what() << '\n';
    return flutter::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "flutter: " << e.what() << '\n';
    return flutter::kExitFailure;
  }
}
