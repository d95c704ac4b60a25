#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "cli/commands.hpp"

namespace {

using Command = int (*)(const kmfp::cli::Config&, const kmfp::cli::Options&, std::ostream&,
                        std::ostream&);

int run_with_config(Command cmd, const kmfp::cli::Options& opts) {
  kmfp::cli::Config cfg;
  try {
    cfg = kmfp::cli::load_config(opts.config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kmfp::cli::kConfigError;
  }
  return cmd(cfg, opts, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krasnoselski-Mann iteration, rates of asymptotic regularity and parametrized "
               "approximate fixed points"};
  app.set_version_flag("--version", std::string(KMFP_VERSION));
  app.require_subcommand(1);

  kmfp::cli::Options opts;
  std::uint64_t seed = 0, budget = 0;
  double eta = 0.0;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "JSON configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--budget", budget, "override the iteration budget");
    sub->add_option("--eta", eta, "tolerance for sampled inequalities");
    sub->add_option("--out", opts.out, "write the main output here instead of stdout");
  };

  struct Entry {
    const char* name;
    const char* help;
    Command cmd;
  };
  const Entry entries[] = {
      {"axioms", "sample the metric and (W1)-(W4) axioms of a space", kmfp::cli::cmd_axioms},
      {"iterate", "run the KM iteration and write the residual trace as CSV", kmfp::cli::cmd_iterate},
      {"rates", "evaluate h, h~, g and g~ exactly or as certified upper bounds", kmfp::cli::cmd_rates},
      {"product", "compute a certified approximate fixed point on a product space",
       kmfp::cli::cmd_product},
      {"uafpp", "tabulate and check approximate fixed point moduli", kmfp::cli::cmd_uafpp},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, true);
    subs.emplace_back(sub, e.cmd);
  }
  auto* demo = app.add_subcommand("demo", "run the acceptance scenarios and print pass/fail lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kmfp::cli::kConfigError;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--budget")) opts.budget = budget;
    if (sub->count("--eta")) opts.eta = eta;
  }

  if (demo->parsed()) {
    const auto results = kmfp::acceptance::run_all(std::cout);
    for (const auto& r : results)
      if (!r.passed) return kmfp::cli::kViolation;
    return kmfp::cli::kOk;
  }
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) return run_with_config(cmd, opts);
  return kmfp::cli::kConfigError;
}
