#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "misinfo/error.hpp"
#include "misinfo/oracle.hpp"
#include "misinfo/policy.hpp"
#include "outputs.hpp"

namespace misinfo::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool svg = false;
  std::optional<std::size_t> draws;
  std::string audience;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "64-bit seed (overrides the config)");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_flag("--svg", opts.svg, "also render SVG plots");
}

RunConfig resolve(const CommonOptions& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig{}
                                           : load_config(opts.config_path);
  if (opts.seed) cfg.seed = opts.seed;
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.svg) cfg.emit_svg = true;
  if (opts.draws) cfg.n_draws = *opts.draws;
  if (!opts.audience.empty()) {
    cfg.scenario.audience = parse_audience(opts.audience);
  }
  cfg.validate();
  if (!cfg.seed) {
    throw InvalidInput(
        "seed: required; pass --seed or set \"seed\" in the config");
  }
  return cfg;
}

// Audience for a single design: sampled around mu_bar, then shifted so its
// empirical mean prior is exactly mu_bar.
Population centered_audience(const RunConfig& cfg, const Vec& mu_bar) {
  Rng rng = make_stream(*cfg.seed, StreamTag::kAudience, 0);
  const Population sampled = sample_population(rng, cfg.scenario, mu_bar);
  const Vec shift = sampled.mean_prior() - mu_bar;
  std::vector<ViewerProfile> viewers;
  viewers.reserve(sampled.size());
  for (const auto& v : sampled.viewers()) {
    viewers.emplace_back(v.mu() - shift, v.kernel());
  }
  return Population(std::move(viewers));
}

struct DesignArgs {
  std::string xs, xt, mu_bar;
  double epsilon = 0.0;
};

int design_report(const CommonOptions& opts, const DesignArgs& args,
                  std::ostream& out) {
  const RunConfig cfg = resolve(opts);
  const auto dim = cfg.scenario.dim;
  const Vec x_s = parse_vector(args.xs, "--xs");
  require_vector(x_s, dim, "--xs");
  const Vec x_t = parse_vector(args.xt, "--xt");
  require_vector(x_t, dim, "--xt");
  Vec mu_bar = Vec::Zero(dim);
  if (!args.mu_bar.empty()) {
    mu_bar = parse_vector(args.mu_bar, "--mu-bar");
    require_vector(mu_bar, dim, "--mu-bar");
  }
  if (!(args.epsilon > 0.0)) throw InvalidInput("--epsilon: must be > 0");

  const Population pop = centered_audience(cfg, mu_bar);
  const ReporterMoments m = population_moments(pop);
  const ReportDesign design = optimal_report(m, x_s, x_t, args.epsilon);
  const bool admissible = is_admissible(design.y_star, x_t, args.epsilon);
  const SampleStats conv = population_conveyance(pop, x_s, design.y_star);
  out << design_json(design, args.epsilon, admissible, conv).dump(2) << '\n';
  return kSuccess;
}

int sweep(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = resolve(opts);
  const std::vector<double> grid = cfg.epsilon_grid.values();
  const ConvergenceCurve curve =
      sweep_epsilon(cfg.scenario, grid, cfg.n_draws, *cfg.seed);
  ensure_directory(cfg.output_dir);
  const auto csv_path = cfg.output_dir / "sweep.csv";
  write_file(csv_path, sweep_csv(curve));
  out << "wrote " << csv_path.string() << " (" << curve.size() << " rows, "
      << cfg.n_draws << " draws, " << to_string(cfg.scenario.audience)
      << " audience)\n";
  if (cfg.emit_svg) {
    const auto svg_path = cfg.output_dir / "sweep.svg";
    write_file(svg_path,
               sweep_svg(curve, "belief convergence of the optimal report (" +
                                    std::string(to_string(cfg.scenario.audience)) +
                                    " audience)"));
    out << "wrote " << svg_path.string() << '\n';
  }
  return kSuccess;
}

struct PolicyArgs {
  std::optional<double> beta;
  std::optional<double> d_min;
};

int optimize(const CommonOptions& opts, const PolicyArgs& args,
             std::ostream& out) {
  RunConfig cfg = resolve(opts);
  if (args.beta) cfg.policy.beta = *args.beta;
  if (args.d_min) cfg.policy.d_min = cfg.scenario.d_min = *args.d_min;
  cfg.validate();
  const std::vector<double> grid = cfg.epsilon_grid.values();
  const PolicyOptimum opt =
      optimize_policy(cfg.scenario, cfg.policy, grid, cfg.n_draws, *cfg.seed);
  ensure_directory(cfg.output_dir);
  write_file(cfg.output_dir / "utility.csv", utility_csv(opt.curve));
  const json summary = summary_json(opt, cfg.policy, cfg.scenario.audience,
                                    cfg.n_draws, *cfg.seed);
  write_file(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
  if (cfg.emit_svg) {
    write_file(cfg.output_dir / "utility.svg", utility_svg(opt, cfg.policy.beta));
  }
  out << summary.dump(2) << '\n';
  return kSuccess;
}

struct ValidateArgs {
  std::size_t instances = 100;
  std::size_t viewers = 5;
  double resolution = 1e-3;
  double tolerance = 1e-3;
  bool inject_lambda_bug = false;
  std::string replay;
};

struct Verdict {
  bool pass = false;
  ReportDesign design;
  OracleResult grid;
  OracleResult descent;
};

Verdict check_instance(const OracleInstance& inst, const ValidateArgs& args) {
  const ReporterMoments m = population_moments(inst.population);
  Verdict v;
  v.design = optimal_report(m, inst.x_s, inst.x_t, inst.epsilon);
  if (args.inject_lambda_bug) {
    // Negative control: a deliberately wrong multiplier.
    v.design.lambda_star += 1.0;
    v.design.y_star =
        report_for_lambda(m, inst.x_s, inst.x_t, v.design.lambda_star);
    v.design.objective = moment_objective(m, v.design.y_star, inst.x_s);
  }
  v.grid = brute_force_report(inst.population, inst.x_s, inst.x_t,
                              inst.epsilon, args.resolution);
  v.descent =
      projected_descent_report(inst.population, inst.x_s, inst.x_t, inst.epsilon);
  const bool feasible =
      (v.design.y_star - inst.x_t).norm() <= inst.epsilon + 1e-8;
  v.pass = feasible && compare(v.design, v.grid, args.tolerance) &&
           compare(v.design, v.descent, args.tolerance);
  return v;
}

std::string row(std::size_t index, const OracleInstance& inst, const Verdict& v) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%8zu  %8.4f  %10.6f  %14.8f  %14.8f  %14.8f  %s\n", index,
                inst.epsilon, v.design.lambda_star, v.design.objective,
                v.grid.objective, v.descent.objective, v.pass ? "pass" : "FAIL");
  return buf;
}

int validate(const CommonOptions& opts, const ValidateArgs& args,
             std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve(opts);
  if (cfg.scenario.dim > 3) {
    throw InvalidInput("validate: grid oracle needs scenario.dim <= 3");
  }
  std::vector<std::pair<std::size_t, OracleInstance>> cases;
  if (!args.replay.empty()) {
    std::ifstream in(args.replay);
    if (!in) throw InvalidInput("--replay: cannot open " + args.replay);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InvalidInput(std::string("--replay: ") + e.what());
    }
    const json items = doc.is_array() ? doc : json::array({doc});
    for (std::size_t i = 0; i < items.size(); ++i) {
      const json& item = items[i].contains("instance") ? items[i]["instance"]
                                                       : items[i];
      cases.emplace_back(i, instance_from_json(item));
    }
  } else {
    for (std::size_t i = 0; i < args.instances; ++i) {
      Rng rng = make_stream(*cfg.seed, StreamTag::kValidate, i);
      cases.emplace_back(i, random_instance(rng, cfg.scenario.dim, args.viewers));
    }
  }

  out << "instance   epsilon      lambda       objective     grid_oracle  "
         "descent_oracle  status\n";
  std::size_t passed = 0;
  for (const auto& [index, inst] : cases) {
    const Verdict v = check_instance(inst, args);
    out << row(index, inst, v);
    if (v.pass) {
      ++passed;
    } else {
      err << json{{"failing_instance", index},
                  {"seed", *cfg.seed},
                  {"instance", instance_json(inst)}}
                 .dump()
          << '\n';
    }
  }
  out << passed << "/" << cases.size() << " instances agree within "
      << args.tolerance << '\n';
  return passed == cases.size() ? kSuccess : kValidationFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Optimal report design and filter-radius tuning for Gaussian "
               "belief audiences"};
  app.require_subcommand(1);

  CommonOptions common;
  DesignArgs design_args;
  auto* design_cmd =
      app.add_subcommand("design-report", "optimal report for one source/truth");
  add_common(design_cmd, common);
  design_cmd->add_option("--xs", design_args.xs, "source vector, e.g. 1,0")
      ->required();
  design_cmd->add_option("--xt", design_args.xt, "truth vector")->required();
  design_cmd->add_option("--epsilon", design_args.epsilon, "filter radius")
      ->required();
  design_cmd->add_option("--mu-bar", design_args.mu_bar,
                         "audience mean belief (default: zero vector)");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "convergence statistics across filter radii");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--draws", common.draws, "scenario draws");
  sweep_cmd->add_option("--audience", common.audience,
                        "indifferent | uneducated | educated");

  PolicyArgs policy_args;
  auto* policy_cmd = app.add_subcommand(
      "optimize-policy", "pick the filter radius maximizing the utility");
  add_common(policy_cmd, common);
  policy_cmd->add_option("--draws", common.draws, "Monte Carlo samples");
  policy_cmd->add_option("--audience", common.audience,
                         "indifferent | uneducated | educated");
  policy_cmd->add_option("--beta", policy_args.beta, "permissiveness weight");
  policy_cmd->add_option("--d-min", policy_args.d_min, "falsehood margin");

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand(
      "validate", "compare the closed-form optimizer with brute force");
  add_common(validate_cmd, common);
  validate_cmd->add_option("--instances", validate_args.instances,
                           "random instances to check");
  validate_cmd->add_option("--viewers", validate_args.viewers,
                           "viewers per instance");
  validate_cmd->add_option("--resolution", validate_args.resolution,
                           "grid oracle lattice spacing");
  validate_cmd->add_option("--tol", validate_args.tolerance,
                           "objective tolerance");
  validate_cmd->add_option("--replay", validate_args.replay,
                           "re-check instances saved from a failing run");
  validate_cmd->add_flag("--inject-lambda-bug", validate_args.inject_lambda_bug,
                         "perturb the multiplier (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (design_cmd->parsed()) return design_report(common, design_args, out);
    if (sweep_cmd->parsed()) return sweep(common, out);
    if (policy_cmd->parsed()) return optimize(common, policy_args, out);
    if (validate_cmd->parsed()) {
      return validate(common, validate_args, out, err);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DegenerateModel& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const InfeasibleSampling& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kBadInput;
}

}  // namespace misinfo::cli
