// nulllab command-line front end: estimate null parameters and non-null
// proportions from z-score files, run Monte-Carlo experiment plans, and
// generate synthetic samples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nulllab/errors.hpp"
#include "nulllab/estimator.hpp"
#include "nulllab/harness.hpp"
#include "nulllab/io.hpp"
#include "nulllab/mixture.hpp"
#include "nulllab/parallel.hpp"

namespace est = nulllab::est;
namespace io = nulllab::io;
namespace mc = nulllab::mc;
namespace mix = nulllab::mix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nulllab::ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw nulllab::ValidationError("cannot open output file: " + out_path);
  out << text;
}

std::pair<double, double> parse_known_null(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) {
    throw nulllab::ValidationError("--known-null expects \"u0,sigma0_sq\"");
  }
  try {
    std::size_t used = 0;
    const double u0 = std::stod(text.substr(0, comma), &used);
    const double s0 = std::stod(text.substr(comma + 1), &used);
    return {u0, s0};
  } catch (const std::exception&) {
    throw nulllab::ValidationError("--known-null expects \"u0,sigma0_sq\"");
  }
}

struct EstimateArgs {
  std::string input;
  std::string column;
  double gamma = 0.2;
  std::string family = "gem";
  std::string known_null;
  double t_override = 0.0;
  bool has_t_override = false;
  double variance_cap = 0.0;
  bool has_variance_cap = false;
  bool no_clamp_sigma = false;
  std::string format = "json";
  std::string out_path;
};

int run_estimate(const EstimateArgs& args) {
  io::SampleReadOptions read_opt;
  if (!args.column.empty()) read_opt.csv_column = args.column;
  mix::SampleSet samples;
  samples.values = io::read_sample_file(args.input, read_opt);
  if (samples.values.empty()) throw nulllab::EmptySampleError();

  est::Config cfg;
  cfg.gamma = args.gamma;
  cfg.family = args.family == "gev" ? est::Family::GEV : est::Family::GEM;
  cfg.clamp_sigma = !args.no_clamp_sigma;
  if (args.has_t_override) cfg.t_override = args.t_override;
  if (args.has_variance_cap) cfg.variance_cap = args.variance_cap;

  est::Report report;
  if (!args.known_null.empty()) {
    const auto [u0, s0] = parse_known_null(args.known_null);
    report = est::estimate_known_null_report(samples, cfg, u0, s0);
  } else if (cfg.family == est::Family::GEV) {
    report = est::estimate_null_gev(samples, cfg);
  } else {
    report = est::estimate_eps_plugin(samples, cfg);
  }

  write_output(args.format == "csv" ? io::report_to_csv(report) : io::report_to_json(report),
               args.out_path);
  return kExitOk;
}

struct SimulateArgs {
  std::string plan_name;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
};

void print_summary(const mc::Plan& plan, const mc::Result& result) {
  std::map<std::string, const mc::CellRecord*> best;
  for (const auto& rec : result.records) {
    const std::string key = mc::pipeline_name(rec.pipeline) + "/" + rec.estimator;
    auto it = best.find(key);
    if (it == best.end() || rec.mse < it->second->mse) best[key] = &rec;
  }
  std::cerr << "cells: " << result.records.size() << ", wall: " << result.wall_seconds << " s\n";
  if (!plan.spec.variance_cap_exact()) {
    std::cerr << "note: sigma law support is unbounded; variance cap A=" << plan.spec.variance_cap()
              << " is a 1-1e-6 quantile approximation\n";
  }
  for (const auto& [key, rec] : best) {
    std::cerr << "min MSE " << key << ": " << rec->mse << " at gamma=" << rec->gamma
              << " n=" << rec->n << " L=" << rec->L << " eps=" << rec->eps << "\n";
  }
}

int run_simulate(const SimulateArgs& args) {
  mc::Plan plan;
  if (!args.plan_name.empty()) {
    const auto plans = mc::builtin_plans();
    const auto it = plans.find(args.plan_name);
    if (it == plans.end()) {
      std::ostringstream msg;
      msg << "unknown plan '" << args.plan_name << "'; available:";
      for (const auto& [name, unused] : plans) msg << " " << name;
      throw nulllab::ValidationError(msg.str());
    }
    plan = it->second;
  } else {
    const io::RunConfig cfg = io::parse_config_text(slurp_file(args.config_path));
    if (!cfg.plan) throw nulllab::ValidationError("config has no plan section");
    plan = *cfg.plan;
  }
  plan.master_seed = args.seed;

  const mc::Result result = mc::run_plan(plan);
  write_output(args.format == "json" ? io::result_to_json(result) : io::result_to_csv(result),
               args.out_path);
  print_summary(plan, result);
  return kExitOk;
}

struct GenArgs {
  std::string model;
  std::size_t n = 0;
  std::size_t block_L = 0;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_gen(const GenArgs& args) {
  mix::MixtureSpec spec;
  const auto plans = mc::builtin_plans();
  if (const auto it = plans.find(args.model); it != plans.end()) {
    spec = it->second.spec;
  } else {
    spec = io::model_from_json_text(slurp_file(args.model));
  }
  if (args.n == 0) throw nulllab::ValidationError("gen: --n must be >= 1");

  const mix::SampleSet samples = args.block_L == 0
                                     ? mix::sample_iid(spec, args.n, args.seed)
                                     : mix::sample_block_dependent(spec, args.n, args.block_L,
                                                                   args.seed);
  std::ostringstream out;
  io::write_sample_file(out, samples, spec);
  write_output(out.str(), args.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nulllab: empirical-null and non-null-proportion estimation"};
  app.require_subcommand(1);

  EstimateArgs est_args;
  CLI::App* cmd_est = app.add_subcommand("estimate", "Estimate (u0, sigma0_sq, eps) from a file");
  cmd_est->add_option("input", est_args.input, "newline-delimited reals, or CSV with --column")
      ->required();
  cmd_est->add_option("--column", est_args.column, "CSV column (header name or 0-based index)");
  cmd_est->add_option("--gamma", est_args.gamma, "frequency calibration parameter")
      ->capture_default_str();
  cmd_est->add_option("--family", est_args.family, "estimator family")
      ->check(CLI::IsMember({"gem", "gev"}))
      ->capture_default_str();
  cmd_est->add_option("--known-null", est_args.known_null,
                      "known null parameters \"u0,sigma0_sq\": estimate eps only");
  cmd_est->add_option("--t", est_args.t_override, "bypass t_n(gamma) with a fixed frequency");
  cmd_est->add_flag("--no-clamp-sigma", est_args.no_clamp_sigma,
                    "report the raw sigma0_sq estimate without flooring");
  cmd_est->add_option("--A", est_args.variance_cap,
                      "known variance cap (enables the variance-bound diagnostic)");
  cmd_est->add_option("--format", est_args.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd_est->add_option("--out", est_args.out_path, "write the report here instead of stdout");

  SimulateArgs sim_args;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "Run a Monte-Carlo experiment plan");
  auto* plan_opt = cmd_sim->add_option("--plan", sim_args.plan_name, "built-in plan name");
  auto* config_opt = cmd_sim->add_option("--config", sim_args.config_path, "run-config JSON path");
  plan_opt->excludes(config_opt);
  cmd_sim->add_option("--seed", sim_args.seed, "master seed (required; no silent entropy)")
      ->required();
  cmd_sim->add_option("--format", sim_args.format, "result format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd_sim->add_option("--out", sim_args.out_path, "write the result here instead of stdout");

  GenArgs gen_args;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate synthetic test statistics");
  cmd_gen->add_option("--model", gen_args.model, "model JSON path or built-in plan name")
      ->required();
  cmd_gen->add_option("--n", gen_args.n, "number of observations")->required();
  cmd_gen->add_option("--block-L", gen_args.block_L, "moving-average block length (0 = i.i.d.)")
      ->capture_default_str();
  cmd_gen->add_option("--seed", gen_args.seed, "sampling seed (required)")->required();
  cmd_gen->add_option("--out", gen_args.out_path, "output sample file")->required();

  bool has_t = false, has_cap = false;
  cmd_est->callback([&]() {
    has_t = cmd_est->count("--t") > 0;
    has_cap = cmd_est->count("--A") > 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  est_args.has_t_override = has_t;
  est_args.has_variance_cap = has_cap;

  try {
    if (cmd_est->parsed()) return run_estimate(est_args);
    if (cmd_sim->parsed()) return run_simulate(sim_args);
    if (cmd_gen->parsed()) return run_gen(gen_args);
    return kExitValidation;
  } catch (const nulllab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nulllab::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
