#include "nulllab/harness.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "nulllab/errors.hpp"
#include "nulllab/parallel.hpp"
#include "nulllab/rng.hpp"

namespace nulllab::mc {

namespace {

struct RepEstimates {
  double u0_gem = 0.0, s0_gem = 0.0, eps_plugin = 0.0;
  double eps_known = 0.0;
  double u0_gev = 0.0, s0_gev = 0.0, eps_gev = 0.0;
  bool ok = false;
};

struct Stats {
  double mse = 0.0, bias = 0.0, sd = 0.0;
  std::size_t reps = 0;
};

Stats summarize(const std::vector<double>& estimates, double truth) {
  Stats out;
  out.reps = estimates.size();
  if (estimates.empty()) return out;
  KahanSum sq_err, sum;
  for (const double v : estimates) {
    sum.add(v);
    sq_err.add((v - truth) * (v - truth));
  }
  const double count = static_cast<double>(estimates.size());
  const double mean = sum.sum / count;
  out.mse = sq_err.sum / count;
  out.bias = mean - truth;
  if (estimates.size() > 1) {
    KahanSum centered;
    for (const double v : estimates) centered.add((v - mean) * (v - mean));
    out.sd = std::sqrt(centered.sum / (count - 1.0));
  }
  return out;
}

bool wants(std::span<const Pipeline> pipelines, Pipeline p) {
  for (const Pipeline q : pipelines)
    if (q == p) return true;
  return false;
}

}  // namespace

std::string pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::GemNull: return "gem";
    case Pipeline::GevNull: return "gev";
    case Pipeline::EpsKnown: return "eps_known";
    case Pipeline::EpsPlugin: return "eps_plugin";
  }
  throw ValidationError("unknown pipeline");
}

Pipeline pipeline_from_name(const std::string& name) {
  if (name == "gem") return Pipeline::GemNull;
  if (name == "gev") return Pipeline::GevNull;
  if (name == "eps_known") return Pipeline::EpsKnown;
  if (name == "eps_plugin") return Pipeline::EpsPlugin;
  throw ValidationError("unknown pipeline name: " + name);
}

void Plan::validate() const {
  spec.validate();
  if (n_grid.empty()) throw ValidationError("plan: n_grid must be nonempty");
  if (gamma_grid.empty()) throw ValidationError("plan: gamma_grid must be nonempty");
  if (L_grid.empty()) throw ValidationError("plan: L_grid must be nonempty");
  if (reps == 0) throw ValidationError("plan: reps must be >= 1");
  if (pipelines.empty()) throw ValidationError("plan: pipelines must be nonempty");
  for (const std::size_t n : n_grid)
    if (n < 2) throw ValidationError("plan: every n must be >= 2");
  for (const double g : gamma_grid)
    if (!(g > 0.0)) throw ValidationError("plan: every gamma must be positive");
  for (const double e : eps_grid)
    if (!(e >= 0.0) || !(e < 1.0)) throw ValidationError("plan: eps grid values must be in [0, 1)");
}

std::vector<CellRecord> run_cell(const mix::MixtureSpec& spec, std::size_t n, double gamma,
                                 std::size_t L, std::size_t reps, std::uint64_t seed,
                                 std::span<const Pipeline> pipelines, unsigned threads) {
  const bool need_gem = wants(pipelines, Pipeline::GemNull) || wants(pipelines, Pipeline::EpsPlugin);
  const bool need_known = wants(pipelines, Pipeline::EpsKnown);
  const bool need_gev = wants(pipelines, Pipeline::GevNull);

  est::Config cfg;
  cfg.gamma = gamma;

  std::vector<RepEstimates> outcomes(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    try {
      const std::uint64_t rep_seed = rng::derive_stream(seed, rep);
      const mix::SampleSet data = (L == 0) ? mix::sample_iid(spec, n, rep_seed)
                                           : mix::sample_block_dependent(spec, n, L, rep_seed);
      RepEstimates& out = outcomes[rep];
      if (need_gem) {
        const est::Report rep_report = est::estimate_eps_plugin(data, cfg);
        out.u0_gem = rep_report.u0_hat;
        out.s0_gem = rep_report.sigma0_sq_hat;
        out.eps_plugin = rep_report.eps_hat;
      }
      if (need_known) {
        out.eps_known = est::estimate_eps_known(data, cfg, spec.u0, spec.sigma0_sq).eps;
      }
      if (need_gev) {
        const est::Report gev_report = est::estimate_null_gev(data, cfg);
        out.u0_gev = gev_report.u0_hat;
        out.s0_gev = gev_report.sigma0_sq_hat;
        out.eps_gev = gev_report.eps_hat;
      }
      out.ok = true;
    } catch (const NumericError&) {
      outcomes[rep].ok = false;
    }
  });

  std::size_t failures = 0;
  for (const RepEstimates& o : outcomes)
    if (!o.ok) ++failures;
  if (static_cast<double>(failures) > 0.05 * static_cast<double>(reps)) {
    std::ostringstream msg;
    msg << "cell (eps=" << spec.eps << ", n=" << n << ", gamma=" << gamma << ", L=" << L << "): "
        << failures << "/" << reps << " repetitions failed";
    throw NumericError(msg.str());
  }

  auto collect = [&](double RepEstimates::*field) {
    std::vector<double> vals;
    vals.reserve(reps - failures);
    for (const RepEstimates& o : outcomes)
      if (o.ok) vals.push_back(o.*field);
    return vals;
  };

  std::vector<CellRecord> records;
  auto emit = [&](Pipeline p, const std::string& estimator, double RepEstimates::*field,
                  double truth) {
    const Stats s = summarize(collect(field), truth);
    records.push_back({spec.eps, n, gamma, L, p, estimator, s.mse, s.bias, s.sd, s.reps});
  };

  for (const Pipeline p : pipelines) {
    switch (p) {
      case Pipeline::GemNull:
        emit(p, "u0", &RepEstimates::u0_gem, spec.u0);
        emit(p, "sigma0_sq", &RepEstimates::s0_gem, spec.sigma0_sq);
        break;
      case Pipeline::EpsPlugin:
        emit(p, "u0", &RepEstimates::u0_gem, spec.u0);
        emit(p, "sigma0_sq", &RepEstimates::s0_gem, spec.sigma0_sq);
        emit(p, "eps", &RepEstimates::eps_plugin, spec.eps);
        break;
      case Pipeline::EpsKnown:
        emit(p, "eps", &RepEstimates::eps_known, spec.eps);
        break;
      case Pipeline::GevNull:
        emit(p, "u0", &RepEstimates::u0_gev, spec.u0);
        emit(p, "sigma0_sq", &RepEstimates::s0_gev, spec.sigma0_sq);
        emit(p, "eps", &RepEstimates::eps_gev, spec.eps);
        break;
    }
  }
  return records;
}

Result run_plan(const Plan& plan, unsigned threads) {
  plan.validate();
  const auto start = std::chrono::steady_clock::now();

  const std::vector<double> eps_values = plan.eps_grid.empty()
                                             ? std::vector<double>{plan.spec.eps}
                                             : plan.eps_grid;
  Result result;
  result.master_seed = plan.master_seed;

  std::uint64_t cell_index = 0;
  for (const double eps : eps_values) {
    mix::MixtureSpec spec = plan.spec;
    spec.eps = eps;
    for (const std::size_t n : plan.n_grid) {
      for (const double gamma : plan.gamma_grid) {
        for (const std::size_t L : plan.L_grid) {
          const std::uint64_t cell_seed = rng::derive_stream(plan.master_seed, cell_index++);
          auto records =
              run_cell(spec, n, gamma, L, plan.reps, cell_seed, plan.pipelines, threads);
          result.records.insert(result.records.end(), records.begin(), records.end());
        }
      }
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::map<std::string, Plan> builtin_plans() {
  // Shared base model: null N(-1, 1), u ~ Uniform(1, 2), sigma ~ Uniform(0.5, 1.5).
  mix::MixtureSpec base;
  base.u0 = -1.0;
  base.sigma0_sq = 1.0;
  base.eps = 0.05;
  base.mixing = mix::ProductLaw{mix::Uniform{1.0, 2.0}, mix::Uniform{0.5, 1.5}};
  base.delta_n = 2.0;  // inf(u - u0) for the base mixing law

  std::vector<double> gamma20(20);
  for (int i = 0; i < 20; ++i) gamma20[i] = 0.01 + static_cast<double>(i) * (0.49 / 19.0);

  std::map<std::string, Plan> plans;

  {
    Plan p;
    p.spec = base;
    p.n_grid = {50000};
    p.gamma_grid = gamma20;
    p.eps_grid = {0.025, 0.05, 0.075, 0.1, 0.2};
    plans["example1"] = p;
  }
  {
    Plan p;
    p.spec = base;
    p.spec.mixing = mix::ProductLaw{mix::GammaShifted{10.0, 0.25, base.u0}, mix::Uniform{0.5, 1.5}};
    p.spec.delta_n.reset();  // mean shift support touches u0
    p.n_grid = {50000};
    p.gamma_grid = gamma20;
    plans["example2a"] = p;
  }
  {
    Plan p;
    p.spec = base;
    p.spec.mixing = mix::ProductLaw{mix::Uniform{1.0, 2.0}, mix::GammaShifted{10.0, 0.1, 0.0}};
    p.n_grid = {50000};
    p.gamma_grid = gamma20;
    plans["example2b"] = p;
  }
  {
    Plan p;
    p.spec = base;
    p.n_grid = {10000, 30000, 50000, 80000, 100000};
    p.gamma_grid = {0.2};
    plans["example3"] = p;
  }
  {
    Plan p;
    p.spec = base;
    p.n_grid = {50000};
    p.gamma_grid = {0.2};
    p.L_grid.clear();
    p.L_grid.push_back(1);
    for (std::size_t L = 10; L <= 250; L += 10) p.L_grid.push_back(L);
    plans["example4"] = p;
  }
  return plans;
}

}  // namespace nulllab::mc
