// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Heavier Monte-Carlo work lives here rather than in the
// unit suites; every tolerance is pinned in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nulllab/estimator.hpp"
#include "nulllab/gft.hpp"
#include "nulllab/harness.hpp"
#include "nulllab/io.hpp"
#include "nulllab/mixture.hpp"
#include "nulllab/parallel.hpp"
#include "nulllab/rng.hpp"

using nulllab::Complex;
using nulllab::KahanSum;
using nulllab::kOmega;
namespace est = nulllab::est;
namespace gft = nulllab::gft;
namespace mc = nulllab::mc;
namespace mix = nulllab::mix;

namespace {

constexpr std::uint64_t kSeed = 20260808;

mix::MixtureSpec example_spec() {
  mix::MixtureSpec spec;
  spec.u0 = -1.0;
  spec.sigma0_sq = 1.0;
  spec.eps = 0.05;
  spec.mixing = mix::ProductLaw{mix::Uniform{1.0, 2.0}, mix::Uniform{0.5, 1.5}};
  return spec;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

// ---- criterion 1: functional exactness on the null transform ------------------

bool criterion1(std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const double u0s[] = {-5.0, -3.0, -1.0, 0.0, 1.0, 3.0, 5.0};
  const double s0s[] = {0.1, 0.5, 1.0, 1.5, 2.5, 4.0, 5.0};
  const double epss[] = {0.0, 0.05, 0.1, 0.25, 0.45};
  const double ts[] = {0.1, 0.5, 1.0, 2.0, 5.0};
  double worst = 0.0;
  for (const double u0 : u0s)
    for (const double s0 : s0s)
      for (const double eps : epss)
        for (const double t : ts) {
          mix::MixtureSpec spec;
          spec.u0 = u0;
          spec.sigma0_sq = s0;
          spec.eps = eps;
          spec.mixing = mix::PointMass{u0 + 1.0, s0};
          const gft::FunctionalInput in{mix::phi0(t, spec), mix::phi0_deriv(t, spec), t};
          const double u0_err =
              std::abs(gft::u0_functional(in) - u0) / std::max(1.0, std::abs(u0));
          const double s0_err = std::abs(gft::sigma0_sq_functional(in) - s0) / std::max(1.0, s0);
          worst = std::max({worst, u0_err, s0_err});
        }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "max rel err " << worst << ", " << secs << " s";
  return worst <= 1e-12 && secs < 1.0;
}

// ---- criterion 2: population oracle vs Monte Carlo ----------------------------

bool criterion2(std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const double t = est::t_n(0.2, 50000);
  const std::size_t n = 10000000;

  std::vector<std::pair<std::string, mix::MixtureSpec>> specs;
  {
    mix::MixtureSpec pm = example_spec();
    pm.mixing = mix::PointMass{1.5, 1.0};
    specs.emplace_back("point-mass", pm);
    specs.emplace_back("uniform", example_spec());
    mix::MixtureSpec gm = example_spec();
    gm.mixing = mix::ProductLaw{mix::GammaShifted{10.0, 0.25, -1.0}, mix::Uniform{0.5, 1.5}};
    specs.emplace_back("gamma", gm);
  }

  Check check;
  std::uint64_t stream = 0;
  for (const auto& [name, spec] : specs) {
    const auto data = mix::sample_iid(spec, n, nulllab::rng::derive_stream(kSeed, stream++));
    KahanSum sum_re, sum_im, sq_re, sq_im;
    for (const double x : data.values) {
      const Complex e = std::exp(kOmega * t * x);
      sum_re.add(e.real());
      sum_im.add(e.imag());
      sq_re.add(e.real() * e.real());
      sq_im.add(e.imag() * e.imag());
    }
    const double count = static_cast<double>(n);
    const Complex mc_mean{sum_re.sum / count, sum_im.sum / count};
    const double var_re = sq_re.sum / count - mc_mean.real() * mc_mean.real();
    const double var_im = sq_im.sum / count - mc_mean.imag() * mc_mean.imag();
    const double se = std::sqrt((var_re + var_im) / count);
    const double gap = std::abs(mix::population_gchar(t, spec).value - mc_mean);
    check.expect(gap <= 4.0 * se, name + " gap " + std::to_string(gap) + " > 4 SE");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(secs < 30.0, "runtime " + std::to_string(secs) + " s exceeds 30 s");
  out << (check.ok ? "all three mixing laws within 4 SE, " : check.detail.str() + ", ")
      << secs << " s";
  return check.ok;
}

// ---- criterion 3: MSE table reproduction ---------------------------------------

bool criterion3(std::ostream& out) {
  auto plans = mc::builtin_plans();
  mc::Plan plan = plans.at("example3");
  plan.master_seed = kSeed;
  const mc::Result result = mc::run_plan(plan);

  const std::vector<std::size_t> n_grid = plan.n_grid;
  const std::map<std::string, std::vector<double>> reference = {
      {"u0", {41.28e-4, 10.46e-4, 5.66e-4, 4.01e-4, 2.73e-4}},
      {"sigma0_sq", {16.47e-4, 6.93e-4, 2.36e-4, 1.81e-4, 1.48e-4}},
      {"eps", {20.13e-4, 5.28e-4, 4.17e-4, 2.87e-4, 2.01e-4}},
  };

  Check check;
  std::ostringstream table;
  for (const auto& [estimator, expected] : reference) {
    std::vector<double> measured(n_grid.size(), 0.0);
    for (const auto& rec : result.records) {
      if (rec.estimator != estimator) continue;
      for (std::size_t i = 0; i < n_grid.size(); ++i)
        if (rec.n == n_grid[i]) measured[i] = rec.mse;
    }
    int inversions = 0;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      const double ratio = measured[i] / expected[i];
      check.expect(ratio >= 1.0 / 3.0 && ratio <= 3.0,
                   estimator + " at n=" + std::to_string(n_grid[i]) + " off by x" +
                       std::to_string(ratio));
      if (i + 1 < n_grid.size() && measured[i + 1] > measured[i]) ++inversions;
    }
    check.expect(inversions <= 1, estimator + " has " + std::to_string(inversions) + " inversions");
    table << " " << estimator << "=" << measured.back();
  }
  out << (check.ok ? "within x3 of the reference table;" : check.detail.str() + ";")
      << " mse at n=1e5:" << table.str();
  return check.ok;
}

// ---- criterion 4: gamma-sweep shape --------------------------------------------
//
// The minimizing gamma sits on a flat plateau and the largest MSE at
// gamma = 0.2 runs a few percent under its threshold, so the checks are
// measured with common random numbers across the gamma grid and with more
// repetitions than the plotting plan uses. The thresholds are unchanged.

bool criterion4(std::ostream& out) {
  auto plans = mc::builtin_plans();
  const mc::Plan plan = plans.at("example1");
  const std::size_t n = plan.n_grid.front();
  const std::vector<double>& gammas = plan.gamma_grid;

  Check check;
  std::ostringstream argmins;
  {
    const std::size_t reps = 400;
    std::vector<double> t_of_gamma(gammas.size());
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) t_of_gamma[gi] = est::t_n(gammas[gi], n);

    std::uint64_t stream = 0;
    for (const double eps : plan.eps_grid) {
      mix::MixtureSpec spec = plan.spec;
      spec.eps = eps;
      // sq_err[gi] accumulated over shared per-rep datasets
      std::vector<std::vector<double>> sq_err(gammas.size(), std::vector<double>(reps, 0.0));
      const std::uint64_t eps_stream = kSeed + 1 + stream++;
      nulllab::parallel_for(reps, 0, [&](std::size_t r) {
        const auto data = mix::sample_iid(spec, n, nulllab::rng::derive_stream(eps_stream, r));
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
          const auto pair = gft::gchar(data.values, t_of_gamma[gi]);
          const double u0_hat =
              gft::u0_functional({pair.value, pair.deriv, t_of_gamma[gi]});
          sq_err[gi][r] = (u0_hat - spec.u0) * (u0_hat - spec.u0);
        }
      });
      double best_gamma = -1.0;
      double best_mse = 1e300;
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        KahanSum acc;
        for (const double e : sq_err[gi]) acc.add(e);
        const double mse = acc.sum / static_cast<double>(reps);
        if (mse < best_mse) {
          best_mse = mse;
          best_gamma = gammas[gi];
        }
      }
      argmins << " " << best_gamma;
      check.expect(best_gamma >= 0.1 && best_gamma <= 0.3,
                   "eps=" + std::to_string(eps) + " argmin gamma " + std::to_string(best_gamma));
    }
  }

  // dedicated cells at gamma exactly 0.2 (not a grid point of the sweep)
  mc::Plan at02 = plan;
  at02.gamma_grid = {0.2};
  at02.reps = 3200;
  at02.master_seed = kSeed + 2;
  const mc::Result r02 = mc::run_plan(at02);
  double worst = 0.0;
  for (const auto& rec : r02.records) {
    worst = std::max(worst, rec.mse);
    check.expect(rec.mse <= 1e-3, "eps=" + std::to_string(rec.eps) + " " + rec.estimator +
                                      " mse " + std::to_string(rec.mse) + " at gamma=0.2");
  }
  if (check.ok) {
    out << "argmin gamma per eps:" << argmins.str() << "; worst MSE(gamma=0.2) = " << worst;
  } else {
    out << check.detail.str();
  }
  return check.ok;
}

// ---- criterion 5: dependence robustness ------------------------------------------

bool criterion5(std::ostream& out) {
  auto plans = mc::builtin_plans();
  mc::Plan plan = plans.at("example4");
  plan.master_seed = kSeed + 3;
  const mc::Result result = mc::run_plan(plan);

  Check check;
  std::map<std::string, std::map<std::size_t, double>> mse;  // estimator -> L -> mse
  for (const auto& rec : result.records) mse[rec.estimator][rec.L] = rec.mse;

  double worst_short_range = 0.0;
  for (const auto& [estimator, by_L] : mse) {
    for (const auto& [L, value] : by_L) {
      if (L <= 50) {
        worst_short_range = std::max(worst_short_range, value);
        check.expect(value < 0.02, estimator + " at L=" + std::to_string(L) + " mse " +
                                       std::to_string(value));
      }
    }
  }
  int growing = 0;
  for (const auto& [estimator, by_L] : mse) {
    if (by_L.at(250) > by_L.at(1)) ++growing;
  }
  check.expect(growing >= 2,
               "only " + std::to_string(growing) + "/3 estimators grow from L=1 to L=250");
  out << (check.ok ? "max MSE over L <= 50 is " + std::to_string(worst_short_range) +
                         "; MSE grows with L for " + std::to_string(growing) + "/3 estimators"
                   : check.detail.str());
  return check.ok;
}

// ---- criterion 6: variance bound ------------------------------------------------

bool criterion6(std::ostream& out) {
  mix::MixtureSpec spec = example_spec();
  spec.A = 2.25;
  const std::size_t n = 50000;
  const std::size_t reps = 500;
  const double t = est::t_n(0.2, n);

  std::vector<Complex> values(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto data = mix::sample_iid(spec, n, nulllab::rng::derive_stream(kSeed + 4, r));
    values[r] = gft::gchar(data.values, t).value;
  }
  Complex mean{0.0, 0.0};
  for (const Complex& v : values) mean += v;
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (const Complex& v : values) var += std::norm(v - mean);
  var /= static_cast<double>(reps - 1);

  const double bound = mix::variance_bound(t, n, spec).v_phi;
  out << "MC var " << var << " vs bound " << bound;
  return var <= bound;
}

// ---- criterion 7: bias envelope ---------------------------------------------------

bool criterion7(std::ostream& out) {
  Check check;
  double worst_margin = 1e300;
  for (const double delta : {1.5, 2.5, 4.0}) {
    for (const double sig_sq : {1.0, 2.25}) {
      mix::MixtureSpec spec = example_spec();
      spec.mixing = mix::PointMass{spec.u0 + delta, sig_sq};
      spec.delta_n = delta;
      spec.A = 2.25;
      for (int k = 1; k <= 10; ++k) {
        const double gamma = 0.05 * static_cast<double>(k);
        const double t = est::t_n(gamma, 50000);
        const double lhs = std::abs(mix::r_deriv(t, spec));
        const double rhs = mix::bias_rate_bound(t, spec);
        worst_margin = std::min(worst_margin, rhs - lhs);
        check.expect(lhs <= rhs * (1.0 + 1e-12),
                     "delta=" + std::to_string(delta) + " gamma=" + std::to_string(gamma));
      }
    }
  }
  out << (check.ok ? "envelope dominates |r'(t_n)| on all 60 configurations, min margin " +
                         std::to_string(worst_margin)
                   : check.detail.str());
  return check.ok;
}

// ---- criterion 8: family complementarity ------------------------------------------

bool criterion8(std::ostream& out) {
  const std::size_t n = 100000;
  const std::size_t reps = 100;
  const mc::Pipeline pipes[] = {mc::Pipeline::GemNull, mc::Pipeline::GevNull};

  auto mse_u0 = [&](const mix::MixtureSpec& spec, std::uint64_t seed) {
    const auto records = mc::run_cell(spec, n, 0.2, 0, reps, seed, pipes);
    double gem = 0.0, gev = 0.0;
    for (const auto& rec : records) {
      if (rec.estimator != "u0") continue;
      (rec.pipeline == mc::Pipeline::GemNull ? gem : gev) = rec.mse;
    }
    return std::pair{gem, gev};
  };

  mix::MixtureSpec elevated_mean;
  elevated_mean.u0 = -1.0;
  elevated_mean.sigma0_sq = 1.0;
  elevated_mean.eps = 0.1;
  elevated_mean.mixing = mix::PointMass{1.5, 1.0};
  const auto [em_gem, em_gev] = mse_u0(elevated_mean, kSeed + 5);

  mix::MixtureSpec elevated_var = elevated_mean;
  elevated_var.mixing = mix::PointMass{-1.0, 2.0};
  const auto [ev_gem, ev_gev] = mse_u0(elevated_var, kSeed + 6);

  out << "elevated mean: gev/gem = " << em_gev / em_gem
      << "; elevated variance: gem/gev = " << ev_gem / ev_gev;
  return em_gev >= 2.0 * em_gem && ev_gem >= 2.0 * ev_gev;
}

// ---- criterion 9: byte-identical outputs across thread counts -----------------------

std::string cli_path() {
  if (const char* env = std::getenv("NULLLAB_CLI")) return env;
  for (const char* candidate :
       {"tools/nulllab", "./tools/nulllab", "../tools/nulllab", "build/tools/nulllab"}) {
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return "nulllab";
}

bool criterion9(std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nulllab_acceptance";
  fs::create_directories(dir);
  const fs::path out1 = dir / "threads1.csv";
  const fs::path out2 = dir / "threads2.csv";

  auto run_with_threads = [&](int threads, const fs::path& path) {
    std::ostringstream cmd;
    cmd << "NULLLAB_THREADS=" << threads << " " << cli_path()
        << " simulate --plan example3 --seed 11 --out " << path.string() << " 2>/dev/null";
    return std::system(cmd.str().c_str());
  };
  if (run_with_threads(1, out1) != 0 || run_with_threads(2, out2) != 0) {
    out << "CLI invocation failed";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string a = slurp(out1);
  const std::string b = slurp(out2);
  out << "outputs " << a.size() << " bytes, " << (a == b ? "identical" : "DIFFER");
  return !a.empty() && a == b;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "functional exactness on the null transform", criterion1},
      {2, "population oracle vs Monte Carlo", criterion2},
      {3, "MSE table reproduction over growing n", criterion3},
      {4, "gamma-sweep shape", criterion4},
      {5, "dependence robustness", criterion5},
      {6, "variance bound", criterion6},
      {7, "bias envelope", criterion7},
      {8, "family complementarity", criterion8},
      {9, "byte-identical outputs across thread counts", criterion9},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.1f s) — %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                detail.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
