#include "nulllab/estimator.hpp"

#include <cmath>

#include "nulllab/cft.hpp"
#include "nulllab/errors.hpp"

namespace nulllab::est {

namespace {

constexpr double kNearZeroModulus = 1e-6;

double resolve_t(const Config& cfg, std::size_t n) {
  if (n < 2) throw DegenerateSampleSizeError(n);
  if (cfg.t_override) {
    if (!(*cfg.t_override > 0.0)) throw ValidationError("t_override must be positive");
    return *cfg.t_override;
  }
  return t_n(cfg.gamma, n);
}

void common_warnings(const Config& cfg, Diagnostics& diag) {
  if (cfg.variance_cap && cfg.gamma >= 1.0 / *cfg.variance_cap) {
    diag.warnings.push_back("GammaOutsideConsistencyWindow: gamma >= 1/A; consistency not covered");
  }
}

double clamp_sigma(const Config& cfg, double raw, Diagnostics& diag) {
  if (cfg.clamp_sigma && raw < kSigmaFloor) {
    diag.warnings.push_back("SigmaClamped: raw sigma0_sq estimate " + std::to_string(raw) +
                            " clamped to floor");
    return kSigmaFloor;
  }
  return raw;
}

// Plug-in evaluation of the proved variance bound, when A is known.
std::optional<double> plugin_variance_bound(const Config& cfg, double u0, double s0, double eps,
                                            double t, std::size_t n) {
  if (!cfg.variance_cap) return std::nullopt;
  const double cap = std::max(*cfg.variance_cap, s0);
  const double base = std::exp(-kSqrt2 * u0 * t + s0 * t * t) / static_cast<double>(n);
  return base * ((1.0 - eps) + eps * std::exp((cap - s0) * t * t));
}

struct GemFit {
  gft::GcharPair pair;
  double t = 0.0;
  double u0 = 0.0;
  double s0 = 0.0;
  Diagnostics diag;
};

GemFit fit_gem(const mix::SampleSet& samples, const Config& cfg) {
  GemFit fit;
  fit.t = resolve_t(cfg, samples.size());
  fit.pair = gft::gchar(samples.values, fit.t);
  const gft::FunctionalInput in{fit.pair.value, fit.pair.deriv, fit.t};
  fit.u0 = gft::u0_functional(in);
  fit.diag.raw_sigma0_sq = gft::sigma0_sq_functional(in);
  fit.s0 = clamp_sigma(cfg, fit.diag.raw_sigma0_sq, fit.diag);
  fit.diag.gchar_modulus = std::abs(fit.pair.value);
  if (fit.diag.gchar_modulus < kNearZeroModulus * std::exp(-fit.u0 * fit.t * kInvSqrt2)) {
    fit.diag.warnings.push_back("NearZeroModulus: |phi_n(t)| is tiny; estimate unstable");
  }
  common_warnings(cfg, fit.diag);
  return fit;
}

}  // namespace

double t_n(double gamma, std::size_t n) {
  if (!(gamma > 0.0)) throw ValidationError("t_n: gamma must be positive");
  if (n < 2) throw DegenerateSampleSizeError(n);
  return std::sqrt(gamma * std::log(static_cast<double>(n)));
}

NullFit estimate_null_gem(const mix::SampleSet& samples, const Config& cfg) {
  GemFit fit = fit_gem(samples, cfg);
  return {fit.u0, fit.s0, fit.t, std::move(fit.diag)};
}

gft::EpsResult estimate_eps_known(const mix::SampleSet& samples, const Config& cfg, double u0,
                                  double sigma0_sq) {
  const double t = resolve_t(cfg, samples.size());
  if (cfg.family == Family::GEV) {
    const cft::CharPair pair = cft::echar(samples.values, t);
    return cft::eps_functional(pair.value, t, u0, sigma0_sq);
  }
  const gft::GcharPair pair = gft::gchar(samples.values, t);
  return gft::eps_functional(pair.value, t, u0, sigma0_sq);
}

Report estimate_known_null_report(const mix::SampleSet& samples, const Config& cfg, double u0,
                                  double sigma0_sq) {
  Report report;
  report.t_used = resolve_t(cfg, samples.size());
  report.gamma = cfg.gamma;
  report.n = samples.size();
  report.u0_hat = u0;
  report.sigma0_sq_hat = sigma0_sq;
  report.diagnostics.raw_sigma0_sq = sigma0_sq;

  gft::EpsResult eps;
  if (cfg.family == Family::GEV) {
    const cft::CharPair pair = cft::echar(samples.values, report.t_used);
    eps = cft::eps_functional(pair.value, report.t_used, u0, sigma0_sq);
    report.diagnostics.gchar_modulus = std::abs(pair.value);
  } else {
    const gft::GcharPair pair = gft::gchar(samples.values, report.t_used);
    eps = gft::eps_functional(pair.value, report.t_used, u0, sigma0_sq);
    report.diagnostics.gchar_modulus = std::abs(pair.value);
    report.diagnostics.variance_bound =
        plugin_variance_bound(cfg, u0, sigma0_sq, eps.eps, report.t_used, samples.size());
  }
  report.eps_hat = eps.eps;
  report.diagnostics.raw_eps = eps.raw;
  common_warnings(cfg, report.diagnostics);
  return report;
}

Report estimate_eps_plugin(const mix::SampleSet& samples, const Config& cfg) {
  GemFit fit = fit_gem(samples, cfg);
  const gft::EpsResult eps = gft::eps_functional(fit.pair.value, fit.t, fit.u0, fit.s0);

  Report report;
  report.u0_hat = fit.u0;
  report.sigma0_sq_hat = fit.s0;
  report.eps_hat = eps.eps;
  report.t_used = fit.t;
  report.gamma = cfg.gamma;
  report.n = samples.size();
  report.diagnostics = std::move(fit.diag);
  report.diagnostics.raw_eps = eps.raw;
  report.diagnostics.variance_bound =
      plugin_variance_bound(cfg, fit.u0, fit.s0, eps.eps, fit.t, samples.size());
  return report;
}

Report estimate_null_gev(const mix::SampleSet& samples, const Config& cfg) {
  Report report;
  report.t_used = resolve_t(cfg, samples.size());
  report.gamma = cfg.gamma;
  report.n = samples.size();

  const cft::CharPair pair = cft::echar(samples.values, report.t_used);
  const gft::FunctionalInput in{pair.value, pair.deriv, report.t_used};
  report.u0_hat = cft::u0_functional(in);
  report.diagnostics.raw_sigma0_sq = cft::sigma0_sq_functional(in);
  report.sigma0_sq_hat = clamp_sigma(cfg, report.diagnostics.raw_sigma0_sq, report.diagnostics);

  const gft::EpsResult eps =
      cft::eps_functional(pair.value, report.t_used, report.u0_hat, report.sigma0_sq_hat);
  report.eps_hat = eps.eps;
  report.diagnostics.raw_eps = eps.raw;
  report.diagnostics.gchar_modulus = std::abs(pair.value);
  if (report.diagnostics.gchar_modulus < kNearZeroModulus) {
    report.diagnostics.warnings.push_back(
        "NearZeroModulus: |psi_n(t)| is tiny; estimate unstable");
  }
  common_warnings(cfg, report.diagnostics);
  return report;
}

}  // namespace nulllab::est
