#include "nlstokes/convergence.hpp"

#include "nlstokes/error.hpp"
#include "nlstokes/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlstokes {

std::vector<std::optional<double>> observed_order(std::span<const double> errors,
                                                  std::span<const double> ratios, double floor) {
  if (errors.size() < 2) return {};
  if (ratios.size() + 1 != errors.size()) {
    throw Error(ErrorCode::invalid_argument, "observed_order needs one ratio per consecutive pair");
  }
  std::vector<std::optional<double>> out(errors.size() - 1);
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double a = errors[k], b = errors[k + 1], r = ratios[k];
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "refinement ratio must be positive");
    if (r == 1.0 || !(a > floor) || !(b > floor) || !std::isfinite(a) || !std::isfinite(b)) continue;
    out[k] = std::log(a / b) / std::log(r);
  }
  return out;
}

std::vector<std::optional<double>> observed_order(std::span<const double> errors, double ratio,
                                                  double floor) {
  if (errors.size() < 2) return {};
  std::vector<double> ratios(errors.size() - 1, ratio);
  return observed_order(errors, ratios, floor);
}

namespace {

constexpr double kOrderFloor = 1e-14;

struct StudyKernels {
  RadialProfile diffusion;
  RadialProfile gradient;

  [[nodiscard]] ScaledKernel diff(double delta, int dim) const { return {diffusion, delta, dim}; }
  [[nodiscard]] ScaledKernel grad(double delta, int dim) const { return {gradient, delta, dim}; }
};

StudyKernels prepare(const RateStudy& study) {
  if (study.diffusion.role() != KernelRole::diffusion || study.gradient.role() != KernelRole::gradient) {
    throw Error(ErrorCode::invalid_argument, "rate study needs a diffusion and a gradient profile");
  }
  if (!(study.nu > 0.0)) throw Error(ErrorCode::invalid_argument, "viscosity nu must be positive");
  if (!study.normalize) return {study.diffusion, study.gradient};
  return {normalize_profile(study.diffusion, study.dim), normalize_profile(study.gradient, study.dim)};
}

RadialSymbols variant_symbols(const RateStudy& study, const StudyKernels& k, const PeriodicGrid& grid,
                              double delta) {
  switch (study.variant) {
    case StokesVariant::local:
      return RadialSymbols::local(grid);
    case StokesVariant::modified:
      return RadialSymbols::gradient_only(grid, k.grad(delta, study.dim), study.quadrature).modified();
    case StokesVariant::nonlocal:
      break;
  }
  return RadialSymbols::nonlocal(grid, k.diff(delta, study.dim), k.grad(delta, study.dim), study.quadrature);
}

void check_ladder(std::span<const double> values, bool increasing, const char* what) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool ok = increasing ? values[i] > values[i - 1] : values[i] < values[i - 1];
    if (!ok) throw Error(ErrorCode::invalid_argument, std::string(what) + " ladder must be strictly monotone");
  }
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

void fill_orders(RateReport& report, std::span<const double> ratios) {
  std::vector<double> eu, ep;
  for (const auto& r : report.rungs) {
    eu.push_back(r.err_u);
    ep.push_back(r.err_p);
  }
  report.order_u = observed_order(eu, ratios, kOrderFloor);
  report.order_p = observed_order(ep, ratios, kOrderFloor);
  auto flag = [&](const std::vector<std::optional<double>>& orders, const char* name) {
    for (std::size_t k = 0; k < orders.size(); ++k) {
      std::ostringstream os;
      if (!orders[k]) {
        os << name << " order between rungs " << k << " and " << k + 1 << " is undefined";
      } else if (*orders[k] < 0.0) {
        os << name << " order between rungs " << k << " and " << k + 1 << " is negative";
      } else {
        continue;
      }
      report.flags.push_back(os.str());
    }
  };
  flag(report.order_u, "velocity");
  flag(report.order_p, "pressure");
}

double diff_norm(const SpectralFieldd& a, const SpectralFieldd& b) { return l2_norm(a - b); }

}  // namespace

RateReport delta_refinement_study(const RateStudy& study) {
  if (study.deltas.empty() || study.Ns.empty()) {
    throw Error(ErrorCode::invalid_argument, "delta study needs deltas and a grid size");
  }
  check_ladder(study.deltas, false, "delta");
  const StudyKernels k = prepare(study);
  const PeriodicGrid grid(study.dim, study.Ns.front());
  const SpectralFieldd f = make_forcing(study.forcing, grid);
  const StokesSolution ref = solve_stokes(f, study.nu, RadialSymbols::local(grid), study.threads);

  RateReport report;
  report.study = "delta_refinement";
  report.reference = "local solve, N=" + std::to_string(grid.N());
  report.rungs.resize(study.deltas.size());
  parallel_for(study.deltas.size(), study.threads, [&](std::size_t i) {
    const double delta = study.deltas[i];
    const RadialSymbols sym = variant_symbols(study, k, grid, delta);
    const StokesSolution s = solve_stokes(f, study.nu, sym);
    RateRung& r = report.rungs[i];
    r.delta = delta;
    r.N = grid.N();
    r.err_u = diff_norm(s.velocity, ref.velocity);
    r.err_p = diff_norm(s.pressure, ref.pressure);
    r.energy_err_u = energy_norm(s.velocity - ref.velocity, sym);
  });
  std::vector<double> ratios;
  for (std::size_t i = 1; i < study.deltas.size(); ++i) ratios.push_back(study.deltas[i - 1] / study.deltas[i]);
  fill_orders(report, ratios);
  return report;
}

RateReport spectral_refinement_study(const RateStudy& study) {
  if (study.deltas.empty() || study.Ns.empty()) {
    throw Error(ErrorCode::invalid_argument, "spectral study needs delta and an N ladder");
  }
  check_ladder(as_doubles(study.Ns), true, "N");
  const StudyKernels k = prepare(study);
  const double delta = study.deltas.front();
  const int n_max = *std::max_element(study.Ns.begin(), study.Ns.end());
  const int n_ref = study.reference_N > 0 ? study.reference_N : 2 * n_max;
  if (n_ref < n_max) throw Error(ErrorCode::invalid_argument, "reference N must not be below the ladder");
  const PeriodicGrid ref_grid(study.dim, n_ref);
  // the reference table covers every coarser lattice, so all rungs share the same symbols
  const RadialSymbols sym = [&] {
    if (study.variant == StokesVariant::local) return RadialSymbols::local(ref_grid);
    const auto g = k.grad(delta, study.dim);
    if (study.variant == StokesVariant::modified) {
      return RadialSymbols::gradient_only(ref_grid, g, study.quadrature, study.threads).modified();
    }
    return RadialSymbols::nonlocal(ref_grid, k.diff(delta, study.dim), g, study.quadrature, study.threads);
  }();
  const StokesSolution ref = solve_stokes(make_forcing(study.forcing, ref_grid), study.nu, sym, study.threads);

  RateReport report;
  report.study = "spectral_refinement";
  report.reference = std::string(to_string(study.variant)) + " solve, N=" + std::to_string(n_ref);
  report.rungs.resize(study.Ns.size());
  parallel_for(study.Ns.size(), study.threads, [&](std::size_t i) {
    const PeriodicGrid grid(study.dim, study.Ns[i]);
    const StokesSolution s = solve_stokes(make_forcing(study.forcing, grid), study.nu, sym);
    RateRung& r = report.rungs[i];
    r.delta = delta;
    r.N = grid.N();
    const SpectralFieldd du = s.velocity.resampled(ref_grid) - ref.velocity;
    r.err_u = l2_norm(du);
    r.err_p = diff_norm(s.pressure.resampled(ref_grid), ref.pressure);
    r.energy_err_u = energy_norm(du, sym);
  });
  std::vector<double> ratios;
  for (std::size_t i = 1; i < study.Ns.size(); ++i) ratios.push_back(double(study.Ns[i]) / double(study.Ns[i - 1]));
  fill_orders(report, ratios);
  for (std::size_t i = 1; i < report.rungs.size(); ++i) {
    if (report.rungs[i].err_u > report.rungs[i - 1].err_u || report.rungs[i].err_p > report.rungs[i - 1].err_p) {
      report.flags.push_back("error increased from rung " + std::to_string(i - 1) + " to " + std::to_string(i));
    }
  }
  return report;
}

RateReport asymptotic_compatibility_study(const RateStudy& study) {
  if (study.deltas.empty() || study.deltas.size() != study.Ns.size()) {
    throw Error(ErrorCode::invalid_argument, "compatibility study needs matching delta and N paths");
  }
  const StudyKernels k = prepare(study);
  const int n_max = *std::max_element(study.Ns.begin(), study.Ns.end());
  const int n_ref = study.reference_N > 0 ? study.reference_N : 2 * n_max;
  if (n_ref < n_max) throw Error(ErrorCode::invalid_argument, "reference N must not be below the path");
  const PeriodicGrid ref_grid(study.dim, n_ref);
  const SpectralFieldd f_ref = make_forcing(study.forcing, ref_grid);
  const StokesSolution ref = solve_stokes(f_ref, study.nu, RadialSymbols::local(ref_grid), study.threads);

  RateReport report;
  report.study = "asymptotic_compatibility";
  report.reference = "local solve, N=" + std::to_string(n_ref);
  report.rungs.resize(study.deltas.size());
  parallel_for(study.deltas.size(), study.threads, [&](std::size_t i) {
    const double delta = study.deltas[i];
    const PeriodicGrid grid(study.dim, study.Ns[i]);
    const RadialSymbols sym = variant_symbols(study, k, grid, delta);
    const StokesSolution s = solve_stokes(make_forcing(study.forcing, grid), study.nu, sym);
    RateRung& r = report.rungs[i];
    r.delta = delta;
    r.N = grid.N();
    const SpectralFieldd u = s.velocity.resampled(ref_grid);
    r.err_u = diff_norm(u, ref.velocity);
    r.err_p = diff_norm(s.pressure.resampled(ref_grid), ref.pressure);
    if (study.triangle_terms) {
      const RadialSymbols full = variant_symbols(study, k, ref_grid, delta);
      const StokesSolution sd = solve_stokes(f_ref, study.nu, full);
      r.delta_gap_u = diff_norm(sd.velocity, ref.velocity);
      r.truncation_u = diff_norm(u, sd.velocity);
      const double bound = *r.delta_gap_u + *r.truncation_u;
      r.triangle_holds = r.err_u <= bound * (1.0 + 1e-12) + 1e-15;
      r.energy_err_u = energy_norm(u - ref.velocity, full);
    }
  });
  std::vector<double> ratios;
  for (std::size_t i = 1; i < study.deltas.size(); ++i) ratios.push_back(study.deltas[i - 1] / study.deltas[i]);
  fill_orders(report, ratios);
  for (std::size_t i = 0; i < report.rungs.size(); ++i) {
    if (report.rungs[i].triangle_holds == false) {
      report.flags.push_back("triangle bound violated at rung " + std::to_string(i));
    }
  }
  return report;
}

}  // namespace nlstokes
