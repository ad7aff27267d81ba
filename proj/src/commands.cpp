#include "nlstokes/commands.hpp"

#include "nlstokes/convergence.hpp"
#include "nlstokes/csv.hpp"
#include "nlstokes/forcing.hpp"
#include "nlstokes/grid1d.hpp"
#include "nlstokes/realspace.hpp"
#include "nlstokes/spectral.hpp"
#include "nlstokes/symbols.hpp"

#include "json.hpp"

#include <cmath>

namespace nlstokes {

using nlohmann::json;

namespace {

using Artifact = std::pair<std::string, CsvTable>;

struct Pending {
  std::vector<Artifact> files;
  json summary = json::object();
  std::vector<std::string> warnings;
};

ScaledKernel diffusion_kernel(const ExperimentConfig& c, double delta) {
  return {c.diffusion.profile(KernelRole::diffusion, c.dim, c.normalize), delta, c.dim};
}

ScaledKernel gradient_kernel(const ExperimentConfig& c, double delta, int dim) {
  return {c.gradient.profile(KernelRole::gradient, dim, c.normalize), delta, dim};
}

std::vector<double> sample_grid(const ExperimentConfig& c) {
  std::vector<double> xs(std::size_t(c.samples));
  for (int k = 0; k < c.samples; ++k) xs[k] = c.xi_min + (c.xi_max - c.xi_min) * double(k + 1) / double(c.samples);
  return xs;
}

void admissibility_warning(const RadialProfile& p, Pending& out) {
  if (p.admissibility() == Admissibility::inadmissible) {
    out.warnings.push_back(p.describe() + " is outside the admissible fractional range");
  }
}

Pending run_kernels(const ExperimentConfig& c) {
  Pending out;
  CsvTable table({"role", "kind", "beta", "sigma", "epsilon", "moment", "amplitude", "admissibility",
                  "monotone"});
  for (auto role : {KernelRole::diffusion, KernelRole::gradient}) {
    const KernelConfig& kc = role == KernelRole::diffusion ? c.diffusion : c.gradient;
    const RadialProfile unit = kc.profile(role, c.dim, false);
    const RadialProfile p = kc.profile(role, c.dim, c.normalize);
    admissibility_warning(p, out);
    std::string monotone = "";
    if (role == KernelRole::gradient) monotone = check_gradient_monotonicity(p, c.dim).pass ? "pass" : "fail";
    table.add_row({std::string(to_string(role)), std::string(to_string(p.kind())), table.cell(kc.beta),
                   table.cell(kc.sigma), table.cell(kc.epsilon), table.cell(kernel_moment(unit, c.dim)),
                   table.cell(p.amplitude()), std::string(to_string(p.admissibility())), monotone});
  }
  const ScaledKernel w = diffusion_kernel(c, c.delta);
  const ScaledKernel wh = gradient_kernel(c, c.delta, c.dim);
  CsvTable samples({"r", "omega_delta", "omega_hat_delta"});
  constexpr int kSamples = 200;
  for (int i = 1; i <= kSamples; ++i) {
    const double r = c.delta * double(i) / double(kSamples);
    samples.add_row({samples.cell(r), samples.cell(w(r)), samples.cell(wh(r))});
  }
  out.files.emplace_back("kernels.csv", std::move(table));
  out.files.emplace_back("kernel_samples.csv", std::move(samples));
  return out;
}

Pending run_symbols(const ExperimentConfig& c) {
  Pending out;
  const auto xs = sample_grid(c);
  const ScaledKernel g = gradient_kernel(c, c.delta, c.dim);
  admissibility_warning(g.profile(), out);
  const SymbolTable t = symbol_table(diffusion_kernel(c, c.delta), g, xs, c.quadrature, c.threads);
  out.summary["rows"] = t.rows();
  out.summary["diffusion_grading"] = t.diffusion_grading;
  out.summary["gradient_grading"] = t.gradient_grading;
  out.files.emplace_back("symbols.csv", symbol_table_csv(t));
  return out;
}

Pending run_scan(const ExperimentConfig& c) {
  Pending out;
  const ScaledKernel g = gradient_kernel(c, c.delta, c.dim);
  admissibility_warning(g.profile(), out);
  const ScanReport r = scan_b_zero_crossings(g, c.xi_max, c.samples, c.bracket_tolerance, c.quadrature, c.threads);
  out.summary["crossings"] = r.crossings.size();
  out.summary["near_zeros"] = r.near_zeros.size();
  out.summary["min_b"] = r.min_b;
  out.summary["argmin_xi"] = r.argmin_xi;
  out.summary["verdict"] = r.positive() ? "positive" : "vanishes";
  out.files.emplace_back("scan.csv", scan_csv(r));
  return out;
}

Pending run_solve(const ExperimentConfig& c) {
  Pending out;
  const PeriodicGrid grid(c.dim, c.N);
  StokesProblem problem{make_forcing(c.forcing, grid), c.nu, c.variant, std::nullopt, std::nullopt, c.quadrature,
                        c.threads};
  if (c.variant != StokesVariant::local) {
    problem.gradient = gradient_kernel(c, c.delta, c.dim);
    admissibility_warning(problem.gradient->profile(), out);
  }
  if (c.variant == StokesVariant::nonlocal) problem.diffusion = diffusion_kernel(c, c.delta);
  const StokesSolution s = solve_stokes(problem);

  CsvTable diag({"quantity", "value"});
  const double fnorm = problem.forcing.max_mode_norm();
  const std::pair<const char*, double> rows[] = {
      {"momentum_residual", s.diagnostics.momentum_residual},
      {"max_local_divergence", s.diagnostics.max_local_divergence},
      {"max_nonlocal_divergence", s.diagnostics.max_nonlocal_divergence},
      {"forcing_max_mode_norm", fnorm},
      {"velocity_l2", l2_norm(s.velocity)},
      {"pressure_l2", l2_norm(s.pressure)},
  };
  for (const auto& [name, v] : rows) {
    diag.add_row({name, diag.cell(v)});
    out.summary[name] = v;
  }
  out.files.emplace_back("solution_modes.csv", solution_modes_csv(s));
  out.files.emplace_back("diagnostics.csv", std::move(diag));
  if (c.realspace) out.files.emplace_back("solution_points.csv", solution_points_csv(s));
  return out;
}

Pending run_converge(const ExperimentConfig& c) {
  Pending out;
  RateStudy study;
  study.dim = c.dim;
  study.nu = c.nu;
  study.forcing = c.forcing;
  study.diffusion = c.diffusion.profile(KernelRole::diffusion, c.dim, c.normalize);
  study.gradient = c.gradient.profile(KernelRole::gradient, c.dim, c.normalize);
  study.normalize = false;
  study.variant = c.variant;
  study.reference_N = c.N_ref;
  study.quadrature = c.quadrature;
  study.threads = c.threads;
  admissibility_warning(study.gradient, out);

  RateReport report;
  switch (c.study) {
    case StudyKind::delta:
      study.deltas = c.deltas;
      study.Ns = {c.N};
      report = delta_refinement_study(study);
      break;
    case StudyKind::spectral:
      study.deltas = {c.delta};
      study.Ns = c.Ns;
      report = spectral_refinement_study(study);
      break;
    case StudyKind::compatibility:
      study.deltas = c.deltas;
      study.Ns = c.Ns;
      report = asymptotic_compatibility_study(study);
      break;
  }
  out.summary["study"] = report.study;
  out.summary["reference"] = report.reference;
  out.summary["flags"] = report.flags;
  out.files.emplace_back("rates.csv", rate_report_csv(report));
  if (c.study == StudyKind::compatibility) {
    CsvTable tri({"rung", "delta", "N", "err_u_L2", "delta_gap_u", "truncation_u", "triangle_holds"});
    for (std::size_t k = 0; k < report.rungs.size(); ++k) {
      const auto& r = report.rungs[k];
      tri.add_row({CsvTable::cell((long long)k), tri.cell(r.delta), CsvTable::cell((long long)r.N), tri.cell(r.err_u),
                   tri.cell(r.delta_gap_u), tri.cell(r.truncation_u),
                   r.triangle_holds ? (*r.triangle_holds ? "true" : "false") : ""});
    }
    out.files.emplace_back("triangle.csv", std::move(tri));
  }
  return out;
}

Pending run_grid1d(const ExperimentConfig& c) {
  Pending out;
  const RadialProfile p = c.gradient.profile(KernelRole::gradient, 1, c.normalize);
  const Discretization1D reg = build_weights(p, c.delta, c.N, Layout::regular);
  const Discretization1D stag = build_weights(p, c.delta, c.N, Layout::staggered);
  CsvTable audit({"layout", "cells", "first_moment", "min_abs", "argmin", "max_abs", "verdict"});
  for (const auto* d : {&reg, &stag}) {
    const NyquistReport r = nyquist_audit(*d);
    audit.add_row({std::string(to_string(d->layout)), CsvTable::cell((long long)d->weights.size()),
                   audit.cell(first_moment(*d)), audit.cell(r.min_abs), CsvTable::cell((long long)r.argmin),
                   audit.cell(r.max_abs), std::string(to_string(r.verdict))});
    out.summary[std::string(to_string(d->layout))] = std::string(to_string(r.verdict));
  }
  out.files.emplace_back("grid1d.csv", grid1d_csv(reg, stag));
  out.files.emplace_back("grid1d_audit.csv", std::move(audit));
  return out;
}

LatticeField random_lattice_field(const PeriodicGrid& grid, int components, std::uint64_t seed) {
  LatticeField f(grid, components);
  std::uint64_t state = splitmix64(seed);
  for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
    for (int c = 0; c < components; ++c) {
      state = splitmix64(state);
      f.values(c, j) = 2.0 * unit_double(state) - 1.0;
    }
  }
  return f;
}

Pending run_validate(const ExperimentConfig& c) {
  Pending out;
  const ScaledKernel w = diffusion_kernel(c, c.delta);
  const ScaledKernel wh = gradient_kernel(c, c.delta, c.dim);
  CsvTable table({"check", "op", "N", "value"});
  std::vector<NonlocalOp> ops;
  if (c.op == "L" || c.op == "all") ops.push_back(NonlocalOp::L);
  if (c.op == "G" || c.op == "all") ops.push_back(NonlocalOp::G);
  if (c.op == "D" || c.op == "all") ops.push_back(NonlocalOp::D);
  const char* names[] = {"L", "G", "D"};
  for (NonlocalOp op : ops) {
    const ScaledKernel& k = op == NonlocalOp::L ? w : wh;
    if (k.profile().is_fractional() && k.profile().beta() >= 0.0) {
      out.warnings.push_back(std::string(names[int(op)]) + ": fractional kernel with beta >= 0, lattice sums are h-sensitive");
    }
    std::vector<double> devs, ratios;
    for (std::size_t i = 0; i < c.Ns.size(); ++i) {
      const double dev = planewave_symbol_check(op, k, c.xi, c.Ns[i], c.quadrature, c.threads);
      devs.push_back(dev);
      if (i > 0) ratios.push_back(double(c.Ns[i]) / double(c.Ns[i - 1]));
      table.add_row({"planewave", names[int(op)], CsvTable::cell((long long)c.Ns[i]), table.cell(dev)});
    }
    const auto orders = observed_order(devs, ratios);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      table.add_row({"planewave_order", names[int(op)], CsvTable::cell((long long)c.Ns[i + 1]), table.cell(orders[i])});
    }
  }
  const PeriodicGrid grid(c.dim, c.Ns.front());
  double worst = 0.0;
  for (int i = 0; i < c.pairs; ++i) {
    const std::uint64_t s = c.seed + 2 * std::uint64_t(i);
    const auto u = random_lattice_field(grid, c.dim, s);
    const auto p = random_lattice_field(grid, 1, s + 1);
    const double r = adjointness_residual(u, p, wh, c.threads);
    worst = std::max(worst, r);
    table.add_row({"adjointness", "GD", CsvTable::cell((long long)grid.N()), table.cell(r)});
  }
  out.summary["max_adjointness_residual"] = worst;
  out.files.emplace_back("validate.csv", std::move(table));
  return out;
}

}  // namespace

RunResult run_command(const ExperimentConfig& config) {
  Pending pending;
  switch (config.command) {
    case Subcommand::kernels: pending = run_kernels(config); break;
    case Subcommand::symbols: pending = run_symbols(config); break;
    case Subcommand::scan: pending = run_scan(config); break;
    case Subcommand::solve: pending = run_solve(config); break;
    case Subcommand::converge: pending = run_converge(config); break;
    case Subcommand::grid1d: pending = run_grid1d(config); break;
    case Subcommand::validate: pending = run_validate(config); break;
  }

  RunResult result;
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create output directory " + config.out + ": " + ec.message());
  bool nonfinite = false;
  json files = json::array();
  for (const auto& [name, table] : pending.files) {
    const auto path = std::filesystem::path(config.out) / name;
    write_csv(path, table);
    result.artifacts.push_back(path);
    files.push_back(path.string());
    nonfinite = nonfinite || table.has_nan();
  }
  if (nonfinite) {
    result.exit_code = exit_nonfinite;
    pending.warnings.push_back("artifacts contain nan or inf values");
  }
  pending.summary["command"] = std::string(to_string(config.command));
  pending.summary["artifacts"] = files;
  pending.summary["status"] = nonfinite ? "nonfinite" : "ok";
  result.summary = pending.summary.dump();
  result.warnings = std::move(pending.warnings);
  return result;
}

std::string error_json(const std::exception& e) {
  json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = std::string(to_string(err->code()));
    if (const auto* ip = dynamic_cast<const IllPosedError*>(err)) j["mode"] = ip->mode();
    if (const auto* q = dynamic_cast<const QuadratureError*>(err)) {
      j["previous_estimate"] = q->previous_estimate();
      j["last_estimate"] = q->last_estimate();
    }
    if (const auto* ce = dynamic_cast<const ConfigError*>(err)) j["problems"] = ce->problems();
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  return j.dump();
}

}  // namespace nlstokes
