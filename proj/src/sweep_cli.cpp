#include <omp.h>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/sweep.hpp"
#include "json.hpp"

namespace chaoslab {

namespace {

using nlohmann::json;

// Shared model flags for the single-shot subcommands.
struct ModelFlags {
  std::string model = "ising";
  int L = 7;
  std::map<std::string, double> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "ising | heisenberg | xxz")->required();
    cmd->add_option("-L,--length", L, "chain length")->required();
    for (const char* name : {"hx", "hz", "J", "Jxy", "Jz", "eps", "defect"})
      options[name] = cmd->add_option("--" + std::string(name), values[name]);
    // -h is taken by --help; the disorder strength gets a spelled-out flag
    options["h"] = cmd->add_option("--disorder", values["h"], "disorder strength h");
  }

  ModelKind kind() const { return parse_model(model); }

  std::map<std::string, double> params() const {
    const ModelKind k = kind();
    auto out = model_default_params(k);
    for (const auto& [name, opt] : options) {
      if (opt->count() == 0) continue;
      if (!is_model_param(k, name))
        throw CLI::ValidationError("--" + name + " is not a parameter of " + model);
      out[name] = values.at(name);
    }
    return out;
  }
};

void apply_jobs_flag(int jobs) {
  if (jobs > 0) {
    omp_set_num_threads(jobs);
  } else if (const char* env = std::getenv(kJobsEnvVar)) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

EigenDecomposition diagonalize_dynamics(const ModelFlags& mf, std::uint64_t seed) {
  const auto terms = model_terms(mf.kind(), mf.params(), mf.L, derive_seed(seed, mf.L));
  return eigh(build_dense(terms, mf.L), /*compute_vectors=*/true);
}

int cmd_spectrum(const ModelFlags& mf, const std::string& sector, double trim, int bins,
                 std::uint64_t seed, const std::string& out) {
  const ModelKind kind = mf.kind();
  const auto terms = model_terms(kind, mf.params(), mf.L, derive_seed(seed, mf.L));
  const SectorBasis basis = resolve_sector(sector, kind, mf.L);
  if ((basis.kind == SectorKind::ParityEven || basis.kind == SectorKind::ParityOdd) &&
      !terms_reflection_symmetric(terms, mf.L))
    throw symmetry_error("model is not reflection symmetric; pick a different sector");
  const CMat H = build_sector(terms, basis);
  const EigenDecomposition eig = eigh(H, /*compute_vectors=*/false);
  const SpectrumStatistics stats = spacing_ratios(eig.eigenvalues, trim);

  std::cout << "sector dim " << basis.dim() << ", levels used " << stats.n_levels_used
            << ", degenerate dropped " << stats.n_degenerate_dropped << "\n";
  std::cout << "mean_r " << format_double(stats.mean_r) << "\n";

  json meta;
  meta["version"] = kVersion;
  meta["model"] = model_name(kind);
  meta["L"] = mf.L;
  meta["params"] = mf.params();
  meta["sector"] = sector;
  meta["sector_dim"] = basis.dim();
  meta["trim_fraction"] = trim;
  meta["seed"] = seed;
  meta["mean_r"] = stats.mean_r;
  meta["n_levels_used"] = stats.n_levels_used;
  meta["n_degenerate_dropped"] = stats.n_degenerate_dropped;

  if (!out.empty()) {
    if (stats.ratios.size() >= 100) {
      const auto hp = histogram_vs_surmise(stats.ratios, Surmise::Poisson, bins);
      const auto hg = histogram_vs_surmise(stats.ratios, Surmise::GOE, bins);
      meta["l1_poisson"] = hp.l1_distance;
      meta["l1_goe"] = hg.l1_distance;
      write_text_file(out, histogram_csv(hp, hg));
      std::cout << "histogram written to " << out << "\n";
    } else {
      std::cout << "histogram skipped: only " << stats.ratios.size()
                << " ratios (< 100); increase L\n";
    }
    write_text_file(out + ".meta.json", meta.dump(2) + "\n");
  }
  return 0;
}

int cmd_echo(const ModelFlags& mf, double T, double dt, const std::string& estimator,
             int mc_samples, std::uint64_t seed, std::uint64_t env_seed, int probe,
             const std::string& out) {
  const EigenDecomposition eig = diagonalize_dynamics(mf, seed);
  const TimeGrid grid = TimeGrid::uniform(T, dt);
  const EchoEstimator est = parse_estimator(estimator);
  EchoSeries series;
  switch (est) {
    case EchoEstimator::ExactPauli:
      series = haar_choi_echo_exact_series(eig, grid, probe);
      break;
    case EchoEstimator::MonteCarlo:
      series = haar_choi_echo_mc_series(eig, grid, mc_samples, derive_seed(seed, 1001), probe);
      break;
    case EchoEstimator::DesignEnum:
      series = haar_choi_echo_design_series(eig, grid, probe);
      break;
    case EchoEstimator::SingleEnv:
      series =
          choi_echo_single_env_series(eig, grid, random_product_state(mf.L - 1, env_seed), probe);
      break;
  }
  const double avg = trapezoid_average(series.times, series.values);
  std::cout << "time_averaged_choi_echo " << format_double(avg) << "\n";
  if (!out.empty()) {
    write_text_file(out, echo_series_csv(series));
    std::cout << "series written to " << out << "\n";
  }
  return 0;
}

int cmd_purity(const ModelFlags& mf, int n_states, double T, double dt, std::uint64_t seed,
               int probe, const std::string& out) {
  const EigenDecomposition eig = diagonalize_dynamics(mf, seed);
  const PuritySeries series =
      averaged_subsystem_purity(eig, n_states, T, dt, derive_seed(seed, 1002), probe);
  std::cout << "p_bar " << format_double(series.p_bar) << "\n";
  if (!out.empty()) {
    write_text_file(out, purity_series_csv(series));
    std::cout << "series written to " << out << "\n";
  }
  return 0;
}

int cmd_ptm(const ModelFlags& mf, double T, double dt, std::uint64_t seed, std::uint64_t env_seed,
            int probe, const std::string& out) {
  const EigenDecomposition eig = diagonalize_dynamics(mf, seed);
  const TimeGrid grid = TimeGrid::uniform(T, dt);
  const ProductState env = random_product_state(mf.L - 1, env_seed);
  std::vector<PauliTransferMatrix> ptms(grid.times.size());
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    const CMat U = propagator(eig, grid.times[i]);
    ptms[i] = pauli_transfer_matrix(choi_from_unitary(U, env, probe));
  }
  if (!out.empty()) {
    write_text_file(out, ptm_series_csv(grid.times, ptms));
    std::cout << "series written to " << out << "\n";
  } else {
    std::cout << ptm_series_csv(grid.times, ptms);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"chaoslab: spin-chain quantum channels, Choi echoes and level statistics"};
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "level spacing ratio statistics in a sector");
  ModelFlags spec_mf;
  spec_mf.attach(spectrum);
  std::string spec_sector = "auto", spec_out;
  double spec_trim = 0.05;
  int spec_bins = 25, spec_jobs = 0;
  std::uint64_t spec_seed = 1;
  spectrum->add_option("--sector", spec_sector, "auto | even | odd | full | mz:N");
  spectrum->add_option("--trim", spec_trim, "trim fraction per spectral edge");
  spectrum->add_option("--bins", spec_bins, "histogram bins");
  spectrum->add_option("--seed", spec_seed, "disorder realization seed");
  spectrum->add_option("--jobs", spec_jobs, "worker threads");
  spectrum->add_option("--out", spec_out, "histogram CSV path");

  // echo
  auto* echo = app.add_subcommand("echo", "Haar-averaged Choi echo time series");
  ModelFlags echo_mf;
  echo_mf.attach(echo);
  double echo_T = 100.0, echo_dt = 0.1;
  std::string echo_est = "exact", echo_out;
  int echo_mc = 2000, echo_probe = 1, echo_jobs = 0;
  std::uint64_t echo_seed = 1, echo_env_seed = 1;
  echo->add_option("--T", echo_T, "time window");
  echo->add_option("--dt", echo_dt, "time step");
  echo->add_option("--estimator", echo_est, "exact | mc | design | single");
  echo->add_option("--mc-samples", echo_mc, "Monte Carlo environments");
  echo->add_option("--seed", echo_seed, "base seed");
  echo->add_option("--env-seed", echo_env_seed, "environment seed (single estimator)");
  echo->add_option("--probe", echo_probe, "probe site");
  echo->add_option("--jobs", echo_jobs, "worker threads");
  echo->add_option("--out", echo_out, "series CSV path");

  // purity
  auto* purity = app.add_subcommand("purity", "averaged subsystem purity baseline");
  ModelFlags pur_mf;
  pur_mf.attach(purity);
  double pur_T = 100.0, pur_dt = 0.1;
  int pur_N = 50, pur_probe = 1, pur_jobs = 0;
  std::uint64_t pur_seed = 1;
  std::string pur_out;
  purity->add_option("--N", pur_N, "number of random product states");
  purity->add_option("--T", pur_T, "time window");
  purity->add_option("--dt", pur_dt, "time step");
  purity->add_option("--seed", pur_seed, "base seed");
  purity->add_option("--probe", pur_probe, "probe site");
  purity->add_option("--jobs", pur_jobs, "worker threads");
  purity->add_option("--out", pur_out, "series CSV path");

  // ptm
  auto* ptm = app.add_subcommand("ptm", "Pauli transfer matrix of the induced channel");
  ModelFlags ptm_mf;
  ptm_mf.attach(ptm);
  double ptm_T = 10.0, ptm_dt = 0.1;
  int ptm_probe = 1, ptm_jobs = 0;
  std::uint64_t ptm_seed = 1, ptm_env_seed = 1;
  std::string ptm_out;
  ptm->add_option("--T", ptm_T, "time window");
  ptm->add_option("--dt", ptm_dt, "time step");
  ptm->add_option("--seed", ptm_seed, "base seed");
  ptm->add_option("--env-seed", ptm_env_seed, "environment realization seed");
  ptm->add_option("--probe", ptm_probe, "probe site");
  ptm->add_option("--jobs", ptm_jobs, "worker threads");
  ptm->add_option("--out", ptm_out, "series CSV path");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "config-driven parameter sweep");
  std::string sweep_config_path, sweep_out, sweep_default_model;
  int sweep_jobs = 0;
  sweep->add_option("--config", sweep_config_path, "sweep config JSON");
  sweep->add_option("--jobs", sweep_jobs, "worker threads");
  sweep->add_option("--out", sweep_out, "output directory (overrides config)");
  sweep->add_option("--print-default-config", sweep_default_model,
                    "print a default config for a model and exit");

  // scan-disorder
  auto* scan = app.add_subcommand("scan-disorder", "disorder-strength scan (heisenberg)");
  std::string scan_config_path, scan_out;
  int scan_jobs = 0;
  scan->add_option("--config", scan_config_path, "scan config JSON")->required();
  scan->add_option("--jobs", scan_jobs, "worker threads");
  scan->add_option("--out", scan_out, "output directory (overrides config)");

  try {
    app.parse(argc, argv);

    if (spectrum->parsed()) {
      apply_jobs_flag(spec_jobs);
      return cmd_spectrum(spec_mf, spec_sector, spec_trim, spec_bins, spec_seed, spec_out);
    }
    if (echo->parsed()) {
      apply_jobs_flag(echo_jobs);
      return cmd_echo(echo_mf, echo_T, echo_dt, echo_est, echo_mc, echo_seed, echo_env_seed,
                      echo_probe, echo_out);
    }
    if (purity->parsed()) {
      apply_jobs_flag(pur_jobs);
      return cmd_purity(pur_mf, pur_N, pur_T, pur_dt, pur_seed, pur_probe, pur_out);
    }
    if (ptm->parsed()) {
      apply_jobs_flag(ptm_jobs);
      return cmd_ptm(ptm_mf, ptm_T, ptm_dt, ptm_seed, ptm_env_seed, ptm_probe, ptm_out);
    }
    if (sweep->parsed()) {
      if (!sweep_default_model.empty()) {
        std::cout << sweep_config_to_json(default_sweep_config(parse_model(sweep_default_model)))
                  << "\n";
        return 0;
      }
      if (sweep_config_path.empty())
        throw CLI::ValidationError("sweep: --config is required (or --print-default-config)");
      SweepConfig cfg = sweep_config_from_json(read_text_file(sweep_config_path));
      if (!sweep_out.empty()) cfg.out_dir = sweep_out;
      const SweepResult result = run_sweep(cfg, sweep_jobs);
      std::cout << "records " << result.records.size() << " (tasks run " << result.n_tasks_run
                << ", resumed " << result.n_tasks_skipped << ")\n";
      if (!cfg.out_dir.empty()) std::cout << "outputs in " << cfg.out_dir << "\n";
      return 0;
    }
    if (scan->parsed()) {
      SweepConfig cfg = sweep_config_from_json(read_text_file(scan_config_path));
      if (!scan_out.empty()) cfg.out_dir = scan_out;
      const auto aggs = run_disorder_scan(cfg, scan_jobs);
      std::cout << disorder_aggregates_csv(aggs);
      if (!cfg.out_dir.empty()) std::cout << "outputs in " << cfg.out_dir << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace chaoslab
