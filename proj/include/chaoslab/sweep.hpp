#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/echo.hpp"
#include "chaoslab/models.hpp"
#include "chaoslab/spectra.hpp"

namespace chaoslab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kJobsEnvVar = "CHAOSLAB_JOBS";

enum class ModelKind { Ising, Heisenberg, XXZDefect };

ModelKind parse_model(const std::string& name);
std::string model_name(ModelKind kind);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepConfig {
  ModelKind model = ModelKind::Ising;
  std::vector<GridAxis> axes;
  std::map<std::string, double> fixed;
  int L_dynamics = 7;
  int L_spectrum = 12;
  std::string sector = "auto";  // auto | even | odd | full | mz:N
  int probe_site = 1;
  int n_purity_states = 50;  // N of the averaged-purity baseline
  double T = 100.0;
  double dt = 0.1;
  int n_realizations = 0;  // 0 resolves to 30 for the disordered model, else 1
  std::uint64_t base_seed = 1;
  EchoEstimator estimator = EchoEstimator::ExactPauli;
  int mc_samples = 2000;
  double trim_fraction = 0.05;
  bool do_spectrum = true;
  bool do_dynamics = true;
  std::string out_dir;  // empty: keep results in memory only
};

SweepConfig sweep_config_from_json(const std::string& json_text);
std::string sweep_config_to_json(const SweepConfig& cfg);
// Resolved realization count (0 -> model default).
int resolved_realizations(const SweepConfig& cfg);
void validate_config(const SweepConfig& cfg);

// Default desk-scale grids covering the discussed parameter regions.
SweepConfig default_sweep_config(ModelKind kind);

SectorBasis resolve_sector(const std::string& spec, ModelKind model, int L);

std::map<std::string, double> model_default_params(ModelKind kind);
bool is_model_param(ModelKind kind, const std::string& name);

// Model parameter assembly for one grid point: defaults, then fixed values,
// then axis coordinates.
std::map<std::string, double> grid_point_params(const SweepConfig& cfg,
                                                const std::vector<double>& coords);
std::vector<SpinTerm> model_terms(ModelKind kind, const std::map<std::string, double>& params,
                                  int L, std::uint64_t fields_seed,
                                  std::vector<double>* fields_out = nullptr);

struct SweepRecord {
  std::size_t grid_index = 0;
  std::vector<double> coords;
  int realization = 0;
  std::uint64_t seed = 0;
  std::optional<double> mean_r;
  std::optional<int> n_levels;
  std::optional<double> p_bar;
  std::optional<double> echo_time_avg;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (grid_index, realization)
  std::string records_csv;
  int n_tasks_run = 0;
  int n_tasks_skipped = 0;  // resumed from the manifest
};

// One record per grid point and realization. Per-task seeds derive from
// (base_seed, grid_index, realization). With an out_dir set, writes
// records.csv, run_metadata.json and a manifest.jsonl used to resume.
SweepResult run_sweep(const SweepConfig& cfg, int jobs = 0);

struct DisorderAggregate {
  double h = 0.0;
  int n_realizations = 0;
  std::optional<double> mean_r_mean, mean_r_std;
  double impurity_mean = 0.0, impurity_std = 0.0;          // 1 - P_bar
  double echo_deficit_mean = 0.0, echo_deficit_std = 0.0;  // 1 - <echo>
};

// Heisenberg-only scan over disorder strengths; aggregates the deviations
// from unity over realizations. Requires n_realizations >= 2.
std::vector<DisorderAggregate> run_disorder_scan(const SweepConfig& cfg, int jobs = 0,
                                                 SweepResult* raw = nullptr);

std::string disorder_aggregates_csv(const std::vector<DisorderAggregate>& aggs);

int cli_main(int argc, char** argv);

}  // namespace chaoslab
