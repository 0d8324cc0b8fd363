#include "chaoslab/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chaoslab/io.hpp"
#include "json.hpp"

namespace chaoslab {

namespace {

using nlohmann::json;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::set<std::string>& allowed_params(ModelKind kind) {
  static const std::set<std::string> ising{"hx", "hz", "J"};
  static const std::set<std::string> heis{"h"};
  static const std::set<std::string> xxz{"Jxy", "Jz", "eps", "defect"};
  switch (kind) {
    case ModelKind::Ising:
      return ising;
    case ModelKind::Heisenberg:
      return heis;
    default:
      return xxz;
  }
}

}  // namespace

std::map<std::string, double> model_default_params(ModelKind kind) {
  switch (kind) {
    case ModelKind::Ising:
      return {{"hx", 1.0}, {"hz", 0.0}, {"J", 1.0}};
    case ModelKind::Heisenberg:
      return {{"h", 1.0}};
    default:
      return {{"Jxy", 1.0}, {"Jz", 1.0}, {"eps", 0.0}, {"defect", 0.0}};
  }
}

bool is_model_param(ModelKind kind, const std::string& name) {
  return allowed_params(kind).count(name) > 0;
}

namespace {

struct Grid {
  std::vector<std::string> axis_names;
  std::vector<std::size_t> shape;
  std::size_t size = 1;

  std::vector<double> coords(const SweepConfig& cfg, std::size_t index) const {
    std::vector<double> out(shape.size());
    for (std::size_t a = shape.size(); a-- > 0;) {
      out[a] = cfg.axes[a].values[index % shape[a]];
      index /= shape[a];
    }
    return out;
  }
};

Grid make_grid(const SweepConfig& cfg) {
  Grid g;
  for (const auto& axis : cfg.axes) {
    g.axis_names.push_back(axis.name);
    g.shape.push_back(axis.values.size());
    g.size *= axis.values.size();
  }
  return g;
}

struct Task {
  std::size_t grid_index = 0;
  int realization = 0;
  bool spectrum = false;

  std::string key() const {
    return "g" + std::to_string(grid_index) + "_r" + std::to_string(realization) +
           (spectrum ? "_spectrum" : "_dynamics");
  }
};

struct TaskOutcome {
  bool have = false;
  std::string error;
  double mean_r = 0.0;
  int n_levels = 0;
  double p_bar = 0.0;
  double echo = 0.0;
  double wall_seconds = 0.0;
};

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

ModelKind parse_model(const std::string& name) {
  if (name == "ising") return ModelKind::Ising;
  if (name == "heisenberg") return ModelKind::Heisenberg;
  if (name == "xxz" || name == "xxz_defect") return ModelKind::XXZDefect;
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected ising, heisenberg or xxz)");
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Ising:
      return "ising";
    case ModelKind::Heisenberg:
      return "heisenberg";
    default:
      return "xxz_defect";
  }
}

int resolved_realizations(const SweepConfig& cfg) {
  if (cfg.n_realizations > 0) return cfg.n_realizations;
  return cfg.model == ModelKind::Heisenberg ? 30 : 1;
}

void validate_config(const SweepConfig& cfg) {
  if (cfg.axes.empty()) throw std::invalid_argument("config: grid must have at least one axis");
  for (const auto& axis : cfg.axes) {
    if (axis.values.empty())
      throw std::invalid_argument("config: axis '" + axis.name + "' has no values");
    if (!allowed_params(cfg.model).count(axis.name))
      throw std::invalid_argument("config: axis '" + axis.name + "' is not a parameter of " +
                                  model_name(cfg.model));
  }
  for (const auto& kv : cfg.fixed) {
    if (!allowed_params(cfg.model).count(kv.first))
      throw std::invalid_argument("config: fixed parameter '" + kv.first +
                                  "' is not a parameter of " + model_name(cfg.model));
  }
  if (cfg.L_dynamics < 2 || cfg.L_dynamics > kMaxDenseSites)
    throw std::invalid_argument("config: L_dynamics outside [2, 14]");
  if (cfg.L_spectrum < 2 || cfg.L_spectrum > kMaxDenseSites)
    throw std::invalid_argument("config: L_spectrum outside [2, 14]");
  if (cfg.do_dynamics && cfg.estimator == EchoEstimator::ExactPauli &&
      cfg.L_dynamics > kExactEchoMaxSites)
    throw std::invalid_argument("config: L_dynamics exceeds the exact-sum limit; pick mc");
  if (cfg.do_dynamics && cfg.estimator == EchoEstimator::DesignEnum &&
      cfg.L_dynamics > kDesignEchoMaxSites)
    throw std::invalid_argument("config: L_dynamics exceeds the design enumeration limit");
  if (cfg.probe_site < 1 || cfg.probe_site > cfg.L_dynamics)
    throw std::invalid_argument("config: probe_site outside [1, L_dynamics]");
  if (cfg.T <= 0 || cfg.dt <= 0) throw std::invalid_argument("config: T and dt must be positive");
  if (cfg.trim_fraction < 0 || cfg.trim_fraction >= 0.5)
    throw std::invalid_argument("config: trim_fraction outside [0, 0.5)");
  if (cfg.n_purity_states < 1) throw std::invalid_argument("config: n_purity_states must be >= 1");
  if (cfg.estimator == EchoEstimator::MonteCarlo && cfg.mc_samples < 2)
    throw std::invalid_argument("config: mc_samples must be >= 2");
  if (!cfg.do_dynamics && !cfg.do_spectrum)
    throw std::invalid_argument("config: nothing to do, enable dynamics or spectrum");
  resolve_sector(cfg.sector, cfg.model, cfg.L_spectrum);  // validates the spec string
}

SectorBasis resolve_sector(const std::string& spec, ModelKind model, int L) {
  std::string s = spec;
  if (s.empty() || s == "auto")
    s = (model == ModelKind::Ising) ? "even" : ("mz:" + std::to_string(L / 2));
  if (s == "even") return sector_basis(L, SectorKind::ParityEven);
  if (s == "odd") return sector_basis(L, SectorKind::ParityOdd);
  if (s == "full") return sector_basis(L, SectorKind::Full);
  if (s.rfind("mz:", 0) == 0) {
    const int n_up = std::stoi(s.substr(3));
    return sector_basis(L, SectorKind::Magnetization, n_up);
  }
  throw std::invalid_argument("unknown sector spec '" + spec +
                              "' (expected auto, even, odd, full or mz:N)");
}

std::map<std::string, double> grid_point_params(const SweepConfig& cfg,
                                                const std::vector<double>& coords) {
  auto params = model_default_params(cfg.model);
  for (const auto& [name, value] : cfg.fixed) params[name] = value;
  if (coords.size() != cfg.axes.size())
    throw std::invalid_argument("grid_point_params: coordinate arity mismatch");
  for (std::size_t a = 0; a < coords.size(); ++a) params[cfg.axes[a].name] = coords[a];
  return params;
}

std::vector<SpinTerm> model_terms(ModelKind kind, const std::map<std::string, double>& params,
                                  int L, std::uint64_t fields_seed,
                                  std::vector<double>* fields_out) {
  switch (kind) {
    case ModelKind::Ising: {
      IsingParams p{L, params.at("hx"), params.at("hz"), params.at("J")};
      return mixed_field_ising_terms(p);
    }
    case ModelKind::Heisenberg: {
      const double h = params.at("h");
      if (h < 0) throw std::invalid_argument("heisenberg: disorder strength must be >= 0");
      auto fields = sample_disorder_fields(L, h, fields_seed);
      if (fields_out) *fields_out = fields;
      return heisenberg_terms(L, fields);
    }
    default: {
      XXZDefectParams p;
      p.L = L;
      p.Jxy = params.at("Jxy");
      p.Jz = params.at("Jz");
      p.eps = params.at("eps");
      const double d = params.at("defect");
      p.defect = d <= 0 ? default_defect_site(L) : static_cast<int>(std::lround(d));
      return xxz_defect_terms(p);
    }
  }
}

SweepConfig default_sweep_config(ModelKind kind) {
  SweepConfig cfg;
  cfg.model = kind;
  auto linspace = [](double lo, double step, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + i * step;
    return v;
  };
  switch (kind) {
    case ModelKind::Ising:
      cfg.axes = {{"hz", linspace(0.0, 0.25, 13)}, {"J", [] {
                     auto v = std::vector<double>{0.05};
                     for (double j = 0.25; j <= 1.851; j += 0.2) v.push_back(j);
                     v.push_back(2.0);
                     return v;
                   }()}};
      cfg.fixed = {{"hx", 1.0}};
      break;
    case ModelKind::Heisenberg:
      cfg.axes = {{"h", {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}}};
      break;
    case ModelKind::XXZDefect:
      cfg.axes = {{"Jxy", linspace(0.1, 0.1, 20)}, {"eps", linspace(0.0, 0.15, 11)}};
      cfg.fixed = {{"Jz", 1.0}};
      break;
  }
  return cfg;
}

SweepConfig sweep_config_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  SweepConfig cfg;
  cfg.model = parse_model(j.at("model").get<std::string>());
  for (const auto& axis : j.at("axes")) {
    GridAxis a;
    a.name = axis.at("name").get<std::string>();
    a.values = axis.at("values").get<std::vector<double>>();
    cfg.axes.push_back(std::move(a));
  }
  if (j.contains("fixed"))
    for (const auto& [k, v] : j.at("fixed").items()) cfg.fixed[k] = v.get<double>();
  cfg.L_dynamics = j.value("L_dynamics", cfg.L_dynamics);
  cfg.L_spectrum = j.value("L_spectrum", cfg.L_spectrum);
  cfg.sector = j.value("sector", cfg.sector);
  cfg.probe_site = j.value("probe_site", cfg.probe_site);
  cfg.n_purity_states = j.value("n_purity_states", cfg.n_purity_states);
  cfg.T = j.value("T", cfg.T);
  cfg.dt = j.value("dt", cfg.dt);
  cfg.n_realizations = j.value("n_realizations", cfg.n_realizations);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  if (j.contains("estimator")) cfg.estimator = parse_estimator(j.at("estimator"));
  cfg.mc_samples = j.value("mc_samples", cfg.mc_samples);
  cfg.trim_fraction = j.value("trim_fraction", cfg.trim_fraction);
  cfg.do_spectrum = j.value("do_spectrum", cfg.do_spectrum);
  cfg.do_dynamics = j.value("do_dynamics", cfg.do_dynamics);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  validate_config(cfg);
  return cfg;
}

std::string sweep_config_to_json(const SweepConfig& cfg) {
  json j;
  j["model"] = model_name(cfg.model);
  j["axes"] = json::array();
  for (const auto& axis : cfg.axes) j["axes"].push_back({{"name", axis.name}, {"values", axis.values}});
  j["fixed"] = cfg.fixed;
  j["L_dynamics"] = cfg.L_dynamics;
  j["L_spectrum"] = cfg.L_spectrum;
  j["sector"] = cfg.sector;
  j["probe_site"] = cfg.probe_site;
  j["n_purity_states"] = cfg.n_purity_states;
  j["T"] = cfg.T;
  j["dt"] = cfg.dt;
  j["n_realizations"] = cfg.n_realizations;
  j["base_seed"] = cfg.base_seed;
  j["estimator"] = estimator_label(cfg.estimator, cfg.mc_samples);
  j["mc_samples"] = cfg.mc_samples;
  j["trim_fraction"] = cfg.trim_fraction;
  j["do_spectrum"] = cfg.do_spectrum;
  j["do_dynamics"] = cfg.do_dynamics;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

namespace {

TaskOutcome run_spectrum_task(const SweepConfig& cfg, const std::vector<double>& coords,
                              std::uint64_t task_seed) {
  TaskOutcome out;
  const double t0 = now_seconds();
  const auto params = grid_point_params(cfg, coords);
  const std::uint64_t fields_seed = derive_seed(task_seed, cfg.L_spectrum);
  const auto terms = model_terms(cfg.model, params, cfg.L_spectrum, fields_seed);
  const SectorBasis basis = resolve_sector(cfg.sector, cfg.model, cfg.L_spectrum);
  if ((basis.kind == SectorKind::ParityEven || basis.kind == SectorKind::ParityOdd) &&
      !terms_reflection_symmetric(terms, cfg.L_spectrum))
    throw symmetry_error("spectrum task: model is not reflection symmetric at this grid point");
  const CMat H = build_sector(terms, basis);
  const EigenDecomposition eig = eigh(H, /*compute_vectors=*/false);
  const SpectrumStatistics stats = spacing_ratios(eig.eigenvalues, cfg.trim_fraction);
  out.mean_r = stats.mean_r;
  out.n_levels = stats.n_levels_used;
  out.wall_seconds = now_seconds() - t0;
  out.have = true;
  return out;
}

TaskOutcome run_dynamics_task(const SweepConfig& cfg, const std::vector<double>& coords,
                              std::uint64_t task_seed) {
  TaskOutcome out;
  const double t0 = now_seconds();
  const auto params = grid_point_params(cfg, coords);
  const std::uint64_t fields_seed = derive_seed(task_seed, cfg.L_dynamics);
  const auto terms = model_terms(cfg.model, params, cfg.L_dynamics, fields_seed);
  const CMat H = build_dense(terms, cfg.L_dynamics);
  const EigenDecomposition eig = eigh(H, /*compute_vectors=*/true);
  out.echo = time_averaged_choi_echo(eig, cfg.T, cfg.dt, cfg.estimator, cfg.mc_samples,
                                     derive_seed(task_seed, 1001), cfg.probe_site);
  out.p_bar = averaged_subsystem_purity(eig, cfg.n_purity_states, cfg.T, cfg.dt,
                                        derive_seed(task_seed, 1002), cfg.probe_site)
                  .p_bar;
  out.wall_seconds = now_seconds() - t0;
  out.have = true;
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, int jobs) {
  validate_config(cfg);
  const Grid grid = make_grid(cfg);
  const int n_real = resolved_realizations(cfg);
  const std::string config_json = sweep_config_to_json(cfg);
  const std::string config_hash = fnv1a_hex(config_json);
  if (jobs <= 0) {
    if (const char* env = std::getenv(kJobsEnvVar)) jobs = std::max(1, std::atoi(env));
    else jobs = omp_get_max_threads();
  }

  std::vector<Task> tasks;
  for (std::size_t g = 0; g < grid.size; ++g)
    for (int r = 0; r < n_real; ++r) {
      if (cfg.do_dynamics) tasks.push_back({g, r, false});
      if (cfg.do_spectrum) tasks.push_back({g, r, true});
    }

  // resume: collect completed task outcomes from the manifest
  std::map<std::string, TaskOutcome> resumed;
  const bool persist = !cfg.out_dir.empty();
  std::filesystem::path manifest_path;
  if (persist) {
    std::filesystem::create_directories(cfg.out_dir);
    manifest_path = std::filesystem::path(cfg.out_dir) / "manifest.jsonl";
    if (std::filesystem::exists(manifest_path)) {
      std::ifstream in(manifest_path);
      std::string line;
      bool first = true;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        if (first) {
          first = false;
          if (j.value("config_hash", "") != config_hash)
            throw std::invalid_argument(
                "manifest in '" + cfg.out_dir +
                "' belongs to a different config; remove it or change out_dir");
          continue;
        }
        TaskOutcome o;
        o.have = true;
        o.error = j.value("error", "");
        o.mean_r = j.value("mean_r", 0.0);
        o.n_levels = j.value("n_levels", 0);
        o.p_bar = j.value("p_bar", 0.0);
        o.echo = j.value("echo", 0.0);
        o.wall_seconds = j.value("wall_s", 0.0);
        resumed[j.at("key").get<std::string>()] = o;
      }
    } else {
      std::ofstream out(manifest_path);
      out << json{{"config_hash", config_hash}}.dump() << "\n";
    }
  }

  std::vector<TaskOutcome> outcomes(tasks.size());
  std::vector<int> pending;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto it = resumed.find(tasks[i].key());
    if (it != resumed.end())
      outcomes[i] = it->second;
    else
      pending.push_back(static_cast<int>(i));
  }

  std::ofstream manifest_out;
  if (persist) manifest_out.open(manifest_path, std::ios::app);

  const double wall_start = now_seconds();
  const int n_pending = static_cast<int>(pending.size());
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
  for (int p = 0; p < n_pending; ++p) {
    const Task& task = tasks[pending[p]];
    const std::vector<double> coords = grid.coords(cfg, task.grid_index);
    const std::uint64_t task_seed = derive_seed(cfg.base_seed, task.grid_index,
                                                static_cast<std::uint64_t>(task.realization));
    TaskOutcome outcome;
    try {
      outcome = task.spectrum ? run_spectrum_task(cfg, coords, task_seed)
                              : run_dynamics_task(cfg, coords, task_seed);
    } catch (const std::exception& e) {
      outcome.have = true;
      outcome.error = e.what();
    }
    outcomes[pending[p]] = outcome;
    if (persist) {
      json j{{"key", task.key()}, {"wall_s", outcome.wall_seconds}};
      if (!outcome.error.empty()) {
        j["error"] = outcome.error;
      } else if (task.spectrum) {
        j["mean_r"] = outcome.mean_r;
        j["n_levels"] = outcome.n_levels;
      } else {
        j["p_bar"] = outcome.p_bar;
        j["echo"] = outcome.echo;
      }
#pragma omp critical(chaoslab_manifest)
      {
        manifest_out << j.dump() << "\n";
        manifest_out.flush();
      }
    }
  }

  // merge the per-metric outcomes into ordered records
  SweepResult result;
  result.n_tasks_run = n_pending;
  result.n_tasks_skipped = static_cast<int>(tasks.size()) - n_pending;
  std::map<std::pair<std::size_t, int>, SweepRecord> merged;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& task = tasks[i];
    auto& rec = merged[{task.grid_index, task.realization}];
    rec.grid_index = task.grid_index;
    rec.realization = task.realization;
    rec.coords = grid.coords(cfg, task.grid_index);
    rec.seed = derive_seed(cfg.base_seed, task.grid_index,
                           static_cast<std::uint64_t>(task.realization));
    const TaskOutcome& o = outcomes[i];
    if (!o.error.empty()) {
      if (!rec.error.empty()) rec.error += "; ";
      rec.error += o.error;
    } else if (task.spectrum) {
      rec.mean_r = o.mean_r;
      rec.n_levels = o.n_levels;
    } else {
      rec.p_bar = o.p_bar;
      rec.echo_time_avg = o.echo;
    }
  }
  for (auto& [key, rec] : merged) result.records.push_back(std::move(rec));

  // records CSV, fixed column order, '.' decimals, '\n' newlines
  std::string csv = "model";
  for (const auto& name : grid.axis_names) csv += "," + name;
  csv += ",realization,seed,mean_r,n_levels_used,p_bar,choi_echo_timeavg,trim_fraction,dt,"
         "estimator,error\n";
  for (const auto& rec : result.records) {
    csv += model_name(cfg.model);
    for (double c : rec.coords) csv += "," + format_double(c);
    csv += "," + std::to_string(rec.realization);
    csv += "," + std::to_string(rec.seed);
    csv += "," + optional_field(rec.mean_r);
    csv += ",";
    if (rec.n_levels) csv += std::to_string(*rec.n_levels);
    csv += "," + optional_field(rec.p_bar);
    csv += "," + optional_field(rec.echo_time_avg);
    csv += "," + format_double(cfg.trim_fraction);
    csv += "," + format_double(cfg.dt);
    csv += "," + estimator_label(cfg.estimator, cfg.mc_samples);
    csv += ",";
    // error strings may carry commas; strip them for the flat CSV
    std::string err = rec.error;
    std::replace(err.begin(), err.end(), ',', ';');
    csv += err;
    csv += "\n";
  }
  result.records_csv = csv;

  if (persist) {
    write_text_file((std::filesystem::path(cfg.out_dir) / "records.csv").string(), csv);
    json meta;
    meta["version"] = kVersion;
    meta["config"] = json::parse(config_json);
    meta["config_hash"] = config_hash;
    meta["jobs"] = jobs;
    meta["n_tasks_run"] = result.n_tasks_run;
    meta["n_tasks_skipped"] = result.n_tasks_skipped;
    meta["wall_seconds"] = now_seconds() - wall_start;
    write_text_file((std::filesystem::path(cfg.out_dir) / "run_metadata.json").string(),
                    meta.dump(2) + "\n");
  }
  return result;
}

std::vector<DisorderAggregate> run_disorder_scan(const SweepConfig& cfg, int jobs,
                                                 SweepResult* raw) {
  if (cfg.model != ModelKind::Heisenberg)
    throw std::invalid_argument("disorder scan: model must be heisenberg");
  if (cfg.axes.size() != 1 || cfg.axes[0].name != "h")
    throw std::invalid_argument("disorder scan: expected a single 'h' axis");
  if (resolved_realizations(cfg) < 2)
    throw std::invalid_argument("disorder scan: need n_realizations >= 2");

  SweepResult result = run_sweep(cfg, jobs);

  std::vector<DisorderAggregate> aggs;
  const auto& h_values = cfg.axes[0].values;
  for (std::size_t g = 0; g < h_values.size(); ++g) {
    DisorderAggregate agg;
    agg.h = h_values[g];
    std::vector<double> rs, imps, defs;
    for (const auto& rec : result.records) {
      if (rec.grid_index != g || !rec.error.empty()) continue;
      if (rec.mean_r) rs.push_back(*rec.mean_r);
      if (rec.p_bar) imps.push_back(1.0 - *rec.p_bar);
      if (rec.echo_time_avg) defs.push_back(1.0 - *rec.echo_time_avg);
    }
    auto mean_std = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= v.size();
      double var = 0.0;
      for (double x : v) var += (x - m) * (x - m);
      return std::pair(m, v.size() > 1 ? std::sqrt(var / (v.size() - 1.0)) : 0.0);
    };
    agg.n_realizations = static_cast<int>(std::max(imps.size(), rs.size()));
    if (!rs.empty()) {
      auto [m, s] = mean_std(rs);
      agg.mean_r_mean = m;
      agg.mean_r_std = s;
    }
    if (!imps.empty()) {
      auto [m, s] = mean_std(imps);
      agg.impurity_mean = m;
      agg.impurity_std = s;
    }
    if (!defs.empty()) {
      auto [m, s] = mean_std(defs);
      agg.echo_deficit_mean = m;
      agg.echo_deficit_std = s;
    }
    aggs.push_back(agg);
  }

  if (!cfg.out_dir.empty())
    write_text_file((std::filesystem::path(cfg.out_dir) / "disorder_aggregates.csv").string(),
                    disorder_aggregates_csv(aggs));
  if (raw) *raw = std::move(result);
  return aggs;
}

std::string disorder_aggregates_csv(const std::vector<DisorderAggregate>& aggs) {
  std::string csv =
      "h,mean_r_mean,mean_r_std,one_minus_pbar_mean,one_minus_pbar_std,"
      "one_minus_echo_mean,one_minus_echo_std,n_realizations\n";
  for (const auto& a : aggs) {
    csv += format_double(a.h);
    csv += "," + (a.mean_r_mean ? format_double(*a.mean_r_mean) : std::string());
    csv += "," + (a.mean_r_std ? format_double(*a.mean_r_std) : std::string());
    csv += "," + format_double(a.impurity_mean);
    csv += "," + format_double(a.impurity_std);
    csv += "," + format_double(a.echo_deficit_mean);
    csv += "," + format_double(a.echo_deficit_std);
    csv += "," + std::to_string(a.n_realizations);
    csv += "\n";
  }
  return csv;
}

}  // namespace chaoslab
