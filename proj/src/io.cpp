#include "chaoslab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chaoslab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string echo_series_csv(const EchoSeries& series) {
  std::string out = "t,value,estimator,std_error,seed\n";
  const std::string label = estimator_label(series.estimator, series.mc_samples);
  const bool has_err = series.std_errors.size() == series.values.size();
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += format_double(series.times[i]);
    out += ',';
    out += format_double(series.values[i]);
    out += ',';
    out += label;
    out += ',';
    if (has_err) out += format_double(series.std_errors[i]);
    out += ',';
    out += std::to_string(series.seed);
    out += '\n';
  }
  return out;
}

std::string purity_series_csv(const PuritySeries& series) {
  std::string out = "t,value,estimator,std_error,seed\n";
  const std::string label = "subsystem_purity(" + std::to_string(series.n_states) + ")";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += format_double(series.times[i]);
    out += ',';
    out += format_double(series.values[i]);
    out += ',';
    out += label;
    out += ",,";
    out += std::to_string(series.seed);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const RatioHistogram& poisson, const RatioHistogram& goe) {
  if (poisson.kind != Surmise::Poisson || goe.kind != Surmise::GOE ||
      poisson.n_bins != goe.n_bins)
    throw std::invalid_argument("histogram_csv: mismatched histograms");
  std::string out = "bin_center,empirical,poisson,goe\n";
  for (int b = 0; b < poisson.n_bins; ++b) {
    out += format_double(poisson.bin_centers[b]);
    out += ',';
    out += format_double(poisson.empirical[b]);
    out += ',';
    out += format_double(poisson.surmise[b]);
    out += ',';
    out += format_double(goe.surmise[b]);
    out += '\n';
  }
  return out;
}

std::string ptm_series_csv(const std::vector<double>& times,
                           const std::vector<PauliTransferMatrix>& ptms) {
  if (times.size() != ptms.size())
    throw std::invalid_argument("ptm_series_csv: series length mismatch");
  std::string out = "t";
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      out += ",R" + std::to_string(mu) + std::to_string(nu);
  out += ",bloch_volume\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_double(times[i]);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        out += ',';
        out += format_double(ptms[i].R(mu, nu));
      }
    out += ',';
    out += format_double(ptms[i].bloch_volume());
    out += '\n';
  }
  return out;
}

}  // namespace chaoslab
