#pragma once

#include <string>
#include <vector>

#include "chaoslab/channel.hpp"
#include "chaoslab/echo.hpp"
#include "chaoslab/spectra.hpp"

namespace chaoslab {

// Shortest round-trip decimal representation; CSV output is byte-stable
// across reruns because every number passes through here.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

// columns: t,value,estimator,std_error,seed
std::string echo_series_csv(const EchoSeries& series);
std::string purity_series_csv(const PuritySeries& series);

// columns: bin_center,empirical,poisson,goe
std::string histogram_csv(const RatioHistogram& poisson, const RatioHistogram& goe);

// columns: t,R00..R33,bloch_volume
std::string ptm_series_csv(const std::vector<double>& times,
                           const std::vector<PauliTransferMatrix>& ptms);

}  // namespace chaoslab
