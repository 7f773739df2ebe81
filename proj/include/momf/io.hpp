#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momf/bench.hpp"
#include "momf/problems.hpp"
#include "momf/types.hpp"

namespace momf::io {

/// Shortest decimal form with 9 significant digits.
std::string format_double(double v);
/// Value after a write/parse cycle through format_double.
double round_trip(double v);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header `trial,iter,x1..xd,s,y1..yk,cost,cum_cost`; y columns hold raw values.
void write_observations(std::ostream& out, int trial, const Dataset& data);

struct TrialLog {
  int trial = 0;
  Dataset data;
};

/// Parses an observations CSV. y_normalized is filled when a normalization is
/// supplied, otherwise left empty.
TrialLog read_observations(std::istream& in, const problems::Normalization* normalization = nullptr);

/// Header `algorithm,trial,cum_cost,hv_fraction`.
void write_traces(std::ostream& out, const std::vector<bench::HvTrace>& traces);
std::map<std::string, std::vector<bench::HvTrace>> read_traces(std::istream& in);

/// Header `algorithm,bin_lo,bin_hi,count`.
void write_fidelity_histogram(std::ostream& out, const std::map<std::string, bench::FidelityStats>& stats, int bins);

/// Oracle front objective columns `y1..yk`.
void write_front(std::ostream& out, const std::vector<Vector>& front);

}  // namespace momf::io
