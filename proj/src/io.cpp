#include "momf/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace momf::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw CsvError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, std::size_t line) {
  const double v = parse_number(s, line);
  if (v != static_cast<int>(v)) throw CsvError("line " + std::to_string(line) + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round_trip(double v) { return std::strtod(format_double(v).c_str(), nullptr); }

void write_observations(std::ostream& out, int trial, const Dataset& data) {
  const std::size_t d = data.input_dim();
  const std::size_t k = data.empty() ? 0 : data.observations.front().y_raw.size();
  out << "trial,iter";
  for (std::size_t i = 1; i <= d; ++i) out << ",x" << i;
  out << ",s";
  for (std::size_t j = 1; j <= k; ++j) out << ",y" << j;
  out << ",cost,cum_cost\n";
  for (const auto& obs : data.observations) {
    out << trial << ',' << obs.iteration;
    for (double v : obs.x) out << ',' << format_double(v);
    out << ',' << format_double(obs.s);
    for (double v : obs.y_raw) out << ',' << format_double(v);
    out << ',' << format_double(obs.cost) << ',' << format_double(obs.cumulative_cost) << '\n';
  }
}

TrialLog read_observations(std::istream& in, const problems::Normalization* normalization) {
  std::string line;
  if (!read_line(in, line)) throw CsvError("missing header row");
  const auto header = split(line);
  if (header.size() < 6 || header[0] != "trial" || header[1] != "iter")
    throw CsvError("observations header must start with trial,iter");
  std::size_t d = 0;
  while (2 + d < header.size() && header[2 + d] == "x" + std::to_string(d + 1)) ++d;
  if (2 + d >= header.size() || header[2 + d] != "s") throw CsvError("observations header lacks the s column");
  std::size_t k = 0;
  while (3 + d + k < header.size() && header[3 + d + k] == "y" + std::to_string(k + 1)) ++k;
  if (header.size() != 5 + d + k || header[3 + d + k] != "cost" || header[4 + d + k] != "cum_cost")
    throw CsvError("observations header must end with cost,cum_cost");

  TrialLog log;
  std::size_t lineno = 1;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw CsvError("line " + std::to_string(lineno) + ": wrong number of columns");
    log.trial = parse_int(cells[0], lineno);
    Observation obs;
    obs.iteration = parse_int(cells[1], lineno);
    for (std::size_t i = 0; i < d; ++i) obs.x.push_back(parse_number(cells[2 + i], lineno));
    obs.s = parse_number(cells[2 + d], lineno);
    for (std::size_t j = 0; j < k; ++j) obs.y_raw.push_back(parse_number(cells[3 + d + j], lineno));
    obs.cost = parse_number(cells[3 + d + k], lineno);
    obs.cumulative_cost = parse_number(cells[4 + d + k], lineno);
    if (normalization) obs.y_normalized = normalization->apply(obs.y_raw);
    log.data.observations.push_back(std::move(obs));
  }
  return log;
}

void write_traces(std::ostream& out, const std::vector<bench::HvTrace>& traces) {
  out << "algorithm,trial,cum_cost,hv_fraction\n";
  for (const auto& t : traces)
    for (const auto& p : t.points)
      out << t.algorithm << ',' << t.trial << ',' << format_double(p.cost) << ',' << format_double(p.hv_fraction) << '\n';
}

std::map<std::string, std::vector<bench::HvTrace>> read_traces(std::istream& in) {
  std::string line;
  if (!read_line(in, line) || line != "algorithm,trial,cum_cost,hv_fraction")
    throw CsvError("trace header must be algorithm,trial,cum_cost,hv_fraction");
  std::map<std::string, std::map<int, bench::HvTrace>> grouped;
  std::size_t lineno = 1;
  while (read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) throw CsvError("line " + std::to_string(lineno) + ": wrong number of columns");
    const int trial = parse_int(cells[1], lineno);
    auto& t = grouped[cells[0]][trial];
    t.algorithm = cells[0];
    t.trial = trial;
    t.points.push_back({parse_number(cells[2], lineno), parse_number(cells[3], lineno)});
  }
  std::map<std::string, std::vector<bench::HvTrace>> out;
  for (auto& [alg, by_trial] : grouped)
    for (auto& [trial, t] : by_trial) out[alg].push_back(std::move(t));
  return out;
}

void write_fidelity_histogram(std::ostream& out, const std::map<std::string, bench::FidelityStats>& stats, int bins) {
  out << "algorithm,bin_lo,bin_hi,count\n";
  for (const auto& [alg, st] : stats) {
    for (int b = 0; b < bins; ++b) {
      out << alg << ',' << format_double(static_cast<double>(b) / bins) << ','
          << format_double(static_cast<double>(b + 1) / bins) << ',' << st.histogram[static_cast<std::size_t>(b)]
          << '\n';
    }
  }
}

void write_front(std::ostream& out, const std::vector<Vector>& front) {
  const std::size_t k = front.empty() ? 0 : front.front().size();
  for (std::size_t j = 1; j <= k; ++j) out << (j > 1 ? "," : "") << 'y' << j;
  out << '\n';
  for (const auto& p : front) {
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << format_double(p[j]);
    out << '\n';
  }
}

}  // namespace momf::io
