#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ssqp/bench.hpp"

namespace ssqp {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// JSON has no infinities; non-finite metrics are stored as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_or_inf(const json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

const char* const kRunHeader =
    "k,alpha,tau_bar,delta_l,accepted,infeas_inf,kkt_inf,zeroth_calls,first_calls,true_iter";

}  // namespace

std::string run_file_name(const GridCell& cell) {
  return cell.problem + "__f" + fmt_short(cell.noise.eps_f) + "__g" + fmt_short(cell.noise.eps_g) +
         "__r" + std::to_string(cell.replicate) + ".csv";
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& run) {
  auto out = open_out(path);
  out << kRunHeader << '\n';
  for (const auto& it : run.iterations) {
    out << it.k << ',' << fmt_double(it.alpha) << ',' << fmt_double(it.tau_bar) << ','
        << fmt_double(it.delta_l) << ',' << (it.accepted ? 1 : 0) << ','
        << fmt_double(it.infeas_inf) << ',' << fmt_double(it.kkt_inf) << ',' << it.zeroth_calls
        << ',' << it.first_calls << ',';
    if (it.true_iter) out << (*it.true_iter ? 1 : 0);
    out << '\n';
  }
}

RunTrace read_run_csv(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != kRunHeader) {
    throw std::runtime_error("'" + path.string() + "' is not a run CSV");
  }
  RunTrace t;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 10) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                               " has " + std::to_string(cols.size()) + " columns");
    }
    t.infeas_inf.push_back(std::stod(cols[5]));
    t.kkt_inf.push_back(std::stod(cols[6]));
    t.zeroth_calls.push_back(std::stoull(cols[7]));
    t.first_calls.push_back(std::stoull(cols[8]));
    ++row;
  }
  if (!t.zeroth_calls.empty()) {
    t.final_zeroth_calls = t.zeroth_calls.back();
    t.final_first_calls = t.first_calls.back();
  }
  return t;
}

void write_summary_json(const std::filesystem::path& path, const ExperimentGrid& grid,
                        const GridResult& result) {
  json runs = json::array();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const GridCell& cell = result.cells[i];
    const RunRecord& run = result.runs[i];
    runs.push_back({
        {"problem", cell.problem},
        {"eps_f", cell.noise.eps_f},
        {"eps_g", cell.noise.eps_g},
        {"replicate", cell.replicate},
        {"stream_id", cell.stream_id},
        {"file", run_file_name(cell)},
        {"status", std::string(to_string(run.status))},
        {"message", run.message},
        {"iterations", run.iterations.size()},
        {"final_infeas_inf", num(run.final_infeas_inf)},
        {"final_kkt_inf", num(run.final_kkt_inf)},
        {"zeroth_calls", run.counters.zeroth_calls},
        {"first_calls", run.counters.first_calls},
    });
  }
  const json doc = {
      {"seed", grid.seed},
      {"replicates", grid.replicates},
      {"eps_pp", grid.eps_pp},
      {"weight_zeroth", grid.weight_zeroth},
      {"weight_first", grid.weight_first},
      {"runs", runs},
  };
  open_out(path) << doc.dump(2) << '\n';
}

void write_timings_json(const std::filesystem::path& path, const GridResult& result) {
  json runs = json::array();
  double total = 0.0;
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    runs.push_back({{"file", run_file_name(result.cells[i])},
                    {"wall_time_s", result.runs[i].wall_time}});
    total += result.runs[i].wall_time;
  }
  open_out(path) << json{{"total_wall_time_s", total}, {"runs", runs}}.dump(2) << '\n';
}

GridOutputs read_grid_outputs(const std::filesystem::path& dir) {
  const auto summary_path = dir / "summary.json";
  json doc;
  try {
    doc = json::parse(slurp(summary_path));
  } catch (const json::exception& e) {
    throw std::runtime_error(summary_path.string() + ": " + e.what());
  }
  GridOutputs out;
  try {
    out.eps_pp = doc.at("eps_pp").get<double>();
    out.weight_zeroth = doc.at("weight_zeroth").get<double>();
    out.weight_first = doc.at("weight_first").get<double>();
    for (const auto& r : doc.at("runs")) {
      LabelledTrace lt;
      lt.cell.problem = r.at("problem").get<std::string>();
      lt.cell.noise = {r.at("eps_f").get<double>(), r.at("eps_g").get<double>()};
      lt.cell.replicate = r.at("replicate").get<std::size_t>();
      lt.cell.stream_id = r.at("stream_id").get<std::uint64_t>();
      lt.trace = read_run_csv(dir / r.at("file").get<std::string>());
      lt.trace.final_infeas_inf = num_or_inf(r.at("final_infeas_inf"));
      lt.trace.final_kkt_inf = num_or_inf(r.at("final_kkt_inf"));
      lt.trace.final_zeroth_calls = r.at("zeroth_calls").get<std::uint64_t>();
      lt.trace.final_first_calls = r.at("first_calls").get<std::uint64_t>();
      out.runs.push_back(std::move(lt));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(summary_path.string() + ": " + e.what());
  }
  return out;
}

void write_profile_csv(const std::filesystem::path& path, const PerformanceProfile& profile) {
  auto out = open_out(path);
  out << "solver,tau,rho\n";
  for (std::size_t s = 0; s < profile.solvers.size(); ++s) {
    for (const auto& pt : profile.curves[s]) {
      out << profile.solvers[s] << ',' << fmt_double(pt.tau) << ',' << fmt_double(pt.rho) << '\n';
    }
  }
}

}  // namespace ssqp
