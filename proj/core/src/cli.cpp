#include "ssqp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssqp {
namespace {

using nlohmann::json;
using Kind = ConfigError::Kind;

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
  throw ConfigError(Kind::ValidationError, key, key + ": " + what);
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) invalid(key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  invalid(key, "expected a non-negative integer");
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) invalid(key, "expected true or false");
  return v.get<bool>();
}

std::optional<double> get_optional_number(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  return get_number(v, key);
}

void apply_solver(const json& sec, SolverParams& p) {
  for (const auto& [name, v] : sec.items()) {
    const std::string key = "solver." + name;
    if (name == "tau_init") p.tau_init = get_number(v, key);
    else if (name == "sigma") p.sigma = get_number(v, key);
    else if (name == "eps_tau") p.eps_tau = get_number(v, key);
    else if (name == "theta") p.theta = get_number(v, key);
    else if (name == "gamma") p.gamma = get_number(v, key);
    else if (name == "alpha_max") p.alpha_max = get_number(v, key);
    else if (name == "alpha0") p.alpha0 = get_number(v, key);
    else if (name == "eps_f_accept") p.eps_f_accept = get_optional_number(v, key);
    else if (name == "max_iters") p.max_iters = get_unsigned(v, key);
    else if (name == "tol_infeas") p.tol_infeas = get_number(v, key);
    else if (name == "tol_kkt") p.tol_kkt = get_number(v, key);
    else if (name == "diagnostics") p.diagnostics = get_bool(v, key);
    else if (name == "kappa_fo") p.kappa_fo = get_number(v, key);
    else if (name == "eps_g_classify") p.eps_g_classify = get_optional_number(v, key);
    else invalid(key, "unknown key");
  }
}

void apply_oracle(const json& sec, OracleConfig& o) {
  for (const auto& [name, v] : sec.items()) {
    const std::string key = "oracle." + name;
    if (name == "eps_f") o.eps_f_noise = get_number(v, key);
    else if (name == "eps_g") o.eps_g_noise = get_number(v, key);
    else if (name == "seed") o.seed = get_unsigned(v, key);
    else invalid(key, "unknown key");
  }
}

void apply_grid(const json& sec, ExperimentGrid& g) {
  for (const auto& [name, v] : sec.items()) {
    const std::string key = "grid." + name;
    if (name == "problems") {
      if (!v.is_array()) invalid(key, "expected an array of problem names");
      g.problems.clear();
      for (const auto& e : v) {
        if (!e.is_string()) invalid(key, "expected an array of problem names");
        g.problems.push_back(e.get<std::string>());
      }
    } else if (name == "noise_pairs") {
      if (!v.is_array()) invalid(key, "expected an array of [eps_f, eps_g] pairs");
      g.noise_pairs.clear();
      for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2) invalid(key, "expected an array of [eps_f, eps_g] pairs");
        g.noise_pairs.push_back({get_number(e[0], key), get_number(e[1], key)});
      }
    } else if (name == "replicates") {
      g.replicates = get_unsigned(v, key);
    } else if (name == "eps_pp") {
      g.eps_pp = get_number(v, key);
    } else if (name == "weight_zeroth") {
      g.weight_zeroth = get_number(v, key);
    } else if (name == "weight_first") {
      g.weight_first = get_number(v, key);
    } else {
      invalid(key, "unknown key");
    }
  }
}

// Validation messages start with the field name.
std::string leading_word(const std::string& s) { return s.substr(0, s.find(' ')); }

void apply_override(json& doc, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos) invalid(ov, "override must have the form section.key=value");
  const std::string key = ov.substr(0, eq);
  const std::string text = ov.substr(eq + 1);
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() ||
      key.find('.', dot + 1) != std::string::npos) {
    invalid(key, "override key must be section.key");
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  doc[key.substr(0, dot)][key.substr(dot + 1)] = std::move(value);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(Kind::ParseError, "", "cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json status_json(const RunRecord& run) {
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"problem", run.problem},
          {"status", std::string(to_string(run.status))},
          {"message", run.message},
          {"iterations", run.iterations.size()},
          {"final_infeas_inf", num(run.final_infeas_inf)},
          {"final_kkt_inf", num(run.final_kkt_inf)},
          {"zeroth_calls", run.counters.zeroth_calls},
          {"first_calls", run.counters.first_calls}};
}

std::optional<Problem> selected_problem(const CliConfig& cfg) {
  try {
    if (cfg.problem_file) return load_quadratic_problem(*cfg.problem_file);
    if (cfg.problem) return get_problem(*cfg.problem);
  } catch (const std::exception& e) {
    throw ConfigError(Kind::ValidationError, cfg.problem_file ? "problem-file" : "problem",
                      e.what());
  }
  return std::nullopt;
}

int cmd_list_problems(std::ostream& out) {
  out << "name\tn\tm\n";
  for (const auto& e : problem_suite()) {
    out << e.problem.name << '\t' << e.problem.n << '\t' << e.problem.m << '\n';
  }
  return kExitOk;
}

int cmd_check_grad(const CliConfig& cfg, const ParsedConfig& pc, std::ostream& out,
                   std::ostream& err) {
  constexpr double kThreshold = 1e-6;
  constexpr int kRandomPoints = 10;
  std::vector<Problem> problems;
  if (auto p = selected_problem(cfg)) {
    problems.push_back(std::move(*p));
  } else {
    for (const auto& e : problem_suite()) problems.push_back(e.problem);
  }

  bool all_pass = true;
  out << "problem\tmax_rel_err_grad\tmax_rel_err_jac\tpass\n";
  for (const auto& p : problems) {
    CounterRng rng(derive_stream(pc.oracle.seed, p.name, 0.0, 0.0, 0));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    GradientCheck worst = check_gradients(p, p.x0);
    for (int s = 0; s < kRandomPoints; ++s) {
      Vector u(p.n);
      for (double& ui : u) ui = normal(rng);
      const double len = norm_l2(u);
      const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(p.n));
      const Vector x = p.x0 + (len > 0.0 ? radius / len : 0.0) * u;
      const GradientCheck gc = check_gradients(p, x);
      worst.max_rel_err_grad = std::max(worst.max_rel_err_grad, gc.max_rel_err_grad);
      worst.max_rel_err_jac = std::max(worst.max_rel_err_jac, gc.max_rel_err_jac);
    }
    const bool pass = worst.max_rel_err_grad <= kThreshold && worst.max_rel_err_jac <= kThreshold;
    all_pass = all_pass && pass;
    out << p.name << '\t' << worst.max_rel_err_grad << '\t' << worst.max_rel_err_jac << '\t'
        << (pass ? "ok" : "FAIL") << '\n';
    if (!pass) err << "check-grad: " << p.name << " exceeds " << kThreshold << '\n';
  }
  return all_pass ? kExitOk : kExitFailure;
}

int cmd_run(const CliConfig& cfg, const ParsedConfig& pc, std::ostream& out, std::ostream& err) {
  auto problem = selected_problem(cfg);
  if (!problem) throw ConfigError(Kind::ValidationError, "problem", "run needs --problem or --problem-file");

  const NoisePair noise{pc.oracle.eps_f_noise, pc.oracle.eps_g_noise};
  const GridCell cell{problem->name, noise, 0,
                      derive_stream(pc.oracle.seed, problem->name, noise.eps_f, noise.eps_g, 0)};
  OracleConfig oracle = pc.oracle;
  oracle.stream_id = cell.stream_id;

  const RunRecord run = solve(*problem, pc.solver, oracle);

  std::filesystem::create_directories(cfg.output_dir);
  const auto csv_path = cfg.output_dir / run_file_name(cell);
  write_run_csv(csv_path, run);
  json summary = status_json(run);
  summary["eps_f"] = noise.eps_f;
  summary["eps_g"] = noise.eps_g;
  summary["seed"] = oracle.seed;
  summary["stream_id"] = oracle.stream_id;
  summary["final_x"] = run.final_x.values();
  summary["csv"] = csv_path.filename().string();
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  std::ofstream(json_path, std::ios::binary) << summary.dump(2) << '\n';

  if (!run.message.empty()) err << "run: " << run.message << '\n';
  out << summary.dump() << '\n';
  return exit_code_for(run.status);
}

int cmd_bench(const CliConfig& cfg, const ParsedConfig& pc, std::ostream& out, std::ostream& err) {
  ExperimentGrid grid = pc.grid;
  std::vector<Problem> extra;
  if (auto p = selected_problem(cfg)) {
    grid.problems = {p->name};
    extra.push_back(std::move(*p));
  }
  for (const auto& name : grid.problems) {
    const bool known = std::any_of(extra.begin(), extra.end(),
                                   [&](const Problem& p) { return p.name == name; });
    if (!known) {
      try {
        get_suite_entry(name);
      } catch (const UnknownProblem& e) {
        throw ConfigError(Kind::ValidationError, "grid.problems", e.what());
      }
    }
  }

  const GridResult result = run_grid(grid, cfg.jobs, extra);

  std::filesystem::create_directories(cfg.output_dir);
  std::size_t converged = 0, budget = 0, failed = 0;
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const RunRecord& run = result.runs[i];
    write_run_csv(cfg.output_dir / run_file_name(result.cells[i]), run);
    if (run.status == RunStatus::Converged) ++converged;
    else if (run.status == RunStatus::BudgetExhausted) ++budget;
    else {
      ++failed;
      err << "bench: " << run_file_name(result.cells[i]) << ": " << to_string(run.status)
          << (run.message.empty() ? "" : ": " + run.message) << '\n';
    }
  }
  write_summary_json(cfg.output_dir / "summary.json", grid, result);
  write_timings_json(cfg.output_dir / "timings.json", result);

  out << json{{"runs", result.runs.size()},
              {"converged", converged},
              {"budget_exhausted", budget},
              {"failed", failed},
              {"summary", "summary.json"}}
             .dump()
      << '\n';
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_profile(const CliConfig& cfg, std::ostream& out) {
  GridOutputs outputs;
  try {
    outputs = read_grid_outputs(cfg.output_dir);
  } catch (const std::exception& e) {
    throw ConfigError(Kind::ValidationError, "out", e.what());
  }
  if (outputs.runs.empty()) {
    throw ConfigError(Kind::ValidationError, "out", "no runs listed in summary.json");
  }
  const auto profiles =
      grid_profiles(outputs.runs, outputs.eps_pp, outputs.weight_zeroth, outputs.weight_first);
  const auto dir = cfg.output_dir / "profiles";
  std::filesystem::create_directories(dir);
  for (const auto& np : profiles) {
    const auto path = dir / (np.name + ".csv");
    write_profile_csv(path, np.profile);
    out << (std::filesystem::path("profiles") / (np.name + ".csv")).string() << '\n';
  }
  return kExitOk;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view s) {
  if (s == "run") return Subcommand::Run;
  if (s == "bench") return Subcommand::Bench;
  if (s == "profile") return Subcommand::Profile;
  if (s == "check-grad") return Subcommand::CheckGrad;
  if (s == "list-problems") return Subcommand::ListProblems;
  return std::nullopt;
}

ParsedConfig parse_config_text(std::string_view json_text,
                               const std::vector<std::string>& overrides) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(Kind::ParseError, "", "config is not valid JSON");
  if (!doc.is_object()) throw ConfigError(Kind::ParseError, "", "config must be a JSON object");
  for (const auto& ov : overrides) apply_override(doc, ov);

  ParsedConfig pc;
  for (const auto& [name, sec] : doc.items()) {
    if (name != "solver" && name != "oracle" && name != "grid") invalid(name, "unknown key");
    if (!sec.is_object()) invalid(name, "expected an object");
    if (name == "solver") apply_solver(sec, pc.solver);
    else if (name == "oracle") apply_oracle(sec, pc.oracle);
    else apply_grid(sec, pc.grid);
  }

  try {
    pc.solver.validate();
  } catch (const std::invalid_argument& e) {
    invalid("solver." + leading_word(e.what()), e.what());
  }
  try {
    pc.oracle.validate();
  } catch (const std::invalid_argument& e) {
    const std::string field = leading_word(e.what());
    invalid(field == "eps_f_noise" ? "oracle.eps_f" : "oracle.eps_g", e.what());
  }
  pc.grid.params = pc.solver;
  pc.grid.seed = pc.oracle.seed;
  try {
    pc.grid.validate();
  } catch (const std::invalid_argument& e) {
    invalid(leading_word(e.what()), e.what());
  }
  return pc;
}

ParsedConfig parse_config(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::string>& overrides) {
  return parse_config_text(path ? slurp(*path) : std::string("{}"), overrides);
}

int exit_code_for(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return kExitOk;
    case RunStatus::BudgetExhausted: return kExitBudget;
    default: return kExitFailure;
  }
}

int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == Subcommand::ListProblems) return cmd_list_problems(out);
    if (cfg.subcommand == Subcommand::Profile) return cmd_profile(cfg, out);
    if (cfg.jobs == 0) throw ConfigError(Kind::ValidationError, "jobs", "--jobs must be >= 1");

    std::vector<std::string> overrides = cfg.overrides;
    if (cfg.seed) overrides.push_back("oracle.seed=" + std::to_string(*cfg.seed));
    const ParsedConfig pc = parse_config(cfg.config_path, overrides);

    switch (cfg.subcommand) {
      case Subcommand::Run: return cmd_run(cfg, pc, out, err);
      case Subcommand::Bench: return cmd_bench(cfg, pc, out, err);
      case Subcommand::CheckGrad: return cmd_check_grad(cfg, pc, out, err);
      default: return kExitConfig;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ssqp
