// Copyright 2026 The lqrgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lqrgame/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lqrgame/errors.hpp"
#include "lqrgame/kernels.hpp"
#include "lqrgame/models.hpp"
#include "lqrgame/parallel.hpp"

namespace lqrgame {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double parse_number(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ValidationError("'" + text + "' is not a number");
  }
  return v;
}

}  // namespace

void SweepSpec::validate() const {
  auto check = [](const std::vector<double>& values, const char* name) {
    if (values.empty()) throw ValidationError(std::string(name) + " grid is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
        throw ValidationError(std::string(name) + " values must be finite and >= 0");
      }
      if (i > 0 && !(values[i] > values[i - 1])) {
        throw ValidationError(std::string(name) +
                              " values must be strictly ascending without duplicates");
      }
    }
  };
  check(gamma_a_values, "gamma_a");
  check(gamma_d_values, "gamma_d");
  if (fixed_axis && *fixed_axis != "gamma_a" && *fixed_axis != "gamma_d") {
    throw ValidationError("fixed axis must be gamma_a or gamma_d");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(4));
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ValidationError("linear grid must be lin:<lo>:<hi>:<count>");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (count < 1 || count != std::floor(count)) {
      throw ValidationError("grid count must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(n == 1 ? lo
                           : lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_number(part));
  if (out.empty()) throw ValidationError("empty grid");
  return out;
}

SweepRecord make_sweep_record(const EquilibriumSolution& sol, double gamma_a, double gamma_d,
                              double j_lqr, double support_threshold) {
  SweepRecord rec;
  rec.gamma_a = gamma_a;
  rec.gamma_d = gamma_d;
  rec.E_a = sol.f_star;
  rec.E_d = sol.g_star;
  rec.E_loss = sol.expected_loss;
  rec.E_cost_a = sol.expected_cost_attacker;
  rec.E_cost_d = sol.expected_cost_defender;
  rec.E_a_pct = rec.E_a / j_lqr * 100.0;
  rec.E_d_pct = rec.E_d / j_lqr * 100.0;
  rec.E_loss_pct = rec.E_loss / j_lqr * 100.0;
  rec.E_cost_a_pct = rec.E_cost_a / j_lqr * 100.0;
  rec.E_cost_d_pct = rec.E_cost_d / j_lqr * 100.0;
  rec.attacker_support = support_digest(dominant_support(sol.r_star, support_threshold));
  rec.defender_support = support_digest(dominant_support(sol.d_star, support_threshold));
  rec.epsilon = sol.epsilon;
  return rec;
}

std::vector<SweepRecord> run_sweep(const LossTable& table, const SweepSpec& spec,
                                   const SolverOptions& opts, unsigned threads) {
  spec.validate();
  const std::size_t cols = spec.gamma_d_values.size();
  const std::size_t count = spec.gamma_a_values.size() * cols;
  std::vector<SweepRecord> records(count);
  SolverOptions point_opts = opts;
  point_opts.threads = 1;
  parallel_for(count, threads, [&](std::size_t k) {
    const double ga = spec.gamma_a_values[k / cols];
    const double gd = spec.gamma_d_values[k % cols];
    try {
      const PayoffMatrices u = build_payoffs(table, ga, gd);
      records[k] = make_sweep_record(solve_msne(u, point_opts), ga, gd, table.j_lqr());
    } catch (const Error& e) {
      SweepRecord rec;
      rec.gamma_a = ga;
      rec.gamma_d = gd;
      rec.error = e.what();
      if (const auto* nc = dynamic_cast<const NonConvergenceError*>(&e)) {
        rec.epsilon = nc->best_epsilon();
      }
      records[k] = std::move(rec);
    }
  });
  return records;
}

std::string sweep_csv(const std::vector<SweepRecord>& records, const Json& config) {
  std::string out;
  out += "# ";
  out += kSweepCsvVersion;
  out += "\n# config: " + config.dump() + "\n";
  out +=
      "gamma_a,gamma_d,E_a,E_d,E_loss,E_cost_a,E_cost_d,E_a_pct,E_d_pct,E_loss_pct,"
      "E_cost_a_pct,E_cost_d_pct,attacker_support,defender_support,epsilon,error\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : records) {
    const double values[] = {r.gamma_a,  r.gamma_d,      r.E_a,          r.E_d,
                             r.E_loss,   r.E_cost_a,     r.E_cost_d,     r.E_a_pct,
                             r.E_d_pct,  r.E_loss_pct,   r.E_cost_a_pct, r.E_cost_d_pct};
    for (double v : values) out += fmt_double(v) + ",";
    out += r.attacker_support + "," + r.defender_support + "," + fmt_double(r.epsilon) + "," +
           (r.error.empty() ? std::string() : quote(r.error)) + "\n";
  }
  return out;
}

Json sweep_json(const std::vector<SweepRecord>& records, const Json& config) {
  Json rows = Json::array();
  for (const auto& r : records) {
    rows.push_back(Json{{"gamma_a", r.gamma_a},
                        {"gamma_d", r.gamma_d},
                        {"E_a", r.E_a},
                        {"E_d", r.E_d},
                        {"E_loss", r.E_loss},
                        {"E_cost_a", r.E_cost_a},
                        {"E_cost_d", r.E_cost_d},
                        {"E_a_pct", r.E_a_pct},
                        {"E_d_pct", r.E_d_pct},
                        {"E_loss_pct", r.E_loss_pct},
                        {"E_cost_a_pct", r.E_cost_a_pct},
                        {"E_cost_d_pct", r.E_cost_d_pct},
                        {"attacker_support", r.attacker_support},
                        {"defender_support", r.defender_support},
                        {"epsilon", r.epsilon},
                        {"error", r.error}});
  }
  return Json{{"format", kSweepCsvVersion}, {"config", config}, {"records", rows}};
}

namespace {

Json optimizer_json(const OptimizerOptions& o) {
  return Json{{"grad_tol", o.grad_tol},
              {"max_iters", o.max_iters},
              {"armijo_c", o.armijo_c},
              {"backtrack_factor", o.backtrack_factor},
              {"min_step", o.min_step}};
}

}  // namespace

std::string loss_table_key(const LinearSystem& sys, const LossTableOptions& options) {
  const Json key{{"system", system_to_json(sys)},
                 {"self_links_disabled", options.self_links_disabled},
                 {"unstable_policy", options.unstable_policy.to_string()},
                 {"optimizer", optimizer_json(options.optimizer)}};
  return hex64(fnv1a(key.dump()));
}

namespace {

// Everything a subcommand may need, resolved as flags > config file > defaults.
struct Settings {
  OptimizerOptions optimizer;
  SolverOptions solver;
  unsigned threads = 1;
  bool self_links_intact = false;
  std::string unstable_policy = "cap";
  double support_threshold = 0.03;
};

struct Flags {
  std::optional<std::string> config;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<double> eps_tol;
  std::optional<double> grad_tol;
  std::optional<int> max_iters;
  std::optional<std::string> unstable_policy;
  std::optional<std::string> isa;
  bool self_links_intact = false;
};

template <typename T>
void take(const Json& doc, const char* key, T& slot) {
  if (doc.contains(key)) slot = doc.at(key).get<T>();
}

Settings resolve(const Flags& flags) {
  Settings s;
  if (flags.config) {
    const Json doc = read_json_file(*flags.config);
    try {
      take(doc, "threads", s.threads);
      take(doc, "self_links_intact", s.self_links_intact);
      take(doc, "unstable_policy", s.unstable_policy);
      take(doc, "support_threshold", s.support_threshold);
      if (doc.contains("optimizer")) {
        const Json& o = doc.at("optimizer");
        take(o, "grad_tol", s.optimizer.grad_tol);
        take(o, "max_iters", s.optimizer.max_iters);
        take(o, "armijo_c", s.optimizer.armijo_c);
        take(o, "backtrack_factor", s.optimizer.backtrack_factor);
        take(o, "min_step", s.optimizer.min_step);
      }
      if (doc.contains("solver")) {
        const Json& o = doc.at("solver");
        take(o, "restarts", s.solver.restarts);
        take(o, "eps_tol", s.solver.eps_tol);
        take(o, "seed", s.solver.seed);
      }
    } catch (const Json::exception& e) {
      throw ValidationError("config file '" + *flags.config + "': " + e.what());
    }
  }
  if (flags.threads) s.threads = *flags.threads;
  if (flags.seed) s.solver.seed = *flags.seed;
  if (flags.restarts) s.solver.restarts = *flags.restarts;
  if (flags.eps_tol) s.solver.eps_tol = *flags.eps_tol;
  if (flags.grad_tol) s.optimizer.grad_tol = *flags.grad_tol;
  if (flags.max_iters) s.optimizer.max_iters = *flags.max_iters;
  if (flags.unstable_policy) s.unstable_policy = *flags.unstable_policy;
  if (flags.self_links_intact) s.self_links_intact = true;
  if (s.threads == 0) s.threads = default_thread_count();
  s.solver.threads = s.threads;
  s.optimizer.validate();
  s.solver.validate();
  UnstablePolicy::parse(s.unstable_policy);
  if (flags.isa) kernels::set_isa(kernels::parse_isa(*flags.isa));
  return s;
}

Json settings_json(const Settings& s) {
  return Json{{"optimizer", optimizer_json(s.optimizer)},
              {"solver", Json{{"restarts", s.solver.restarts},
                              {"eps_tol", s.solver.eps_tol},
                              {"seed", s.solver.seed}}},
              {"self_links_intact", s.self_links_intact},
              {"unstable_policy", s.unstable_policy},
              {"support_threshold", s.support_threshold},
              {"kernels", std::string(kernels::isa_name(kernels::active_isa()))}};
}

void add_common(CLI::App& cmd, Flags& flags) {
  cmd.add_option("--config", flags.config, "JSON config file (flags take precedence)");
  cmd.add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  cmd.add_option("--seed", flags.seed, "Seed for randomized restarts");
  cmd.add_option("--isa", flags.isa, "Force kernel variant: scalar, avx2, neon");
}

void add_solver(CLI::App& cmd, Flags& flags) {
  cmd.add_option("--restarts", flags.restarts, "Local NLP restarts per solve");
  cmd.add_option("--eps-tol", flags.eps_tol,
                 "Best-response gap tolerance relative to the payoff scale");
}

void print_table(std::ostream& out, const LossTable& table) {
  std::vector<const LossEntry*> rows;
  for (const auto& e : table.entries()) rows.push_back(&e);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LossEntry* a, const LossEntry* b) { return a->delta > b->delta; });
  out << "J_lqr = " << fmt_double(table.j_lqr()) << "\n";
  out << "pattern  disabled_nodes  delta  fractional_pct  status\n";
  for (const auto* e : rows) {
    std::string disabled;
    for (std::size_t k = 0; k < e->pattern.size(); ++k) {
      if (!e->pattern[k]) {
        if (!disabled.empty()) disabled += ',';
        disabled += std::to_string(k + 1);
      }
    }
    if (disabled.empty()) disabled = "-";
    out << e->pattern.to_string() << "  " << disabled << "  " << fmt_double(e->delta) << "  "
        << fmt_fixed(e->delta / table.j_lqr() * 100.0, 4) << "  " << to_string(e->status)
        << "\n";
  }
}

void print_summary(std::ostream& out, const EquilibriumSolution& sol, double j_lqr,
                   double threshold) {
  out << "E_a = " << fmt_double(sol.f_star) << "  E_d = " << fmt_double(sol.g_star)
      << "  E(loss) = " << fmt_fixed(sol.expected_loss / j_lqr * 100.0, 4) << "% of J_lqr"
      << "  epsilon = " << fmt_double(sol.epsilon) << "\n";
  out << "attacker (0 = attacked):";
  for (const auto& e : dominant_support(sol.r_star, threshold)) {
    out << "  " << e.pattern.to_string() << " " << fmt_fixed(e.probability, 4);
  }
  out << "\ndefender (1 = protected):";
  for (const auto& e : dominant_support(sol.d_star, threshold)) {
    out << "  " << e.pattern.to_string() << " " << fmt_fixed(e.probability, 4);
  }
  out << "\n";
}

void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
  if (path) {
    write_text_file(*path, text);
  } else {
    out << text;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attack/defense resource allocation for LQR-controlled networks"};
  app.require_subcommand(1);

  // synth
  Flags synth_flags;
  std::size_t synth_nodes = 3;
  std::string topology = "ring";
  std::optional<std::string> graph_file;
  double damping = 1.0;
  double coupling = 1.0;
  std::size_t disturbance_node = 1;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic oscillator network");
  synth->add_option("--nodes", synth_nodes, "Node count")->capture_default_str();
  synth->add_option("--topology", topology, "ring, line or complete")->capture_default_str();
  synth->add_option("--graph", graph_file, "Graph spec JSON (overrides topology options)");
  synth->add_option("--damping", damping)->capture_default_str();
  synth->add_option("--coupling", coupling, "Edge weight")->capture_default_str();
  synth->add_option("--disturbance-node", disturbance_node)->capture_default_str();
  synth->add_option("--seed", synth_flags.seed);
  synth->add_option("--out", synth_out, "System JSON output")->required();

  // build-table
  Flags table_flags;
  std::string system_file;
  std::optional<std::string> table_out;
  std::string table_format = "text";
  auto* build = app.add_subcommand("build-table", "Compute the per-pattern loss table");
  build->add_option("--system", system_file, "System JSON")->required();
  build->add_flag("--self-links-intact", table_flags.self_links_intact,
                  "Keep intra-node feedback under attack");
  build->add_option("--unstable-policy", table_flags.unstable_policy, "cap, cap:<value> or error");
  build->add_option("--grad-tol", table_flags.grad_tol);
  build->add_option("--max-iters", table_flags.max_iters);
  build->add_option("--out", table_out, "Loss table JSON (also the cache)");
  build->add_option("--format", table_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_common(*build, table_flags);

  // solve
  Flags solve_flags;
  std::string table_file;
  double gamma_a = 0.0;
  double gamma_d = 0.0;
  std::optional<std::string> solve_out;
  auto* solve = app.add_subcommand("solve", "Solve one game for given unit costs");
  solve->add_option("--table", table_file, "Loss table JSON")->required();
  solve->add_option("--gamma-a", gamma_a, "Cost per attacked node")->required();
  solve->add_option("--gamma-d", gamma_d, "Cost per protected node")->required();
  solve->add_option("--out", solve_out, "Equilibrium JSON output");
  add_solver(*solve, solve_flags);
  add_common(*solve, solve_flags);

  // sweep
  Flags sweep_flags;
  std::string sweep_table;
  std::optional<std::string> grid_a, grid_d;
  std::optional<double> single_a, single_d;
  std::optional<std::string> sweep_out;
  std::string sweep_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "Solve a grid of unit costs");
  sweep->add_option("--table", sweep_table, "Loss table JSON")->required();
  sweep->add_option("--gamma-a-grid", grid_a, "List, or lin:<lo>:<hi>:<count>");
  sweep->add_option("--gamma-d-grid", grid_d, "List, or lin:<lo>:<hi>:<count>");
  sweep->add_option("--gamma-a", single_a, "Fixed gamma_a");
  sweep->add_option("--gamma-d", single_d, "Fixed gamma_d");
  sweep->add_option("--out", sweep_out, "Output file (stdout when absent)");
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_solver(*sweep, sweep_flags);
  add_common(*sweep, sweep_flags);

  // oracle-check
  Flags oracle_flags;
  std::string oracle_table;
  double oracle_a = 0.0;
  double oracle_d = 0.0;
  auto* oracle = app.add_subcommand(
      "oracle-check", "Compare the NLP equilibrium with support enumeration");
  oracle->add_option("--table", oracle_table, "Loss table JSON")->required();
  oracle->add_option("--gamma-a", oracle_a)->required();
  oracle->add_option("--gamma-d", oracle_d)->required();
  add_solver(*oracle, oracle_flags);
  add_common(*oracle, oracle_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return to_int(ExitCode::kValidation);
  }

  try {
    if (synth->parsed()) {
      GraphSpec spec;
      if (graph_file) {
        spec = graph_spec_from_json(read_json_file(*graph_file));
      } else {
        if (topology == "ring") {
          spec = ring_graph(synth_nodes, coupling);
        } else if (topology == "line") {
          spec = line_graph(synth_nodes, coupling);
        } else if (topology == "complete") {
          spec = complete_graph(synth_nodes, coupling);
        } else {
          throw ValidationError("unknown topology '" + topology + "'");
        }
        spec.damping = damping;
        spec.disturbance_node = disturbance_node;
        if (synth_flags.seed) spec.seed = *synth_flags.seed;
      }
      const LinearSystem sys = build_synthetic_network(synth_nodes, spec);
      save_system(sys, synth_out);
      err << "wrote " << synth_out << " (" << sys.states() << " states, " << sys.inputs()
          << " inputs)\n";
      return 0;
    }

    if (build->parsed()) {
      const Settings s = resolve(table_flags);
      const LinearSystem sys = load_system(system_file);
      LossTableOptions options;
      options.self_links_disabled = !s.self_links_intact;
      options.unstable_policy = UnstablePolicy::parse(s.unstable_policy);
      options.optimizer = s.optimizer;
      options.threads = s.threads;
      const std::string key = loss_table_key(sys, options);

      std::optional<LossTable> table;
      if (table_out && std::filesystem::exists(*table_out)) {
        try {
          LossTable cached = load_loss_table(*table_out);
          if (cached.system_hash() == key) {
            err << "cache hit: " << *table_out << " (" << key << ")\n";
            table = std::move(cached);
          }
        } catch (const Error&) {
          // Unreadable cache; rebuild.
        }
      }
      if (!table) {
        err << "building loss table for " << (std::size_t{1} << sys.layout().nodes())
            << " patterns\n";
        table = build_loss_table(sys, options);
        table->set_system_hash(key);
        if (table_out) save_loss_table(*table, *table_out, settings_json(s));
      }
      if (table_format == "json") {
        Json doc = loss_table_to_json(*table);
        doc["config"] = settings_json(s);
        out << doc.dump(2) << "\n";
      } else {
        print_table(out, *table);
      }
      return 0;
    }

    if (solve->parsed()) {
      const Settings s = resolve(solve_flags);
      const LossTable table = load_loss_table(table_file);
      const PayoffMatrices u = build_payoffs(table, gamma_a, gamma_d);
      const EquilibriumSolution sol = solve_msne(u, s.solver);
      Json doc = equilibrium_to_json(sol, u, table.j_lqr(), s.support_threshold);
      doc["config"] = settings_json(s);
      emit(solve_out, out, doc.dump(2) + "\n");
      print_summary(solve_out ? out : err, sol, table.j_lqr(), s.support_threshold);
      return 0;
    }

    if (sweep->parsed()) {
      const Settings s = resolve(sweep_flags);
      const LossTable table = load_loss_table(sweep_table);
      SweepSpec spec;
      if (grid_a && single_a) throw ValidationError("give --gamma-a-grid or --gamma-a, not both");
      if (grid_d && single_d) throw ValidationError("give --gamma-d-grid or --gamma-d, not both");
      spec.gamma_a_values = grid_a ? parse_grid(*grid_a)
                                   : std::vector<double>{single_a.value_or(0.0)};
      spec.gamma_d_values = grid_d ? parse_grid(*grid_d)
                                   : std::vector<double>{single_d.value_or(0.0)};
      if (spec.gamma_a_values.size() == 1 && spec.gamma_d_values.size() > 1) {
        spec.fixed_axis = "gamma_a";
      } else if (spec.gamma_d_values.size() == 1 && spec.gamma_a_values.size() > 1) {
        spec.fixed_axis = "gamma_d";
      }
      const auto records = run_sweep(table, spec, s.solver, s.threads);
      Json config = settings_json(s);
      config["table_hash"] = table.system_hash();
      if (spec.fixed_axis) config["fixed_axis"] = *spec.fixed_axis;
      const std::string text = sweep_format == "csv" ? sweep_csv(records, config)
                                                     : sweep_json(records, config).dump(2) + "\n";
      emit(sweep_out, out, text);
      const auto failures = std::count_if(records.begin(), records.end(),
                                          [](const SweepRecord& r) { return !r.error.empty(); });
      if (failures > 0) err << failures << " of " << records.size() << " points failed\n";
      return 0;
    }

    if (oracle->parsed()) {
      const Settings s = resolve(oracle_flags);
      const LossTable table = load_loss_table(oracle_table);
      const PayoffMatrices u = build_payoffs(table, oracle_a, oracle_d);
      const EquilibriumSolution sol = solve_msne(u, s.solver);
      const auto equilibria = support_enumeration_oracle(u);
      const double tol = 1e-6 * u.scale();
      bool matched = false;
      for (const auto& e : equilibria) {
        if (std::abs(e.f_star - sol.f_star) <= tol && std::abs(e.g_star - sol.g_star) <= tol) {
          matched = true;
        }
      }
      out << "nlp: f* = " << fmt_double(sol.f_star) << " g* = " << fmt_double(sol.g_star)
          << " epsilon = " << fmt_double(sol.epsilon) << "\n";
      out << "oracle: " << equilibria.size() << " equilibria\n";
      for (const auto& e : equilibria) {
        out << "  f* = " << fmt_double(e.f_star) << " g* = " << fmt_double(e.g_star) << "\n";
      }
      out << (matched ? "match" : "MISMATCH") << "\n";
      return matched ? 0 : to_int(ExitCode::kInternal);
    }
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (best epsilon " << fmt_double(e.best_epsilon()) << ")\n";
    return to_int(e.exit_code());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return to_int(e.exit_code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return to_int(ExitCode::kValidation);
  }
  return 0;
}

}  // namespace lqrgame
