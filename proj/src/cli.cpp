#include "berrylab/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "berrylab/berry.hpp"
#include "berrylab/dynamics.hpp"
#include "berrylab/holonomy.hpp"
#include "berrylab/mixed_phase.hpp"

namespace berrylab {

namespace {

constexpr double kNumericStep = 1e-4;  // connection central-difference step

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::vector<double> parse_list(const std::string& text,
                               const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("invalid value '" + item + "' for " + flag);
    }
  }
  if (out.empty()) throw UsageError("empty list for " + flag);
  return out;
}

int parse_level(const std::string& text) {
  if (text == "top") return 3;
  if (text == "bottom") return 0;
  if (text.size() == 1 && text[0] >= '0' && text[0] <= '3')
    return text[0] - '0';
  throw UsageError("invalid value '" + text +
                   "' for --level (expected 0..3, top, bottom)");
}

ModelParams make_params(const RunConfig& cfg, double theta, double g,
                        double omega) {
  ModelParams p;
  p.theta = theta;
  p.g = g;
  p.b_field = cfg.b;
  p.omega = omega;
  p.coupling = cfg.coupling;
  return p;
}

void parallel_rows(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += jobs) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// --- per-command table builders -------------------------------------------

Table table_connection(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta",    "a11_re", "a11_im", "a12_re", "a12_im",
               "a21_re",   "a21_im", "a22_re", "a22_im", "max_dev_analytic"};
  t.rows.resize(cfg.theta.size());
  parallel_rows(static_cast<int>(cfg.theta.size()), cfg.jobs, [&](int i) {
    double theta = cfg.theta[i];
    BasisFunction basis = cfg.basis == BasisLabel::reply_basis
                              ? reply_basis_function(theta)
                              : primed_basis_function(theta);
    ComplexMatrix a = connection_numeric(basis, 0.0, kNumericStep);
    ComplexMatrix ref(2);
    if (cfg.basis == BasisLabel::reply_basis) {
      ref = connection_analytic(theta).sample(0.0);
    } else {
      double c = std::cos(theta / 2);
      ref(0, 0) = c * c;
      ref(1, 1) = c * c;
    }
    t.rows[i] = {theta,
                 a(0, 0).real(), a(0, 0).imag(), a(0, 1).real(), a(0, 1).imag(),
                 a(1, 0).real(), a(1, 0).imag(), a(1, 1).real(), a(1, 1).imag(),
                 max_abs_diff(a, ref)};
  });
  return t;
}

Table table_holonomy(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta",    "eigenphase_1", "eigenphase_2",     "trace_re",
               "trace_im", "single_spin_phase", "max_dev"};
  t.rows.resize(cfg.theta.size());
  long long steps = cfg.steps > 0 ? cfg.steps : 4096;
  parallel_rows(static_cast<int>(cfg.theta.size()), cfg.jobs, [&](int i) {
    double theta = cfg.theta[i];
    Holonomy h = wilson_loop(connection_analytic(theta),
                             static_cast<int>(steps));
    double spin = berry_phase(first_factor_path(theta, cfg.points)).gamma;
    double dev = 0.0;
    for (double ph : h.eigenphases)
      dev = std::max(dev, mod_distance(ph, spin));
    t.rows[i] = {theta,          h.eigenphases[0], h.eigenphases[1],
                 h.trace.real(), h.trace.imag(),   spin,
                 dev};
  });
  return t;
}

Table table_berry(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta", "g",        "level",
               "gamma", "raw_unwrapped", "n_points",
               "discretization_estimate"};
  int n_theta = static_cast<int>(cfg.theta.size());
  int n_g = static_cast<int>(cfg.g.size());
  t.rows.resize(static_cast<size_t>(n_theta) * n_g);
  parallel_rows(n_theta * n_g, cfg.jobs, [&](int i) {
    double theta = cfg.theta[i / n_g];
    double g = cfg.g[i % n_g];
    ModelParams p = make_params(cfg, theta, g, cfg.omega.front());
    BerryResult r =
        berry_phase(smooth_eigenpath(p, cfg.level, cfg.points));
    t.rows[i] = {theta,
                 g,
                 static_cast<double>(cfg.level),
                 r.gamma,
                 r.raw_unwrapped,
                 static_cast<double>(r.n_points),
                 r.discretization_estimate};
  });
  return t;
}

Table table_evolve(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta",     "g",
               "omega",     "ratio",
               "total",     "dynamical",
               "geometric", "final_fidelity",
               "min_fidelity", "loop_duration"};
  int n_theta = static_cast<int>(cfg.theta.size());
  int n_g = static_cast<int>(cfg.g.size());
  int n_w = static_cast<int>(cfg.omega.size());
  t.rows.resize(static_cast<size_t>(n_theta) * n_g * n_w);
  parallel_rows(n_theta * n_g * n_w, cfg.jobs, [&](int i) {
    double theta = cfg.theta[i / (n_g * n_w)];
    double g = cfg.g[(i / n_w) % n_g];
    double omega = cfg.omega[i % n_w];
    ModelParams p = make_params(cfg, theta, g, omega);
    long long steps = cfg.steps > 0 ? cfg.steps : default_steps_per_loop(p);
    HermEig eig = herm_eig(hamiltonian(p, 0.0));
    Trajectory traj =
        evolve_loop(p, eig.eigenvectors[cfg.level], cfg.loops, steps);
    PhaseReport rep = phase_report(traj);
    t.rows[i] = {theta,
                 g,
                 omega,
                 rep.adiabaticity_ratio,
                 rep.total_phase,
                 rep.dynamical_phase,
                 rep.geometric_phase,
                 rep.final_fidelity,
                 rep.min_fidelity,
                 kTwoPi / omega};
  });
  return t;
}

Table table_breakdown(const RunConfig& cfg) {
  if (cfg.theta.size() != 1 || cfg.omega.size() != 1)
    throw UsageError("breakdown expects a single --theta and --omega");
  Table t;
  t.columns = {"g",        "ratio",           "final_fidelity",
               "min_fidelity", "geometric_phase", "loop_duration"};
  ModelParams finest = make_params(cfg, cfg.theta.front(), cfg.g.front(),
                                   cfg.omega.front());
  long long steps =
      cfg.steps > 0 ? cfg.steps : default_steps_per_loop(finest);
  std::vector<BreakdownRow> rows = breakdown_sweep(
      cfg.theta.front(), cfg.omega.front(), cfg.g, steps, cfg.b, cfg.coupling);
  for (const BreakdownRow& r : rows)
    t.rows.push_back({r.g, r.ratio, r.final_fidelity, r.min_fidelity,
                      r.geometric_phase, r.loop_duration});
  return t;
}

StatePath composite_path(const RunConfig& cfg, const ModelParams& p) {
  if (p.g > 0.0) return smooth_eigenpath(p, cfg.level, cfg.points);
  return basis_member_path(cfg.basis, BasisMember::a, p.theta, cfg.points);
}

Table table_mixed(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta",      "g",           "subsystem",
               "p_plus",     "omega_plus",  "omega_minus",
               "gamma",      "weight_variation"};
  int n_theta = static_cast<int>(cfg.theta.size());
  int n_g = static_cast<int>(cfg.g.size());
  t.rows.resize(static_cast<size_t>(n_theta) * n_g);
  parallel_rows(n_theta * n_g, cfg.jobs, [&](int i) {
    double theta = cfg.theta[i / n_g];
    double g = cfg.g[i % n_g];
    ModelParams p = make_params(cfg, theta, g, cfg.omega.front());
    MixedPhaseResult r = subsystem_phase(
        reduced_bloch_path(composite_path(cfg, p), cfg.subsystem));
    t.rows[i] = {theta,        g,
                 static_cast<double>(cfg.subsystem),
                 r.p_plus,     r.omega_plus,
                 r.omega_minus, r.gamma,
                 r.weight_variation};
  });
  return t;
}

Table table_sweep(const RunConfig& cfg) {
  Table t;
  t.columns = {"theta",       "g",
               "single_spin_phase", "eigenphase_1",
               "eigenphase_2", "trace_re",
               "trace_im",    "berry_gamma",
               "mixed_gamma_sub1", "mixed_gamma_sub2"};
  int n_theta = static_cast<int>(cfg.theta.size());
  int n_g = static_cast<int>(cfg.g.size());
  long long steps = cfg.steps > 0 ? cfg.steps : 2048;
  t.rows.resize(static_cast<size_t>(n_theta) * n_g);
  parallel_rows(n_theta * n_g, cfg.jobs, [&](int i) {
    double theta = cfg.theta[i / n_g];
    double g = cfg.g[i % n_g];
    ModelParams p = make_params(cfg, theta, g, cfg.omega.front());
    Holonomy h =
        wilson_loop(connection_analytic(theta), static_cast<int>(steps));
    double spin = berry_phase(first_factor_path(theta, cfg.points)).gamma;

    double berry_gamma = nan_value();
    if (g > 0.0) {
      try {
        berry_gamma =
            berry_phase(smooth_eigenpath(p, cfg.level, cfg.points)).gamma;
      } catch (const std::exception&) {
      }
    }
    auto mixed_gamma = [&](int subsystem) {
      try {
        return subsystem_phase(
                   reduced_bloch_path(composite_path(cfg, p), subsystem))
            .gamma;
      } catch (const std::exception&) {
        return nan_value();
      }
    };
    t.rows[i] = {theta,
                 g,
                 spin,
                 h.eigenphases[0],
                 h.eigenphases[1],
                 h.trace.real(),
                 h.trace.imag(),
                 berry_gamma,
                 mixed_gamma(1),
                 mixed_gamma(2)};
  });
  return t;
}

}  // namespace

std::string format_double(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string model_note(CouplingKind kind) {
  return "H = (B/2) n(theta,phi).sigma x I + g*C is a reconstruction; "
         "coupling '" +
         coupling_name(kind) +
         "' (default xx-minus-yy) makes the g=0 degenerate pair "
         "(|down> +/- e^{i phi}|up>)/sqrt2 with level gap 2*g*sin(theta); "
         "other kinds are selectable for exploration.";
}

RunConfig parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"berrylab: Berry phases, Wilson loops and adiabatic dynamics "
               "of a driven two-qubit model"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string theta_s = "1.5707963267948966", g_s = "0", omega_s = "0.001";
  std::string coupling_s = "xx-minus-yy", level_s = "top", format_s = "csv";
  std::string basis_s = "reply";

  const std::vector<std::string> commands = {
      "connection", "holonomy", "berry", "evolve", "breakdown", "mixed",
      "sweep"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--theta", theta_s, "polar angle(s), comma separated");
    sub->add_option("--g", g_s, "coupling strength(s), comma separated");
    sub->add_option("--b", cfg.b, "field strength B");
    sub->add_option("--omega", omega_s, "loop rate(s), comma separated");
    sub->add_option("--coupling", coupling_s,
                    "xx-minus-yy | heisenberg | ising | xy");
    sub->add_option("--points", cfg.points, "loop grid points");
    sub->add_option("--steps", cfg.steps, "integrator steps per loop (0=auto)");
    sub->add_option("--loops", cfg.loops, "number of loops");
    sub->add_option("--level", level_s, "tracked level: 0..3, top, bottom");
    sub->add_option("--subsystem", cfg.subsystem, "reduced subsystem, 1 or 2");
    sub->add_option("--basis", basis_s, "g=0 basis: reply | primed");
    sub->add_option("--out", cfg.out, "output file path");
    sub->add_option("--format", format_s, "csv | json");
    sub->add_option("--jobs", cfg.jobs, "parallel workers (0=auto)");
    sub->add_option("--plot", cfg.plots, "emit '<y>:<x>' plot data (repeatable)");
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    os << app.help();
    throw HelpRequested(os.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) +
                     "\nusage: berrylab <command> [--flags]; commands: "
                     "connection holonomy berry evolve breakdown mixed sweep");
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.theta = parse_list(theta_s, "--theta");
  cfg.g = parse_list(g_s, "--g");
  cfg.omega = parse_list(omega_s, "--omega");
  try {
    cfg.coupling = coupling_from_name(coupling_s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " for --coupling");
  }
  cfg.level = parse_level(level_s);
  if (format_s == "csv") cfg.format = OutputFormat::csv;
  else if (format_s == "json") cfg.format = OutputFormat::json;
  else throw UsageError("invalid value '" + format_s + "' for --format");
  if (basis_s == "reply") cfg.basis = BasisLabel::reply_basis;
  else if (basis_s == "primed") cfg.basis = BasisLabel::primed_basis;
  else throw UsageError("invalid value '" + basis_s + "' for --basis");
  if (cfg.subsystem != 1 && cfg.subsystem != 2)
    throw UsageError("invalid value for --subsystem (expected 1 or 2)");
  if (cfg.points < 8) throw UsageError("--points must be >= 8");
  if (cfg.loops < 1) throw UsageError("--loops must be >= 1");
  for (double th : cfg.theta)
    if (th < 0.0 || th > kPi) throw UsageError("--theta must lie in [0, pi]");
  for (double g : cfg.g)
    if (g < 0.0) throw UsageError("--g must be >= 0");
  for (double w : cfg.omega)
    if (w <= 0.0) throw UsageError("--omega must be > 0");
  if (cfg.b <= 0.0) throw UsageError("--b must be > 0");
  return cfg;
}

Table build_table(const RunConfig& cfg) {
  if (cfg.command == "connection") return table_connection(cfg);
  if (cfg.command == "holonomy") return table_holonomy(cfg);
  if (cfg.command == "berry") return table_berry(cfg);
  if (cfg.command == "evolve") return table_evolve(cfg);
  if (cfg.command == "breakdown") return table_breakdown(cfg);
  if (cfg.command == "mixed") return table_mixed(cfg);
  if (cfg.command == "sweep") return table_sweep(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

std::string output_path(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  return cfg.command + (cfg.format == OutputFormat::csv ? ".csv" : ".json");
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["theta"] = cfg.theta;
  j["g"] = cfg.g;
  j["omega"] = cfg.omega;
  j["b"] = cfg.b;
  j["coupling"] = coupling_name(cfg.coupling);
  j["points"] = cfg.points;
  j["steps"] = cfg.steps;
  j["loops"] = cfg.loops;
  j["level"] = cfg.level;
  j["subsystem"] = cfg.subsystem;
  j["basis"] = cfg.basis == BasisLabel::reply_basis ? "reply" : "primed";
  j["out"] = cfg.out;
  j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
  j["jobs"] = cfg.jobs;
  j["plots"] = cfg.plots;
  return j.dump();
}

RunConfig config_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunConfig cfg;
  cfg.command = j.at("command").get<std::string>();
  cfg.theta = j.at("theta").get<std::vector<double>>();
  cfg.g = j.at("g").get<std::vector<double>>();
  cfg.omega = j.at("omega").get<std::vector<double>>();
  cfg.b = j.at("b").get<double>();
  cfg.coupling = coupling_from_name(j.at("coupling").get<std::string>());
  cfg.points = j.at("points").get<int>();
  cfg.steps = j.at("steps").get<long long>();
  cfg.loops = j.at("loops").get<int>();
  cfg.level = j.at("level").get<int>();
  cfg.subsystem = j.at("subsystem").get<int>();
  cfg.basis = j.at("basis").get<std::string>() == "reply"
                  ? BasisLabel::reply_basis
                  : BasisLabel::primed_basis;
  cfg.out = j.at("out").get<std::string>();
  cfg.format = j.at("format").get<std::string>() == "csv" ? OutputFormat::csv
                                                          : OutputFormat::json;
  cfg.jobs = j.at("jobs").get<int>();
  cfg.plots = j.at("plots").get<std::vector<std::string>>();
  return cfg;
}

RunConfig parse_output_json_config(const std::string& file_contents) {
  nlohmann::json j = nlohmann::json::parse(file_contents);
  return config_from_json_text(j.at("meta").at("config").dump());
}

void write_output(const RunConfig& cfg, const Table& table) {
  std::string path = output_path(cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");

  const std::string levels_note =
      "levels indexed by ascending eigenvalue at phi=0";
  if (cfg.format == OutputFormat::csv) {
    out << "# berrylab " << cfg.command << "\n";
    out << "# config = " << config_to_json(cfg) << "\n";
    out << "# note = " << model_note(cfg.coupling) << "\n";
    out << "# levels = " << levels_note << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c)
      out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < row.size(); ++c)
        out << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
  } else {
    nlohmann::json j;
    j["meta"]["config"] = nlohmann::json::parse(config_to_json(cfg));
    j["meta"]["note"] = model_note(cfg.coupling);
    j["meta"]["levels"] = levels_note;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    out << j.dump(2) << "\n";
  }
}

std::vector<std::string> emit_plot_data(const RunConfig& cfg,
                                        const Table& table) {
  std::vector<std::string> written;
  for (const std::string& spec : cfg.plots) {
    size_t colon = spec.find(':');
    if (colon == std::string::npos)
      throw UsageError("invalid --plot '" + spec + "' (expected '<y>:<x>')");
    std::string ycol = spec.substr(0, colon);
    std::string xcol = spec.substr(colon + 1);
    auto find_col = [&](const std::string& name) {
      for (size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == name) return static_cast<int>(c);
      throw UsageError("unknown column '" + name + "' for --plot");
    };
    int yi = find_col(ycol);
    int xi = find_col(xcol);

    std::filesystem::path dir =
        std::filesystem::path(output_path(cfg)).parent_path();
    std::filesystem::path file =
        dir / (cfg.command + "_" + ycol + "_vs_" + xcol + ".dat");
    std::ofstream out(file, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open plot file '" + file.string() + "'");
    for (const auto& row : table.rows)
      out << format_double(row[xi]) << " " << format_double(row[yi]) << "\n";
    written.push_back(file.string());
  }
  return written;
}

int run(const RunConfig& cfg) {
  Table table = build_table(cfg);
  write_output(cfg, table);
  emit_plot_data(cfg, table);
  return 0;
}

}  // namespace berrylab
