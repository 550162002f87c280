#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "cli/output.hpp"
#include "cqed/errors.hpp"
#include "cqed/phases.hpp"
#include "cqed/tfim.hpp"

namespace cqed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Maps the library's exception types onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SingularityError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NoBistabilityError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

std::string field_tag(double J) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", J);
  return buf;
}

std::vector<std::string> state_cells(const SteadyState& s) {
  return {format_number(s.eps2), format_number(s.n_s), std::to_string(s.branch),
          s.stable ? "1" : "0",  format_number(s.c_s), format_number(s.J_eff),
          format_number(s.X),    std::string(to_string(s.phase))};
}

const std::vector<std::string> kStateColumns = {"eps2", "n_s", "branch_id", "stable",
                                                "c_s",  "J_eff", "X",   "phase"};

json state_json(const SteadyState& s) {
  return {{"eps2", s.eps2},   {"n_s", s.n_s},     {"branch_id", s.branch},
          {"stable", s.stable}, {"c_s", s.c_s},   {"J_eff", s.J_eff},
          {"X", s.X},          {"phase", to_string(s.phase)}, {"extrapolated", s.extrapolated}};
}

json model_json(const ModelParams& p) {
  return {{"J_x", p.J_x},
          {"g", p.g},
          {"kappa", p.kappa},
          {"delta_c", p.delta_c},
          {"M", p.M},
          {"backend", p.backend == Backend::Thermodynamic ? "thermodynamic" : "finite_free_fermion"}};
}

std::string sweep_csv(const SweepTrajectory& t) {
  std::vector<std::string> header = {"index"};
  header.insert(header.end(), kStateColumns.begin(), kStateColumns.end());
  CsvTable table(header);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    auto cells = state_cells(t.points[i]);
    cells.insert(cells.begin(), std::to_string(i));
    table.add_row(std::move(cells));
  }
  return table.str();
}

std::string jumps_csv(const SweepTrajectory& t) {
  CsvTable table({"eps2_at_jump", "n_before", "n_after", "J_eff_before", "J_eff_after",
                  "phase_before", "phase_after"});
  for (const auto& j : t.jumps) {
    table.add_row({format_number(j.eps2), format_number(j.n_before), format_number(j.n_after),
                   format_number(j.J_eff_before), format_number(j.J_eff_after),
                   std::string(to_string(j.phase_before)), std::string(to_string(j.phase_after))});
  }
  return table.str();
}

json sweep_json(const SweepTrajectory& t) {
  json points = json::array();
  for (const auto& s : t.points) points.push_back(state_json(s));
  json jumps = json::array();
  for (const auto& j : t.jumps) {
    jumps.push_back({{"eps2_at_jump", j.eps2},
                     {"n_before", j.n_before},
                     {"n_after", j.n_after},
                     {"J_eff_before", j.J_eff_before},
                     {"J_eff_after", j.J_eff_after},
                     {"phase_before", to_string(j.phase_before)},
                     {"phase_after", to_string(j.phase_after)}});
  }
  return {{"direction", to_string(t.direction)}, {"points", points}, {"jumps", jumps}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void validate_model(const ModelParams& p) {
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

}  // namespace

int cmd_fig1(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    if (config.fig1_J.empty()) throw ConfigError("fig1: the J_x list is empty");
    config.fig1_eps2.validate("fig1 eps2");
    validate_model(config.model);
    const fs::path dir = config.out_dir;
    const auto grid = config.fig1_eps2.values();
    std::vector<double> down_grid(grid.rbegin(), grid.rend());

    for (double J : config.fig1_J) {
      ModelParams p = config.model;
      p.J_x = J;
      validate_model(p);
      const ResponseCurve curve(p);

      // Drive grid plus the fold values inside it, so tangencies are listed.
      std::vector<double> drives = grid;
      for (const auto& f : curve.folds()) {
        if (f.eps2 > grid.front() && f.eps2 < grid.back()) drives.push_back(f.eps2);
      }
      std::sort(drives.begin(), drives.end());

      const auto up = hysteresis_sweep(grid, curve, Direction::Up);
      const auto down = hysteresis_sweep(down_grid, curve, Direction::Down);
      const std::string stem = "fig1_Jx" + field_tag(J);

      if (config.format == OutputFormat::Csv) {
        CsvTable table(kStateColumns);
        for (double e : drives) {
          for (const auto& s : curve.steady_states(e)) table.add_row(state_cells(s));
        }
        write_atomically(dir / (stem + "_curve.csv"), table.str());
        write_atomically(dir / (stem + "_sweep_up.csv"), sweep_csv(up));
        write_atomically(dir / (stem + "_sweep_up_jumps.csv"), jumps_csv(up));
        write_atomically(dir / (stem + "_sweep_down.csv"), sweep_csv(down));
        write_atomically(dir / (stem + "_sweep_down_jumps.csv"), jumps_csv(down));
      } else {
        json curve_rows = json::array();
        for (double e : drives) {
          for (const auto& s : curve.steady_states(e)) curve_rows.push_back(state_json(s));
        }
        json folds = json::array();
        for (const auto& f : curve.folds()) {
          folds.push_back({{"n", f.n}, {"eps2", f.eps2}, {"kind", f.is_maximum ? "max" : "min"}});
        }
        const json doc = {{"model", model_json(p)},
                          {"folds", folds},
                          {"curve", curve_rows},
                          {"sweeps", {{"up", sweep_json(up)}, {"down", sweep_json(down)}}}};
        write_atomically(dir / (stem + ".json"), dump(doc));
      }
    }
    return kExitOk;
  });
}

int cmd_fig2(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    config.fig2_J.validate("fig2 J_x");
    config.fig2_eps2.validate("fig2 eps2");
    validate_model(config.model);
    if (config.fig2_J.start < 0.0 || config.fig2_eps2.start < 0.0) {
      throw ConfigError("fig2: grids must be nonnegative");
    }
    const auto J_values = config.fig2_J.values();
    const auto eps2_values = config.fig2_eps2.values();

    std::vector<std::optional<SwitchingPoints>> points(J_values.size());
    for (std::size_t i = 0; i < J_values.size(); ++i) {
      ModelParams p = config.model;
      p.J_x = J_values[i];
      points[i] = switching_points(ResponseCurve(p));
    }
    const auto cells = phase_diagram(J_values, eps2_values, config.model, config.threads);

    auto energy = [](double J) { return tfim::ground_energy_per_site(std::abs(J)); };
    const fs::path dir = config.out_dir;
    if (config.format == OutputFormat::Csv) {
      CsvTable fields({"J_x", "eps1_sq", "eps2_sq", "J_before_up", "J_after_up", "J_before_down",
                       "J_after_down"});
      CsvTable jumps({"J_x", "dE_up", "dE_down"});
      for (std::size_t i = 0; i < J_values.size(); ++i) {
        const auto& sp = points[i];
        const std::string J = format_number(J_values[i]);
        if (!sp) {
          fields.add_row({J, "", "", "", "", "", ""});
          jumps.add_row({J, "", ""});
          continue;
        }
        fields.add_row({J, format_number(sp->eps1_sq), format_number(sp->eps2_sq),
                        format_number(sp->J_before_up), format_number(sp->J_after_up),
                        format_number(sp->J_before_down), format_number(sp->J_after_down)});
        jumps.add_row({J, format_number(std::abs(energy(sp->J_after_up) - energy(sp->J_before_up))),
                       format_number(std::abs(energy(sp->J_after_down) - energy(sp->J_before_down)))});
      }
      CsvTable regions({"J_x", "eps2", "region", "stable_roots"});
      for (const auto& c : cells) {
        regions.add_row({format_number(c.J_x), format_number(c.eps2), std::string(to_string(c.region)),
                         std::to_string(c.stable_roots)});
      }
      write_atomically(dir / "fig2a_effective_field.csv", fields.str());
      write_atomically(dir / "fig2b_energy_jump.csv", jumps.str());
      write_atomically(dir / "fig2c_regions.csv", regions.str());
    } else {
      json boundaries = json::array();
      for (std::size_t i = 0; i < J_values.size(); ++i) {
        const auto& sp = points[i];
        json row = {{"J_x", J_values[i]}};
        if (sp) {
          row["eps1_sq"] = sp->eps1_sq;
          row["eps2_sq"] = sp->eps2_sq;
          row["J_before_up"] = sp->J_before_up;
          row["J_after_up"] = sp->J_after_up;
          row["J_before_down"] = sp->J_before_down;
          row["J_after_down"] = sp->J_after_down;
          row["dE_up"] = std::abs(energy(sp->J_after_up) - energy(sp->J_before_up));
          row["dE_down"] = std::abs(energy(sp->J_after_down) - energy(sp->J_before_down));
        } else {
          for (const char* key : {"eps1_sq", "eps2_sq", "J_before_up", "J_after_up", "J_before_down",
                                  "J_after_down", "dE_up", "dE_down"}) {
            row[key] = nullptr;
          }
        }
        boundaries.push_back(row);
      }
      json regions = json::array();
      for (const auto& c : cells) {
        regions.push_back({{"J_x", c.J_x},
                           {"eps2", c.eps2},
                           {"region", to_string(c.region)},
                           {"stable_roots", c.stable_roots}});
      }
      write_atomically(dir / "fig2.json",
                       dump({{"model", model_json(config.model)},
                             {"boundaries", boundaries},
                             {"regions", regions}}));
    }
    return kExitOk;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    config.sweep_eps2.validate("sweep eps2");
    validate_model(config.model);
    if (config.sweep_eps2.start < 0.0) throw ConfigError("sweep: drive powers must be >= 0");
    auto grid = config.sweep_eps2.values();
    if (config.sweep_direction == Direction::Down) std::reverse(grid.begin(), grid.end());
    const auto traj = hysteresis_sweep(grid, config.model, config.sweep_direction);
    const fs::path dir = config.out_dir;
    const std::string stem = "sweep_" + std::string(to_string(config.sweep_direction));
    if (config.format == OutputFormat::Csv) {
      write_atomically(dir / (stem + ".csv"), sweep_csv(traj));
      write_atomically(dir / (stem + "_jumps.csv"), jumps_csv(traj));
    } else {
      json doc = sweep_json(traj);
      doc["model"] = model_json(config.model);
      write_atomically(dir / (stem + ".json"), dump(doc));
    }
    return kExitOk;
  });
}

int cmd_circuit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CircuitRun& run = config.circuit;
    if (!run.has_C0 || !run.has_C1 || !run.has_E_J) {
      throw ConfigError("circuit: C0, C1 and E_J must be given");
    }
    try {
      run.spec.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("circuit: ") + e.what());
    }
    const auto d = circuit::derive(run.spec, run.ferro_coupling_hz, run.kappa_hz, run.detuning_hz);
    if (!d.literal.valid) {
      err << "warning: C1/C0 = " << d.literal.ratio
          << " violates the Ising-like criterion C1/C0 < 1/2\n";
    }
    const double h = circuit::si::kPlanck;
    const json doc = {
        {"B1_literal", d.literal.B1},
        {"B2_literal", d.literal.B2},
        {"ratio", d.literal.ratio},
        {"valid", d.literal.valid},
        {"B1_derived_J", d.derived.B1},
        {"B2_derived_J", d.derived.B2},
        {"B1_derived_Hz", d.derived.B1 / h},
        {"B2_derived_Hz", d.derived.B2 / h},
        {"ratio_derived", d.derived.ratio},
        {"L_sq0", d.resonator.L_sq0},
        {"L_sq", d.L_sq},
        {"omega_c0_rad_s", d.resonator.omega_c0},
        {"omega_c0_Hz", d.resonator.omega_c0_hz},
        {"g_rad_s", d.resonator.g},
        {"g_Hz", d.resonator.g_hz},
        {"ferro_coupling_Hz", run.ferro_coupling_hz},
        {"g_dimensionless", d.model.g},
        {"dimensionless", model_json(d.model)}};
    const std::string text = dump(doc);
    out << text;
    if (config.out_dir_given) write_atomically(fs::path(config.out_dir) / "circuit.json", text);
    return kExitOk;
  });
}

int cmd_tfim(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<double> fields = config.tfim_J;
    if (fields.empty()) {
      config.tfim_grid.validate("tfim J");
      fields = config.tfim_grid.values();
    }
    std::string text;
    if (config.format == OutputFormat::Csv) {
      CsvTable table({"J", "energy_per_site", "x_per_site", "x_derivative_per_site"});
      for (double J : fields) {
        const auto obs = tfim::thermodynamic(J);
        table.add_row({format_number(J), format_number(obs.energy_per_site),
                       format_number(obs.x_per_site), format_number(obs.x_derivative_per_site)});
      }
      text = table.str();
    } else {
      json rows = json::array();
      for (double J : fields) {
        const auto obs = tfim::thermodynamic(J);
        rows.push_back({{"J", J},
                        {"energy_per_site", obs.energy_per_site},
                        {"x_per_site", obs.x_per_site},
                        {"x_derivative_per_site", std::isfinite(obs.x_derivative_per_site)
                                                      ? json(obs.x_derivative_per_site)
                                                      : json(nullptr)}});
      }
      text = dump({{"tfim", rows}});
    }
    out << text;
    if (config.out_dir_given) {
      const char* name = config.format == OutputFormat::Csv ? "tfim.csv" : "tfim.json";
      write_atomically(fs::path(config.out_dir) / name, text);
    }
    return kExitOk;
  });
}

namespace {

struct GridFlags {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> count;

  void add(CLI::App* app, const std::string& prefix) {
    app->add_option("--" + prefix + "-start", start, "grid start");
    app->add_option("--" + prefix + "-stop", stop, "grid stop");
    app->add_option("--" + prefix + "-count", count, "grid point count");
  }
  void apply(GridSpec& grid) const {
    if (start) grid.start = *start;
    if (stop) grid.stop = *stop;
    if (count) grid.count = *count;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semiclassical steady states of a driven resonator coupled to an Ising qubit array"};
  app.name(args.empty() ? "cqed" : args.front());
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, out_dir, format, preset;
  std::optional<double> Jx, g, kappa;
  std::optional<std::string> delta_c, backend;
  std::optional<int> M;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv or json");
  app.add_option("--preset", preset, "named parameter preset (paper-fig1)");
  app.add_option("--Jx", Jx, "transverse field J_x");
  app.add_option("--g", g, "qubit-resonator coupling g");
  app.add_option("--kappa", kappa, "resonator damping rate");
  app.add_option("--delta-c", delta_c, "detuning; a number or e.g. 'gM', '0.5gM'");
  app.add_option("--M", M, "chain length");
  app.add_option("--backend", backend, "thermodynamic or finite_free_fermion");

  auto* fig1 = app.add_subcommand("fig1", "S-curves and hysteresis sweeps per J_x");
  std::optional<std::vector<double>> fig1_J;
  GridFlags fig1_eps2;
  fig1->add_option("--J-list", fig1_J, "J_x values")->expected(0, -1);
  fig1_eps2.add(fig1, "eps2");

  auto* fig2 = app.add_subcommand("fig2", "switching fields, energy jumps and phase regions");
  GridFlags fig2_J, fig2_eps2;
  fig2_J.add(fig2, "J");
  fig2_eps2.add(fig2, "eps2");

  auto* sweep = app.add_subcommand("sweep", "single hysteresis sweep");
  std::optional<std::string> direction;
  GridFlags sweep_eps2;
  sweep->add_option("--direction", direction, "up or down");
  sweep_eps2.add(sweep, "eps2");

  auto* circ = app.add_subcommand("circuit", "derive couplings from a circuit spec");
  std::optional<std::string> spec_path;
  std::optional<double> ferro_hz, kappa_hz, detuning_hz;
  circ->add_option("--spec", spec_path, "circuit spec JSON");
  circ->add_option("--ferro-hz", ferro_hz, "ferromagnetic coupling used as unit [Hz]");
  circ->add_option("--kappa-hz", kappa_hz, "resonator damping [Hz]");
  circ->add_option("--detuning-hz", detuning_hz, "detuning [Hz]");

  auto* tfim_cmd = app.add_subcommand("tfim", "evaluate E_g/M, x and x' of the Ising chain");
  std::optional<std::vector<double>> tfim_J;
  GridFlags tfim_grid;
  tfim_cmd->add_option("--J", tfim_J, "field values");
  tfim_grid.add(tfim_cmd, "J");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunConfig config;
  config.threads = threads_from_environment();
  try {
    if (preset) apply_preset(config, *preset);
    if (config_path) load_config_file(config, *config_path);
    if (fig1->count("--J-list") > 0) config.fig1_J = fig1_J.value_or(std::vector<double>{});
    if (out_dir) {
      config.out_dir = *out_dir;
      config.out_dir_given = true;
    }
    if (format) config.format = parse_format(*format);
    if (Jx) config.model.J_x = *Jx;
    if (g) config.model.g = *g;
    if (kappa) config.model.kappa = *kappa;
    if (M) config.model.M = *M;
    if (backend) config.model.backend = parse_backend(*backend);
    if (delta_c) config.model.delta_c = parse_detuning(*delta_c, config.model);
    fig1_eps2.apply(config.fig1_eps2);
    fig2_J.apply(config.fig2_J);
    fig2_eps2.apply(config.fig2_eps2);
    sweep_eps2.apply(config.sweep_eps2);
    if (direction) config.sweep_direction = parse_direction(*direction);
    if (spec_path) {
      std::ifstream in(*spec_path);
      if (!in) throw ConfigError("cannot open circuit spec '" + *spec_path + "'");
      try {
        merge_circuit_json(config.circuit, json::parse(in));
      } catch (const json::exception& e) {
        throw ConfigError(std::string("circuit spec: ") + e.what());
      }
    }
    if (ferro_hz) config.circuit.ferro_coupling_hz = *ferro_hz;
    if (kappa_hz) config.circuit.kappa_hz = *kappa_hz;
    if (detuning_hz) config.circuit.detuning_hz = *detuning_hz;
    if (tfim_J) config.tfim_J = *tfim_J;
    tfim_grid.apply(config.tfim_grid);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (fig1->parsed()) return cmd_fig1(config, err);
  if (fig2->parsed()) return cmd_fig2(config, err);
  if (sweep->parsed()) return cmd_sweep(config, err);
  if (circ->parsed()) return cmd_circuit(config, out, err);
  return cmd_tfim(config, out, err);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cqed::cli
