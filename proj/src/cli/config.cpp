#include "cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace cqed::cli {

using nlohmann::json;

void GridSpec::validate(const std::string& name) const {
  if (count < 2) throw ConfigError(name + ": grid needs count >= 2");
  if (!(start < stop)) throw ConfigError(name + ": grid needs start < stop");
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    v[i] = i == count - 1 ? stop : start + (stop - start) * i / (count - 1);
  }
  return v;
}

void apply_preset(RunConfig& config, const std::string& name) {
  if (name != kPaperFig1Preset) throw ConfigError("unknown preset '" + name + "'");
  config.model = ModelParams::paper_fig1(config.model.J_x);
}

namespace {

double number(const json& node, const char* key) {
  const auto& v = node.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

void read_grid(const json& node, GridSpec& grid) {
  if (node.contains("start")) grid.start = number(node, "start");
  if (node.contains("stop")) grid.stop = number(node, "stop");
  if (node.contains("count")) {
    if (!node.at("count").is_number_integer()) throw ConfigError("'count' must be an integer");
    grid.count = node.at("count").get<int>();
  }
}

std::vector<double> read_list(const json& node) {
  if (!node.is_array()) throw ConfigError("expected a list of numbers");
  std::vector<double> out;
  for (const auto& v : node) {
    if (!v.is_number()) throw ConfigError("expected a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

double parse_detuning(const std::string& text, const ModelParams& model) {
  const auto pos = text.find("gM");
  try {
    if (pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw ConfigError("bad detuning '" + text + "'");
      return v;
    }
    if (pos + 2 != text.size()) throw ConfigError("bad detuning '" + text + "'");
    double factor = 1.0;
    if (pos > 0) {
      std::string head = text.substr(0, pos);
      if (head.back() == '*') head.pop_back();
      std::size_t used = 0;
      factor = std::stod(head, &used);
      if (used != head.size()) throw ConfigError("bad detuning '" + text + "'");
    }
    return factor * model.g * model.M;
  } catch (const std::logic_error&) {
    throw ConfigError("bad detuning '" + text + "'");
  }
}

Backend parse_backend(const std::string& text) {
  if (text == "thermodynamic") return Backend::Thermodynamic;
  if (text == "finite_free_fermion") return Backend::FiniteFreeFermion;
  throw ConfigError("backend must be 'thermodynamic' or 'finite_free_fermion'");
}

Direction parse_direction(const std::string& text) {
  if (text == "up") return Direction::Up;
  if (text == "down") return Direction::Down;
  throw ConfigError("direction must be 'up' or 'down'");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("format must be 'csv' or 'json'");
}

void merge_circuit_json(CircuitRun& run, const json& doc) {
  if (!doc.is_object()) throw ConfigError("circuit spec must be a JSON object");
  auto& s = run.spec;
  auto read = [&](const char* key, double& field) {
    if (doc.contains(key)) field = number(doc, key);
  };
  if (doc.contains("C0")) {
    s.C0 = number(doc, "C0");
    run.has_C0 = true;
  }
  if (doc.contains("C1")) {
    s.C1 = number(doc, "C1");
    run.has_C1 = true;
  }
  if (doc.contains("E_J")) {
    s.E_J = number(doc, "E_J");
    run.has_E_J = true;
  }
  read("L_r", s.L_r);
  read("C_r", s.C_r);
  read("I_r", s.I_r);
  read("I_q2", s.I_q2);
  read("R0", s.R0);
  read("phi_ex", s.phi_ex);
  read("Phi_r", s.Phi_r);
  if (doc.contains("M")) {
    if (!doc.at("M").is_number_integer()) throw ConfigError("'M' must be an integer");
    s.M = doc.at("M").get<int>();
  }
  if (doc.contains("periodic")) s.periodic = doc.at("periodic").get<bool>();
  read("ferro_coupling_Hz", run.ferro_coupling_hz);
  read("kappa_Hz", run.kappa_hz);
  read("detuning_Hz", run.detuning_hz);
}

void merge_json(RunConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  try {
    if (doc.contains("preset")) apply_preset(config, doc.at("preset").get<std::string>());
    if (doc.contains("model")) {
      const auto& m = doc.at("model");
      if (m.contains("J_x")) config.model.J_x = number(m, "J_x");
      if (m.contains("g")) config.model.g = number(m, "g");
      if (m.contains("kappa")) config.model.kappa = number(m, "kappa");
      if (m.contains("M")) {
        if (!m.at("M").is_number_integer()) throw ConfigError("'M' must be an integer");
        config.model.M = m.at("M").get<int>();
      }
      if (m.contains("backend")) config.model.backend = parse_backend(m.at("backend").get<std::string>());
      // Read last: "gM" refers to the final g and M.
      if (m.contains("delta_c")) {
        const auto& d = m.at("delta_c");
        config.model.delta_c = d.is_string() ? parse_detuning(d.get<std::string>(), config.model)
                                             : number(m, "delta_c");
      }
    }
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      if (o.contains("dir")) {
        config.out_dir = o.at("dir").get<std::string>();
        config.out_dir_given = true;
      }
      if (o.contains("format")) config.format = parse_format(o.at("format").get<std::string>());
    }
    if (doc.contains("fig1")) {
      const auto& f = doc.at("fig1");
      if (f.contains("J_x")) config.fig1_J = read_list(f.at("J_x"));
      if (f.contains("eps2")) read_grid(f.at("eps2"), config.fig1_eps2);
    }
    if (doc.contains("fig2")) {
      const auto& f = doc.at("fig2");
      if (f.contains("J_x")) read_grid(f.at("J_x"), config.fig2_J);
      if (f.contains("eps2")) read_grid(f.at("eps2"), config.fig2_eps2);
    }
    if (doc.contains("sweep")) {
      const auto& s = doc.at("sweep");
      if (s.contains("direction")) config.sweep_direction = parse_direction(s.at("direction").get<std::string>());
      if (s.contains("eps2")) read_grid(s.at("eps2"), config.sweep_eps2);
    }
    if (doc.contains("tfim")) {
      const auto& t = doc.at("tfim");
      if (t.contains("J")) {
        if (t.at("J").is_array()) {
          config.tfim_J = read_list(t.at("J"));
        } else {
          read_grid(t.at("J"), config.tfim_grid);
        }
      }
    }
    if (doc.contains("circuit")) merge_circuit_json(config.circuit, doc.at("circuit"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  merge_json(config, doc);
}

unsigned threads_from_environment() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("CQED_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  try {
    const int n = std::stoi(env);
    return n > 0 ? static_cast<unsigned>(n) : hw;
  } catch (const std::logic_error&) {
    return hw;
  }
}

}  // namespace cqed::cli
