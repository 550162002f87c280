#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/circuit.hpp"
#include "cqed/semiclassical.hpp"

namespace cqed::cli {

/// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Inclusive, evenly spaced grid.
struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  /// Throws ConfigError unless count >= 2 and start < stop.
  void validate(const std::string& name) const;
  std::vector<double> values() const;
};

struct CircuitRun {
  circuit::CircuitSpec spec;
  bool has_C0 = false;
  bool has_C1 = false;
  bool has_E_J = false;
  double ferro_coupling_hz = 2e9;
  double kappa_hz = 6e7;
  double detuning_hz = 0.0;
};

struct RunConfig {
  ModelParams model = ModelParams::paper_fig1(1.8);
  std::string out_dir = ".";
  bool out_dir_given = false;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;

  std::vector<double> fig1_J = {1.4, 1.6, 1.8, 2.0};
  GridSpec fig1_eps2{0.0, 4.0, 401};

  GridSpec fig2_J{1.2, 2.2, 50};
  GridSpec fig2_eps2{0.0, 4.5, 60};

  Direction sweep_direction = Direction::Up;
  GridSpec sweep_eps2{0.0, 3.0, 301};

  std::vector<double> tfim_J;
  GridSpec tfim_grid{0.0, 3.0, 31};

  CircuitRun circuit;
};

/// Names accepted by --preset.
inline constexpr const char* kPaperFig1Preset = "paper-fig1";

/// Resets the model block to the named preset; throws ConfigError if unknown.
void apply_preset(RunConfig& config, const std::string& name);

/// Reads "model", "output", "fig1", "fig2", "sweep", "tfim" and "circuit"
/// sections; anything absent keeps its current value.
void merge_json(RunConfig& config, const nlohmann::json& doc);

/// Parses the document at path and merges it.
void load_config_file(RunConfig& config, const std::string& path);

/// Reads a CircuitSpec document (field names as in CircuitSpec, plus the
/// optional rate fields ferro_coupling_Hz, kappa_Hz, detuning_Hz).
void merge_circuit_json(CircuitRun& run, const nlohmann::json& doc);

/// Parses a detuning: a number, or "gM" / "<factor>gM" meaning factor * g * M.
double parse_detuning(const std::string& text, const ModelParams& model);

Backend parse_backend(const std::string& text);
Direction parse_direction(const std::string& text);
OutputFormat parse_format(const std::string& text);

/// Thread count from CQED_THREADS, defaulting to all hardware threads.
unsigned threads_from_environment();

}  // namespace cqed::cli
