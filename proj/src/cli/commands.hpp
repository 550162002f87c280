#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace cqed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDivergence = 4;

/// Fig. 1 data: per J_x, every steady state on the drive grid plus Up and
/// Down sweeps with their jump events.
int cmd_fig1(const RunConfig& config, std::ostream& err);

/// Fig. 2 data: effective fields and thresholds at the switches, energy
/// jumps, and the P/F/B region grid.
int cmd_fig2(const RunConfig& config, std::ostream& err);

/// One hysteresis sweep of the model block's J_x.
int cmd_sweep(const RunConfig& config, std::ostream& err);

/// Derived circuit couplings as JSON on `out`.
int cmd_circuit(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Direct kernel evaluation: J -> E_g/M, x, x'.
int cmd_tfim(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line, args[0] being the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace cqed::cli
