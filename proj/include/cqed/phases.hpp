#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cqed/semiclassical.hpp"

namespace cqed {

/// Drive powers where the qubit array switches phase. eps2_sq is where an
/// Up sweep leaves the low-drive (paramagnetic) branch, i.e. the first fold
/// maximum of eps2(n). eps1_sq is where a Down sweep from high drive lands
/// back on that branch; with a single window it is the fold minimum. Both
/// are absent when eps2(n) is monotone.
struct SwitchingThresholds {
  std::optional<double> eps1_sq;
  std::optional<double> eps2_sq;

  bool bistable() const { return eps1_sq.has_value() && eps2_sq.has_value(); }
};

/// Photon numbers and effective fields on both sides of the two jumps.
struct SwitchingPoints {
  double eps1_sq = 0.0;
  double eps2_sq = 0.0;
  double n_before_up = 0.0;
  double n_after_up = 0.0;
  double n_before_down = 0.0;
  double n_after_down = 0.0;
  double J_before_up = 0.0;
  double J_after_up = 0.0;
  double J_before_down = 0.0;
  double J_after_down = 0.0;
};

/// Jump geometry of a prebuilt curve, or nullopt without a window.
std::optional<SwitchingPoints> switching_points(const ResponseCurve& curve);

/// Thresholds for transverse field J_x; the other parameters come from p.
SwitchingThresholds switching_thresholds(double J_x, const ModelParams& p);

struct EnergyJump {
  double dE_up;
  double dE_down;
};

/// |E_g/M(J_after) - E_g/M(J_before)| across the Up and Down jumps. With
/// energy_chain_length = 0 the closed-form thermodynamic energy is used,
/// otherwise the free-fermion sum for that (even) chain length. The ground
/// energy is even in the field, so negative effective fields use |J|.
/// Throws NoBistabilityError without a window.
EnergyJump energy_jump(double J_x, const ModelParams& p, int energy_chain_length = 0);

struct SwitchFields {
  double before_up;
  double after_up;
  double before_down;
  double after_down;
};

/// Effective transverse field just before and after each jump. Throws
/// NoBistabilityError without a window.
SwitchFields effective_field_at_switch(double J_x, const ModelParams& p);

enum class Region { Paramagnetic, Ferromagnetic, Bistable };

/// "P", "F" or "B".
std::string_view to_string(Region region);

struct RegionCell {
  double J_x = 0.0;
  double eps2 = 0.0;
  Region region = Region::Paramagnetic;
  int stable_roots = 0;
};

/// Thresholds along a J_x grid.
struct PhaseBoundaries {
  std::vector<double> J_grid;
  std::vector<std::optional<double>> eps1_sq;
  std::vector<std::optional<double>> eps2_sq;
};

PhaseBoundaries phase_boundaries(const std::vector<double>& J_grid, const ModelParams& p,
                                 unsigned threads = 1);

/// Classifies every (J_x, eps2) cell, J-major order. A cell is Bistable when
/// two or more stable steady states coexist, otherwise it takes the phase of
/// its single stable state. Columns run on up to `threads` threads.
std::vector<RegionCell> phase_diagram(const std::vector<double>& J_range,
                                      const std::vector<double>& eps2_range, const ModelParams& p,
                                      unsigned threads = 1);

}  // namespace cqed
