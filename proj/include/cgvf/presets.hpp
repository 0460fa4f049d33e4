#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cgvf/sim.hpp"

namespace cgvf {

/// Built-in scenarios:
///   sim1 - 50 robots on a self-intersecting bent figure-eight, k_c = 300
///   sim2 - 3 robots on an open 3D Lissajous curve with irrational frequency
///   sim3 - 21 robots on three concentric circles/ellipse, k_c = 100
///   sim4 - 67 robots forming an ICRA letter grid on a torus, speeds (-1,-1)
///   exp1 - two Dubins aircraft in tight formation on a 225 m figure-eight
///   exp2 - two Dubins aircraft rendezvousing on a 100 m flight torus
std::map<std::string, Scenario> presets();
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

/// Scaled variant of the figure-eight coordination scenario; initial
/// states drawn uniformly from a box with the given seed.
Scenario bent_infinity_cycle(int robots, double kc, uint64_t seed);

/// Torus maneuvering scenario with a letter-grid reference pattern.
Scenario torus_pattern(int robots, double kc, std::pair<double, double> speeds,
                       uint64_t seed);

/// Reference parameter pairs (w1*, w2*) for the lit pixels of `text`
/// rendered in a 5x7 dot-matrix font (letters I, C, R, A), scanned
/// column by column. Rows map to w1, columns to w2.
std::vector<std::pair<double, double>> letter_reference_grid(const std::string& text,
                                                             double row_spacing,
                                                             double col_spacing);

}  // namespace cgvf
