#pragma once

// Deterministic UAV placement for the analytic N_scf: N positions stratified
// by measure over the valid waiting-UAV region (horizontal distance
// [r, sqrt(R^2 - H^2)] on the line/plane, the shell (r, R] in 3-D).

#include <vector>

#include "udmac/geometry.hpp"
#include "udmac/markov.hpp"

namespace udmac::harness {

std::vector<geometry::Vec3> stratified_positions(const geometry::SceneGeometry& geom, int count);

markov::ScfCount scf_count_at(const geometry::SceneGeometry& geom, int uavs, double wait_s,
                              markov::Rounding rounding);

}  // namespace udmac::harness
