#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoflow/grid.hpp"

namespace geoflow::data {

struct FamilyParams {
    double alpha = 0.1;
    /// Largest integer wavenumber per axis for random low-mode sums.
    int modes = 2;
    /// Oscillation wavenumber K for the oscillatory family.
    int wavenumber = 4;
    /// Ambient dimension of sphere-valued data (2 for S^1, 3 for S^2).
    int target_dim = 3;
};

/// Sphere-valued families: "constant", "angle_modes", "oscillatory", "hedgehog".
/// Output is unit-norm at every site to 1e-12.
Field sphere_data(const std::string& family, const FamilyParams& params, const GridSpec& grid,
                  std::uint64_t seed);

/// Velocity families (n >= 2): "zero", "stream", "taylor_green".
/// Output is divergence-free.
Field velocity_data(const std::string& family, const FamilyParams& params, const GridSpec& grid,
                    std::uint64_t seed);

/// Angle field theta(x) behind the angle_modes and oscillatory families.
Field angle_field(const std::string& family, const FamilyParams& params, const GridSpec& grid,
                  std::uint64_t seed);

const std::vector<std::string>& sphere_families();
const std::vector<std::string>& velocity_families();

}  // namespace geoflow::data
