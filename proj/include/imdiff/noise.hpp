#pragma once

#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

/// Diffusion coefficients of the white noises entering the canonical
/// equations; the chi-equation noise carries variance D_chi and the
/// z-equation noise variance D_z, so the associated Fokker-Planck operator
/// is (D_chi/2) d^2/dchi^2 + (D_z/2) d^2/dz^2.
struct NoiseSpec {
    double d_chi = 0.1;
    double d_z = 0.1;

    void validate(bool require_diffusion = false) const
    {
        if (!std::isfinite(d_chi) || !std::isfinite(d_z) || d_chi < 0.0 || d_z < 0.0)
            throw ConfigError("noise: diffusion coefficients must be finite and nonnegative");
        if (require_diffusion && d_chi == 0.0 && d_z == 0.0)
            throw ConfigError("noise: at least one diffusion coefficient must be positive");
    }
};

} // namespace imdiff
