#pragma once

#include <array>

namespace stencil_lab {

/// Published error values for the disc Poisson sweep (h = 0.01, phs3, m = 3, n = 10..69),
/// also shipped as data/reference_disc_sweep.csv.
struct ReferenceRow {
    int n;
    double e_max_poiss;
    double e_avg_poiss;
    double e_max_lap;
    double e_avg_lap;
};

const std::array<ReferenceRow, 60>& reference_disc_sweep();

}  // namespace stencil_lab
