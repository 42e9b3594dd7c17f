#pragma once

#include <span>
#include <vector>

#include "wqed/scattering.hpp"

namespace wqed {

// Two right-moving photons scattered by one emitter. Delta functions are never materialized:
// the functions return the smooth coefficients multiplying them. The inelastic part lives on
// the energy shell w1 + w2 = const, parametrized in the centre-of-mass frame
// w1 = omega_c + delta/2, w2 = omega_c - delta/2. The output centre frequency is the input one
// by construction, so there is no separate argument for it.
struct EnergyShellPoint {
    double omega_c = 0.0;
    double delta_in = 0.0;
    double delta_out = 0.0;
};

struct InelasticResult {
    double delta_out = 0.0;
    double density = 0.0;  // normalized over the delta_out grid (trapezoid rule)
    double phase = 0.0;    // Arg of the amplitude, (-pi, pi]
};

// T(w_k1) T(w_k2), the weight of the direct and exchanged delta pairings.
cplx elastic_coefficient(double omega_k1, double omega_k2, const EmitterParams& p);

// (2 / (pi Gamma)) R(wc + dout/2) R(wc - dout/2) [R(wc + din/2) + R(wc - din/2)]
cplx inelastic_amplitude(const EnergyShellPoint& point, const EmitterParams& p);

// Relative |amplitude|^2 at the grid edges must stay below this.
inline constexpr double kInelasticTailFloor = 1e-8;

// Normalized |amplitude|^2 and phase over a symmetric, increasing delta_out grid.
// Throws GridTooNarrow when the grid is not symmetric or the tails are not resolved.
std::vector<InelasticResult> inelastic_density(double omega_c, double delta_in,
                                               std::span<const double> delta_out_grid,
                                               const EmitterParams& p);

// Trapezoid integral of y over increasing x.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace wqed
