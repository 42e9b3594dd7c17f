#pragma once

#include <vector>

#include "wqed/transfer.hpp"

namespace wqed {

// Gaussian single-photon wavepacket psi0(w) = (2 pi bw^2)^{-1/4} exp(-(w - wc)^2 / (4 bw^2)),
// so |psi0|^2 is a normal density with standard deviation bw.
struct GaussianPulse {
    double omega_c = 0.0;
    double bandwidth = 0.0;

    void validate() const;
};

enum class QuadratureScheme { Adaptive, GaussHermite };

struct PulseOptions {
    QuadratureScheme scheme = QuadratureScheme::Adaptive;
    double rel_tol = 1e-9;
    // Multiply the phase integrand by exp(-i w tau_N) so the pulse phase is measured against
    // free propagation, like the monochromatic phase shift.
    bool free_propagation_reference = true;
    // Weight the phase integrand by T |T|^2 |psi0|^2; false uses T |psi0|^2.
    bool transmission_weighted_phase = true;
};

// Half-width of the integration window in units of the bandwidth.
inline constexpr double kPulseWindow = 8.0;

double pulse_amplitude(double omega, const GaussianPulse& pulse);

// The geometry's phases are taken at omega_c; at another frequency they scale as
// w / omega_c (fixed emitter delays). Requires omega_c > 0.
ArrayGeometry geometry_at(const ArrayGeometry& at_center, const GaussianPulse& pulse, double omega);

// T_N(w) psi0(w)
cplx scattered_pulse_amplitude(double omega_k, const GaussianPulse& pulse,
                               const ArrayGeometry& geometry);

// Integral of |T_N|^2 |psi0|^2. Throws QuadratureNotConverged.
double pulse_transmission_probability(const GaussianPulse& pulse, const ArrayGeometry& geometry,
                                      const PulseOptions& options = {});

// Arg of the integral of T_N |T_N|^2 |psi0|^2 (see PulseOptions). Throws QuadratureNotConverged
// or ZeroResultant.
double pulse_phase_shift(const GaussianPulse& pulse, const ArrayGeometry& geometry,
                         const PulseOptions& options = {});

// Gauss-Hermite nodes and weights for the weight exp(-x^2), ascending nodes.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermiteRule gauss_hermite_rule(int n);

}  // namespace wqed
