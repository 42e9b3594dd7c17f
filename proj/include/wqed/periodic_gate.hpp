#pragma once

#include <vector>

#include "wqed/numeric.hpp"
#include "wqed/transfer.hpp"

namespace wqed {

// Analytics for the lossless periodic array operated on the deterministic-transmission curve
// D = -(Gamma/2) tan(phi). For an even number of emitters the array transfer matrix on this
// curve is (-1)^{N/2} P(-phi), so |T_N| = 1 and the phase relative to free propagation is
// wrap((N/2)(pi - 2 phi)). All detunings are in units of Gamma.

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct OperatingPoint {
    double phi = 0.0;
    double delta = 0.0;
    int n_emitters = 0;
    double predicted_shift = 0.0;
};

struct OperatingResiduals {
    double transmission = 0.0;  // | |T_N|^2 - 1 |
    double phase = 0.0;         // |wrap(numeric phase - predicted_shift)|
};

// One wrap-around of the phase curve: target = N(pi/2 - phi) - 2 pi m covers (-pi, pi] on
// phi_interval. Only branches whose closed phi interval avoids 0, pi/2 and pi are reported by
// find_coverage_branches, so their detuning interval is finite and excludes resonance.
struct CoverageBranch {
    int branch_index = 0;
    int n_emitters = 0;
    Interval phi_interval;
    Interval delta_interval;
};

struct QubitState {
    cplx amp0;
    cplx amp1;
};

inline constexpr double kPhaseSingularityGuard = 1e-9;
inline constexpr int kMaxConcatenation = 1'000'000;

// -(1/2) tan(phi). Throws NearSingularPhase within 1e-9 of pi/2.
double deterministic_detuning(double phi);

// wrap((n/2)(pi - 2 phi)). Throws OddEmitterCount for odd or non-positive n.
double deterministic_phase_shift(int n, double phi);

// Numeric residuals of the closed-form prediction for a lossless periodic array. Odd n is
// accepted so the even-only identity can be probed.
OperatingResiduals verify_operating_point(const OperatingPoint& p);

// Branch phi interval for index m (closed; no qualification check).
Interval branch_phi_interval(int n, int m);

std::vector<CoverageBranch> find_coverage_branches(int n, double delta_max = 20.0);

// phi = pi/2 - (target + 2 pi m)/n on the given branch, D from the deterministic curve.
// Throws TargetOutsideBranch when target is outside (-pi, pi] or phi leaves (0, pi).
OperatingPoint design_gate(double target_shift, int n, int branch_index);
OperatingPoint design_gate(double target_shift, const CoverageBranch& branch);

// Smallest k >= 1 with |wrap(k * per_pass - target)| <= tolerance. Throws NotReachable.
int concatenation_plan(double per_pass_shift, double target_shift, double tolerance,
                       int k_max = kMaxConcatenation);

// cos(theta/2)|0> + exp(i shift) sin(theta/2)|1>
QubitState prepare_qubit_state_phase_gate(double theta, double shift);

// Reflected photon routed to channel A, transmitted to channel B:
// sqrt(1 - p_t)|0> + exp(i(dphi_t - dphi_r - reflect_shift)) sqrt(p_t)|1>, where dphi_t is the
// response phase shift (Arg T_N when unset), dphi_r = Arg R_N, and reflect_shift is any extra
// phase picked up on the reflected path. Throws LossyResponse when the flux deficit exceeds
// 1e-6.
QubitState prepare_qubit_state_beamsplitter(const ArrayResponse& response, double reflect_shift);

}  // namespace wqed
