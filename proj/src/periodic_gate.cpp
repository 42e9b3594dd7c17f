#include "wqed/periodic_gate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void require_even(int n) {
    if (n < 2 || n % 2 != 0)
        throw OddEmitterCount("emitter count must be even and >= 2, got " + std::to_string(n));
}

// Integer form of the qualification test: the closed interval
// [pi/2 - (2m+1)pi/n, pi/2 - (2m-1)pi/n] lies strictly inside (0, pi/2) or (pi/2, pi)
// exactly when |m| >= 1 and 4|m| + 2 < n.
bool avoids_singular_phases(int n, int m) {
    return m != 0 && 4 * std::abs(m) + 2 < n;
}

}  // namespace

double deterministic_detuning(double phi) {
    if (std::abs(std::remainder(phi - kPi / 2.0, kPi)) < kPhaseSingularityGuard)
        throw NearSingularPhase("deterministic curve diverges at phi = pi/2");
    return -0.5 * std::tan(phi);
}

double deterministic_phase_shift(int n, double phi) {
    require_even(n);
    return wrap_phase(0.5 * n * (kPi - 2.0 * phi));
}

OperatingResiduals verify_operating_point(const OperatingPoint& p) {
    const EmitterParams lossless{0.0, 0.0, 1.0};
    const auto geometry =
        ArrayGeometry::periodic(static_cast<std::size_t>(p.n_emitters), lossless, p.phi);
    const ArrayResponse r = array_response_from_params(p.delta, geometry);
    return {std::abs(r.p_t - 1.0), std::abs(wrap_phase(*r.phase_shift - p.predicted_shift))};
}

Interval branch_phi_interval(int n, int m) {
    // Same expression as design_gate at targets pi and -pi, so the end points round alike.
    return {kPi / 2.0 - (kPi + 2.0 * kPi * m) / n, kPi / 2.0 - (-kPi + 2.0 * kPi * m) / n};
}

std::vector<CoverageBranch> find_coverage_branches(int n, double delta_max) {
    require_even(n);
    if (!(delta_max > 0.0)) throw ConfigError("delta_max must be > 0");
    std::vector<CoverageBranch> out;
    for (int m = -n; m <= n; ++m) {
        if (!avoids_singular_phases(n, m)) continue;
        const Interval phi = branch_phi_interval(n, m);
        const double d_lo = deterministic_detuning(phi.lo);
        const double d_hi = deterministic_detuning(phi.hi);
        const Interval delta{std::min(d_lo, d_hi), std::max(d_lo, d_hi)};
        if (std::max(std::abs(delta.lo), std::abs(delta.hi)) > delta_max) continue;
        out.push_back({m, n, phi, delta});
    }
    return out;
}

OperatingPoint design_gate(double target_shift, int n, int branch_index) {
    require_even(n);
    if (!(target_shift > -kPi && target_shift <= kPi))
        throw TargetOutsideBranch("target shift must lie in (-pi, pi]");
    const double phi = kPi / 2.0 - (target_shift + 2.0 * kPi * branch_index) / n;
    if (!(phi > 0.0 && phi < kPi))
        throw TargetOutsideBranch("branch " + std::to_string(branch_index) +
                                  " puts phi outside (0, pi)");
    return {phi, deterministic_detuning(phi), n, deterministic_phase_shift(n, phi)};
}

OperatingPoint design_gate(double target_shift, const CoverageBranch& branch) {
    OperatingPoint p = design_gate(target_shift, branch.n_emitters, branch.branch_index);
    if (!branch.phi_interval.contains(p.phi))
        throw TargetOutsideBranch("designed phi falls outside the branch interval");
    return p;
}

int concatenation_plan(double per_pass_shift, double target_shift, double tolerance, int k_max) {
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    for (int k = 1; k <= k_max; ++k) {
        if (std::abs(wrap_phase(k * per_pass_shift - target_shift)) <= tolerance) return k;
    }
    throw NotReachable("no concatenation count up to " + std::to_string(k_max) +
                       " reaches the target within tolerance");
}

QubitState prepare_qubit_state_phase_gate(double theta, double shift) {
    return {cplx(std::cos(theta / 2.0)), std::polar(std::sin(theta / 2.0), shift)};
}

QubitState prepare_qubit_state_beamsplitter(const ArrayResponse& response, double reflect_shift) {
    const double deficit = response.flux_deficit();
    if (std::abs(deficit) > 1e-6)
        throw LossyResponse("response loses flux " + std::to_string(deficit) +
                            "; no pure qubit state");
    const double p_t = std::clamp(response.p_t, 0.0, 1.0);
    const double phase_t = response.phase_shift.value_or(response.arg_t);
    const double phase_r = std::arg(response.r_n);
    return {cplx(std::sqrt(1.0 - p_t)),
            std::polar(std::sqrt(p_t), wrap_phase(phase_t - phase_r - reflect_shift))};
}

}  // namespace wqed
