#pragma once

#include "wqed/numeric.hpp"

namespace wqed {

// One two-level emitter side-coupled to the waveguide. All rates and frequencies are in units
// of the waveguide decay rate unless gamma_wg is set explicitly.
struct EmitterParams {
    double omega_e = 0.0;     // transition frequency
    double gamma_loss = 0.0;  // decay into non-guided modes
    double gamma_wg = 1.0;    // decay into the guided modes, > 0

    // Throws ConfigError when gamma_wg <= 0, gamma_loss < 0 or a field is not finite.
    void validate() const;
};

// Photon-emitter detuning omega - omega_e.
struct Detuning {
    double value = 0.0;
};

struct SingleEmitterResponse {
    cplx t1;
    cplx r1;
    cplx q;  // r1 / t1
};

// |t1| below this is treated as a perfect reflector.
inline constexpr double kSingularTransmissionFloor = 1e-12;

// (2D + i gamma) / (2D + i(gamma + Gamma))
cplx transmission_coefficient_single(Detuning delta, const EmitterParams& p);

// -i Gamma / (2D + i(gamma + Gamma))
cplx reflection_coefficient_single(Detuning delta, const EmitterParams& p);

// r1 / t1 = -i Gamma / (2D + i gamma). Throws SingularTransmission when |t1| < floor, which
// only happens next to a resonance of a lossless emitter.
cplx reflection_transmission_ratio(Detuning delta, const EmitterParams& p,
                                   double floor = kSingularTransmissionFloor);

SingleEmitterResponse single_emitter_response(Detuning delta, const EmitterParams& p,
                                              double floor = kSingularTransmissionFloor);

}  // namespace wqed
