#include "wqed/scattering.hpp"

#include <cmath>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

void EmitterParams::validate() const {
    if (!std::isfinite(omega_e)) throw ConfigError("omega_e must be finite");
    if (!std::isfinite(gamma_loss) || gamma_loss < 0.0)
        throw ConfigError("gamma_loss must be finite and >= 0, got " + std::to_string(gamma_loss));
    if (!std::isfinite(gamma_wg) || gamma_wg <= 0.0)
        throw ConfigError("gamma_wg must be finite and > 0, got " + std::to_string(gamma_wg));
}

namespace {

cplx denominator(Detuning delta, const EmitterParams& p) {
    return {2.0 * delta.value, p.gamma_loss + p.gamma_wg};
}

}  // namespace

cplx transmission_coefficient_single(Detuning delta, const EmitterParams& p) {
    return cplx(2.0 * delta.value, p.gamma_loss) / denominator(delta, p);
}

cplx reflection_coefficient_single(Detuning delta, const EmitterParams& p) {
    return cplx(0.0, -p.gamma_wg) / denominator(delta, p);
}

cplx reflection_transmission_ratio(Detuning delta, const EmitterParams& p, double floor) {
    const double abs_t1 = std::abs(transmission_coefficient_single(delta, p));
    if (!(abs_t1 >= floor)) throw SingularTransmission(0, abs_t1);
    return cplx(0.0, -p.gamma_wg) / cplx(2.0 * delta.value, p.gamma_loss);
}

SingleEmitterResponse single_emitter_response(Detuning delta, const EmitterParams& p,
                                              double floor) {
    return {transmission_coefficient_single(delta, p), reflection_coefficient_single(delta, p),
            reflection_transmission_ratio(delta, p, floor)};
}

}  // namespace wqed
