#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wqed/numeric.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

struct Matrix2c {
    cplx m11{1.0}, m12{}, m21{}, m22{1.0};

    static Matrix2c identity() { return {}; }
    cplx det() const { return m11 * m22 - m12 * m21; }
    double max_abs() const;

    friend Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
};

// A 2x2 matrix stored as m * exp(log_scale). Long chains in the dark region grow
// exponentially with the number of emitters; the magnitude is pushed into log_scale.
struct ScaledMatrix {
    Matrix2c m;
    double log_scale = 0.0;

    // Determinant of the true matrix m * exp(log_scale).
    cplx true_det() const { return m.det() * std::exp(2.0 * log_scale); }
};

struct RenormPolicy {
    // Rescale whenever the largest element leaves [1/threshold, threshold].
    double threshold = 1e2;
};

// Rescales s so its largest element has unit magnitude when it has left the policy band.
void renormalize(ScaledMatrix& s, RenormPolicy policy = {});

// Emitters in waveguide order plus the N-1 free-propagation phases between neighbours.
struct ArrayGeometry {
    std::vector<EmitterParams> emitters;
    std::vector<double> phases;

    static ArrayGeometry periodic(std::size_t n, const EmitterParams& emitter, double phi);

    std::size_t size() const { return emitters.size(); }
    // Phase accumulated by free propagation from the first to the last emitter.
    double total_phase() const;
    // Throws ConfigError for an empty array, a phase count other than N-1, or a negative or
    // non-finite phase.
    void validate() const;
};

struct ArrayResponse {
    cplx t_n;
    cplx r_n;
    double p_t = 0.0;
    // Arg(T_N) computed from the unscaled matrix element; stays meaningful when |T_N|
    // underflows deep in the dark region.
    double arg_t = 0.0;
    // Arg(T_N exp(-i omega tau_N)) in (-pi, pi]; set by callers that know the geometry.
    std::optional<double> phase_shift;

    double flux_deficit() const { return 1.0 - std::norm(t_n) - std::norm(r_n); }
};

// exp(q (sz + i sy)) = [[1+q, q], [-q, 1-q]], exact since (sz + i sy) is nilpotent.
ScaledMatrix emitter_transmission_matrix(cplx q);

// diag(exp(i phi), exp(-i phi))
ScaledMatrix propagation_matrix(double phi);

// T(q_N) P(phi_{N-1}) ... P(phi_1) T(q_1) with q_n evaluated at omega - omega_e of emitter n.
// Throws SingularTransmission naming the first resonant lossless emitter.
ScaledMatrix compose_array(const ArrayGeometry& geometry, double omega, RenormPolicy policy = {});

// T_N = 1 / M22 and R_N = -M21 / M22. The sign on R_N makes the single-emitter chain reproduce
// r1 exactly and equals the reflection amplitude for a photon incident on emitter 1.
// Throws DegenerateMatrix when M22 == 0.
ArrayResponse array_response(const ScaledMatrix& m);

// compose_array + array_response, with phase_shift relative to free propagation.
ArrayResponse array_response_from_params(double omega, const ArrayGeometry& geometry,
                                         RenormPolicy policy = {});

}  // namespace wqed
