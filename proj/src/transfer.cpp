#include "wqed/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

double Matrix2c::max_abs() const {
    return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

void renormalize(ScaledMatrix& s, RenormPolicy policy) {
    const double peak = s.m.max_abs();
    if (peak <= policy.threshold && peak >= 1.0 / policy.threshold) return;
    if (peak == 0.0 || !std::isfinite(peak)) return;
    const double inv = 1.0 / peak;
    s.m.m11 *= inv;
    s.m.m12 *= inv;
    s.m.m21 *= inv;
    s.m.m22 *= inv;
    s.log_scale += std::log(peak);
}

ArrayGeometry ArrayGeometry::periodic(std::size_t n, const EmitterParams& emitter, double phi) {
    ArrayGeometry g;
    g.emitters.assign(n, emitter);
    g.phases.assign(n > 0 ? n - 1 : 0, phi);
    return g;
}

double ArrayGeometry::total_phase() const {
    double sum = 0.0;
    for (double phi : phases) sum += phi;
    return sum;
}

void ArrayGeometry::validate() const {
    if (emitters.empty()) throw ConfigError("array must contain at least one emitter");
    if (phases.size() + 1 != emitters.size())
        throw ConfigError("array of " + std::to_string(emitters.size()) + " emitters needs " +
                          std::to_string(emitters.size() - 1) + " phases, got " +
                          std::to_string(phases.size()));
    for (const auto& e : emitters) e.validate();
    for (double phi : phases)
        if (!std::isfinite(phi) || phi < 0.0)
            throw ConfigError("propagation phases must be finite and >= 0");
}

ScaledMatrix emitter_transmission_matrix(cplx q) {
    return {{1.0 + q, q, -q, 1.0 - q}, 0.0};
}

ScaledMatrix propagation_matrix(double phi) {
    const cplx e = std::polar(1.0, phi);
    return {{e, 0.0, 0.0, std::conj(e)}, 0.0};
}

namespace {

cplx emitter_ratio(const EmitterParams& e, double omega, std::size_t index) {
    try {
        return reflection_transmission_ratio(Detuning{omega - e.omega_e}, e);
    } catch (const SingularTransmission&) {
        throw SingularTransmission(
            index, std::abs(transmission_coefficient_single(Detuning{omega - e.omega_e}, e)));
    }
}

// Double-double arithmetic for the chain product. Near a resonance |q| is large and the
// plain product loses about |q|^2 ulp per step to cancellation.
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD operator+(DD x, DD y) {
    const DD s = two_sum(x.hi, y.hi);
    return quick_two_sum(s.hi, s.lo + x.lo + y.lo);
}

DD operator-(DD x) { return {-x.hi, -x.lo}; }

DD operator*(DD x, DD y) {
    const double p = x.hi * y.hi;
    const double e = std::fma(x.hi, y.hi, -p) + (x.hi * y.lo + x.lo * y.hi);
    return quick_two_sum(p, e);
}

struct DDc {
    DD re, im;
};

DDc operator+(const DDc& x, const DDc& y) { return {x.re + y.re, x.im + y.im}; }

DDc operator*(const DDc& x, const DDc& y) {
    return {x.re * y.re + -(x.im * y.im), x.re * y.im + x.im * y.re};
}

DDc widen(cplx z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }
cplx narrow(const DDc& z) { return {z.re.hi + z.re.lo, z.im.hi + z.im.lo}; }

struct DDMatrix {
    DDc m11, m12, m21, m22;
};

// Above this |q| the chain continues in double-double.
constexpr double kCompensateAbove = 32.0;

void step_compensated(DDMatrix& acc, double& log_scale, cplx e, cplx q, RenormPolicy policy) {
    const DDc ew = widen(e), ecw = widen(std::conj(e));
    const DDc a = ew * acc.m11, b = ew * acc.m12;
    const DDc c = ecw * acc.m21, d = ecw * acc.m22;
    const DDc qw = widen(q), mq = widen(-q);
    const DDc one_plus{two_sum(1.0, q.real()), {q.imag(), 0.0}};
    const DDc one_minus{two_sum(1.0, -q.real()), {-q.imag(), 0.0}};
    acc.m11 = one_plus * a + qw * c;
    acc.m12 = one_plus * b + qw * d;
    acc.m21 = mq * a + one_minus * c;
    acc.m22 = mq * b + one_minus * d;
    const double peak = std::max({std::abs(narrow(acc.m11)), std::abs(narrow(acc.m12)),
                                  std::abs(narrow(acc.m21)), std::abs(narrow(acc.m22))});
    if (peak <= policy.threshold && peak >= 1.0 / policy.threshold) return;
    if (peak == 0.0 || !std::isfinite(peak)) return;
    const DDc inv{{1.0 / peak, 0.0}, {}};
    for (DDc* z : {&acc.m11, &acc.m12, &acc.m21, &acc.m22}) *z = inv * *z;
    log_scale += std::log(peak);
}

}  // namespace

ScaledMatrix compose_array(const ArrayGeometry& geometry, double omega, RenormPolicy policy) {
    geometry.validate();
    const auto& emitters = geometry.emitters;
    const cplx q1 = emitter_ratio(emitters.front(), omega, 0);
    ScaledMatrix acc = emitter_transmission_matrix(q1);
    std::optional<DDMatrix> wide;
    if (std::abs(q1) > kCompensateAbove) {
        wide = DDMatrix{{two_sum(1.0, q1.real()), {q1.imag(), 0.0}}, widen(q1), widen(-q1),
                        {two_sum(1.0, -q1.real()), {-q1.imag(), 0.0}}};
    }
    for (std::size_t n = 1; n < emitters.size(); ++n) {
        const cplx e = std::polar(1.0, geometry.phases[n - 1]);
        const cplx q = emitter_ratio(emitters[n], omega, n);
        if (!wide && std::abs(q) > kCompensateAbove)
            wide = DDMatrix{widen(acc.m.m11), widen(acc.m.m12), widen(acc.m.m21), widen(acc.m.m22)};
        if (wide) {
            step_compensated(*wide, acc.log_scale, e, q, policy);
            continue;
        }
        // Left-multiply by P(phi_{n-1}) then T(q_n).
        const cplx ec = std::conj(e);
        const cplx a = e * acc.m.m11, b = e * acc.m.m12;
        const cplx c = ec * acc.m.m21, d = ec * acc.m.m22;
        acc.m.m11 = (1.0 + q) * a + q * c;
        acc.m.m12 = (1.0 + q) * b + q * d;
        acc.m.m21 = -q * a + (1.0 - q) * c;
        acc.m.m22 = -q * b + (1.0 - q) * d;
        renormalize(acc, policy);
    }
    if (wide) acc.m = {narrow(wide->m11), narrow(wide->m12), narrow(wide->m21), narrow(wide->m22)};
    return acc;
}

ArrayResponse array_response(const ScaledMatrix& s) {
    if (s.m.m22 == cplx(0.0)) throw DegenerateMatrix("transfer matrix element M22 vanishes");
    ArrayResponse out;
    out.t_n = std::exp(-s.log_scale) / s.m.m22;
    out.r_n = -s.m.m21 / s.m.m22;
    out.p_t = std::norm(out.t_n);
    out.arg_t = arg_wrapped(1.0 / s.m.m22);
    return out;
}

ArrayResponse array_response_from_params(double omega, const ArrayGeometry& geometry,
                                         RenormPolicy policy) {
    ArrayResponse out = array_response(compose_array(geometry, omega, policy));
    out.phase_shift = wrap_phase(out.arg_t - geometry.total_phase());
    return out;
}

}  // namespace wqed
