#include "wqed/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wqed/csv.hpp"
#include "wqed/errors.hpp"

namespace wqed {

namespace {

constexpr double kAbsTol = 1e-15;
constexpr std::size_t kMaxKronrodPanels = 4000;
constexpr int kFirstHermiteOrder = 32;
constexpr int kMaxHermiteOrder = 512;

double magnitude(double v) { return std::abs(v); }
double magnitude(cplx v) { return std::abs(v); }

// Rules for orders 32, 64, ..., 512, built once.
const GaussHermiteRule& cached_hermite_rule(int order) {
    static const std::vector<GaussHermiteRule> rules = [] {
        std::vector<GaussHermiteRule> out;
        for (int n = kFirstHermiteOrder; n <= kMaxHermiteOrder; n *= 2)
            out.push_back(gauss_hermite_rule(n));
        return out;
    }();
    std::size_t slot = 0;
    for (int n = kFirstHermiteOrder; n < order; n *= 2) ++slot;
    return rules.at(slot);
}

// T_N at omega with delays fixed at their omega_c values; zero on an exact resonance of a
// lossless emitter, which is the limit from either side.
cplx transmission_at(const ArrayGeometry& at_center, const GaussianPulse& pulse, double omega) {
    try {
        return array_response(compose_array(geometry_at(at_center, pulse, omega), omega)).t_n;
    } catch (const SingularTransmission&) {
        return {};
    }
}

// Globally adaptive Gauss-Kronrod: bisect the panel with the largest error estimate until the
// summed estimate meets the tolerance. Panels narrower than min_width are not split further;
// their abscissae are too close for the integrand to be resolved in double precision.
template <typename V, typename G>
V adaptive_kronrod(G& g, double a, double b, double rel_tol, double min_width) {
    struct Panel {
        double lo, hi;
        V value;
        double error;
    };
    auto evaluate = [&](double lo, double hi) {
        double error = 0.0;
        const V value =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, lo, hi, 0, 0.0, &error);
        // Boost reports the estimate for the panel mapped onto [-1, 1]; rescale it.
        return Panel{lo, hi, value, error * 0.5 * (hi - lo)};
    };
    std::vector<Panel> panels{evaluate(a, b)};
    std::vector<V> values;
    std::vector<double> errors;
    while (true) {
        std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.lo < q.lo; });
        values.clear();
        errors.clear();
        for (const auto& p : panels) {
            values.push_back(p.value);
            errors.push_back(p.error);
        }
        const V total = pairwise_sum<V>(values);
        const double error = pairwise_sum<double>(errors);
        if (error <= rel_tol * magnitude(total) + kAbsTol) return total;
        if (panels.size() >= kMaxKronrodPanels)
            throw QuadratureNotConverged("adaptive quadrature error estimate " + format_real(error) +
                                         " exceeds tolerance for an integral of size " +
                                         format_real(magnitude(total)) + " after " +
                                         std::to_string(kMaxKronrodPanels) + " panels");
        auto worst = panels.end();
        for (auto it = panels.begin(); it != panels.end(); ++it)
            if (it->hi - it->lo > min_width && (worst == panels.end() || it->error > worst->error))
                worst = it;
        if (worst == panels.end())
            throw QuadratureNotConverged("adaptive quadrature error estimate " + format_real(error) +
                                         " exceeds tolerance and no panel can be refined");
        const double lo = worst->lo, hi = worst->hi, mid = 0.5 * (lo + hi);
        *worst = evaluate(lo, mid);
        panels.push_back(evaluate(mid, hi));
    }
}

// Integral of f(w) |psi0(w)|^2 dw, i.e. E[f(wc + bw X)] for standard normal X.
template <typename V, typename F>
V integrate_against_pulse(const GaussianPulse& pulse, F&& f, const PulseOptions& options) {
    if (options.scheme == QuadratureScheme::GaussHermite) {
        // wc + sqrt(2) bw x maps |psi0|^2 dw onto exp(-x^2) dx / sqrt(pi).
        V previous{};
        for (int order = kFirstHermiteOrder; order <= kMaxHermiteOrder; order *= 2) {
            const GaussHermiteRule& rule = cached_hermite_rule(order);
            std::vector<V> terms(rule.nodes.size());
            for (std::size_t i = 0; i < terms.size(); ++i)
                terms[i] = rule.weights[i] *
                           f(pulse.omega_c + std::sqrt(2.0) * pulse.bandwidth * rule.nodes[i]);
            const V current = pairwise_sum<V>(terms) / std::sqrt(kPi);
            if (order > kFirstHermiteOrder &&
                magnitude(current - previous) <= options.rel_tol * magnitude(current) + kAbsTol)
                return current;
            previous = current;
        }
        throw QuadratureNotConverged("Gauss-Hermite rule did not converge up to order " +
                                     std::to_string(kMaxHermiteOrder));
    }

    auto integrand = [&](double x) -> V {
        const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
        return f(pulse.omega_c + pulse.bandwidth * x) * density;
    };
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(pulse.omega_c)) / pulse.bandwidth;
    return adaptive_kronrod<V>(integrand, -kPulseWindow, kPulseWindow, options.rel_tol, min_width);
}

}  // namespace

void GaussianPulse::validate() const {
    if (!std::isfinite(omega_c) || omega_c <= 0.0)
        throw ConfigError("pulse central frequency must be finite and > 0");
    if (!std::isfinite(bandwidth) || bandwidth <= 0.0)
        throw ConfigError("pulse bandwidth must be finite and > 0");
}

double pulse_amplitude(double omega, const GaussianPulse& pulse) {
    const double bw = pulse.bandwidth;
    const double x = omega - pulse.omega_c;
    return std::pow(2.0 * kPi * bw * bw, -0.25) * std::exp(-x * x / (4.0 * bw * bw));
}

ArrayGeometry geometry_at(const ArrayGeometry& at_center, const GaussianPulse& pulse,
                          double omega) {
    ArrayGeometry g = at_center;
    const double scale = omega / pulse.omega_c;
    for (double& phi : g.phases) phi *= scale;
    return g;
}

cplx scattered_pulse_amplitude(double omega_k, const GaussianPulse& pulse,
                               const ArrayGeometry& geometry) {
    pulse.validate();
    return transmission_at(geometry, pulse, omega_k) * pulse_amplitude(omega_k, pulse);
}

double pulse_transmission_probability(const GaussianPulse& pulse, const ArrayGeometry& geometry,
                                      const PulseOptions& options) {
    pulse.validate();
    geometry.validate();
    auto f = [&](double omega) { return std::norm(transmission_at(geometry, pulse, omega)); };
    return std::clamp(integrate_against_pulse<double>(pulse, f, options), 0.0, 1.0);
}

double pulse_phase_shift(const GaussianPulse& pulse, const ArrayGeometry& geometry,
                         const PulseOptions& options) {
    pulse.validate();
    geometry.validate();
    const double delay_phase_per_omega = geometry.total_phase() / pulse.omega_c;
    auto f = [&](double omega) {
        const cplx t = transmission_at(geometry, pulse, omega);
        cplx v = options.transmission_weighted_phase ? t * std::norm(t) : t;
        if (options.free_propagation_reference)
            v *= std::polar(1.0, -omega * delay_phase_per_omega);
        return v;
    };
    const cplx integral = integrate_against_pulse<cplx>(pulse, f, options);
    if (!(std::abs(integral) > 1e-300))
        throw ZeroResultant("pulse phase integral vanishes");
    return arg_wrapped(integral);
}

GaussHermiteRule gauss_hermite_rule(int n) {
    if (n < 1) throw ConfigError("Gauss-Hermite order must be >= 1");
    constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
    constexpr double kEps = 1e-15;
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        double pp = 0.0, p_prev = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Hermite functions (orthonormal polynomials times exp(-z^2/2)) stay finite for
            // large z where the bare polynomials overflow.
            double p1 = kPiM4 * std::exp(-0.5 * z * z), p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2 - z * p1;
            p_prev = p2;
            const double z_prev = z;
            z = z_prev - p1 / pp;
            if (std::abs(z - z_prev) <= kEps * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        // 1 / (n p_{n-1}(z)^2) for the bare polynomial, in log form to avoid overflow.
        w[i] = w[n - 1 - i] = std::exp(-z * z - 2.0 * std::log(std::abs(p_prev))) / n;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    GaussHermiteRule rule;
    for (auto i : order) {
        rule.nodes.push_back(x[i]);
        rule.weights.push_back(w[i]);
    }
    return rule;
}

}  // namespace wqed
