#include "wqed/two_photon.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

cplx reflection_at(double omega, const EmitterParams& p) {
    return reflection_coefficient_single(Detuning{omega - p.omega_e}, p);
}

}  // namespace

cplx elastic_coefficient(double omega_k1, double omega_k2, const EmitterParams& p) {
    return transmission_coefficient_single(Detuning{omega_k1 - p.omega_e}, p) *
           transmission_coefficient_single(Detuning{omega_k2 - p.omega_e}, p);
}

cplx inelastic_amplitude(const EnergyShellPoint& pt, const EmitterParams& p) {
    const cplx out_pair = reflection_at(pt.omega_c + 0.5 * pt.delta_out, p) *
                          reflection_at(pt.omega_c - 0.5 * pt.delta_out, p);
    const cplx in_sum = reflection_at(pt.omega_c + 0.5 * pt.delta_in, p) +
                        reflection_at(pt.omega_c - 0.5 * pt.delta_in, p);
    return (2.0 / (kPi * p.gamma_wg)) * out_pair * in_sum;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    std::vector<double> panels(x.size() > 1 ? x.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        panels[i] = 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return pairwise_sum<double>(panels);
}

std::vector<InelasticResult> inelastic_density(double omega_c, double delta_in,
                                               std::span<const double> grid,
                                               const EmitterParams& p) {
    p.validate();
    const std::size_t n = grid.size();
    if (n < 3) throw GridTooNarrow("delta_out grid needs at least 3 points");
    const double scale = std::max(std::abs(grid.front()), std::abs(grid.back()));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw GridTooNarrow("delta_out grid must be strictly increasing");
        if (std::abs(grid[i] + grid[n - 1 - i]) > 1e-12 * scale)
            throw GridTooNarrow("delta_out grid must be symmetric about 0");
    }

    std::vector<double> weight(n);
    std::vector<InelasticResult> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Product form makes the density exactly even in delta_out.
        const cplx a = inelastic_amplitude({omega_c, delta_in, grid[i]}, p);
        weight[i] = std::norm(a);
        out[i].delta_out = grid[i];
        out[i].phase = arg_wrapped(a);
    }
    const double peak = *std::max_element(weight.begin(), weight.end());
    if (!(peak > 0.0)) throw GridTooNarrow("inelastic amplitude vanishes on the grid");
    if (std::max(weight.front(), weight.back()) >= kInelasticTailFloor * peak)
        throw GridTooNarrow("delta_out grid does not resolve the tails of the density");
    const double norm = trapezoid(grid, weight);
    for (std::size_t i = 0; i < n; ++i) out[i].density = weight[i] / norm;
    return out;
}

}  // namespace wqed
