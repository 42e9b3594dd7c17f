#include "wqed/sweep.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

double lerp_node(const Range& r, std::size_t i, std::size_t n) {
    if (i + 1 == n) return r.max;
    return r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void require_same_grid(const SweepField& a, const SweepField& b) {
    if (!(a.grid == b.grid) || a.nodes.size() != b.nodes.size())
        throw GridMismatch("fields were computed on different grids");
}

double periodic_pt(std::size_t n, double gamma, double phi, double delta) {
    const auto g = ArrayGeometry::periodic(n, EmitterParams{0.0, gamma, 1.0}, phi);
    try {
        return array_response(compose_array(g, delta)).p_t;
    } catch (const SingularTransmission&) {
        return 0.0;  // a resonant lossless emitter reflects perfectly
    }
}

}  // namespace

void SweepGrid::validate() const {
    if (!(delta.min < delta.max)) throw ConfigError("delta range needs min < max");
    if (!(phi.min < phi.max)) throw ConfigError("phi range needs min < max");
    if (phi.min < 0.0) throw ConfigError("phi range must be >= 0");
    if (n_delta < 2 || n_phi < 2) throw ConfigError("grid resolution must be >= 2 on each axis");
}

double SweepGrid::delta_at(std::size_t i) const { return lerp_node(delta, i, n_delta); }
double SweepGrid::phi_at(std::size_t j) const { return lerp_node(phi, j, n_phi); }

SweepGrid methods_window(std::size_t n_delta, std::size_t n_phi) {
    return {{0.0, 20.0}, {0.0, kPi / 2.0}, n_delta, n_phi};
}

SweepField sweep_response(const SweepGrid& grid, std::size_t n, double gamma) {
    grid.validate();
    if (n < 1) throw ConfigError("n_emitters must be >= 1");
    const EmitterParams emitter{0.0, gamma, 1.0};
    emitter.validate();

    SweepField field{grid, n, gamma, std::vector<std::optional<ArrayResponse>>(grid.node_count())};
    const auto rows = static_cast<std::int64_t>(grid.n_phi);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t j = 0; j < rows; ++j) {
        const auto geometry = ArrayGeometry::periodic(n, emitter, grid.phi_at(j));
        for (std::size_t i = 0; i < grid.n_delta; ++i) {
            try {
                field.nodes[grid.index(i, j)] = array_response_from_params(grid.delta_at(i), geometry);
            } catch (const SingularTransmission&) {
                field.nodes[grid.index(i, j)].reset();
            }
        }
    }
    return field;
}

std::vector<NodeDeviation> deviation_map(const SweepField& a, const SweepField& b) {
    require_same_grid(a, b);
    std::vector<NodeDeviation> out(a.nodes.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!a.nodes[k] || !b.nodes[k]) continue;
        out[k] = {a.nodes[k]->p_t - b.nodes[k]->p_t,
                  wrap_phase(*a.nodes[k]->phase_shift - *b.nodes[k]->phase_shift), true};
    }
    return out;
}

double loss_area_ratio(const SweepField& lossless, const SweepField& lossy, double threshold) {
    require_same_grid(lossless, lossy);
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    std::size_t valid = 0, lossy_nodes = 0;
    for (std::size_t k = 0; k < lossless.nodes.size(); ++k) {
        if (!lossless.nodes[k] || !lossy.nodes[k]) continue;
        ++valid;
        if (lossless.nodes[k]->p_t - lossy.nodes[k]->p_t > threshold) ++lossy_nodes;
    }
    if (valid == 0) return 0.0;
    return static_cast<double>(lossy_nodes) / static_cast<double>(valid);
}

PowerLawFit fit_power_law(std::span<const ScalingSample> samples) {
    if (samples.size() < 4) throw ConfigError("power-law fit needs at least 4 samples");
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        if (!(s.x > 0.0 && s.a > 0.0))
            throw ConfigError("power-law fit needs positive abscissae and values");
        lx.push_back(std::log(s.x));
        ly.push_back(std::log(s.a));
    }
    const double count = static_cast<double>(samples.size());
    const double mx = pairwise_sum<double>(lx) / count;
    const double my = pairwise_sum<double>(ly) / count;
    std::vector<double> sxx(lx.size()), sxy(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx[i] = (lx[i] - mx) * (lx[i] - mx);
        sxy[i] = (lx[i] - mx) * (ly[i] - my);
    }
    const double vxx = pairwise_sum<double>(sxx);
    if (!(vxx > 0.0)) throw DegenerateFit("all abscissae are equal");
    PowerLawFit fit;
    fit.exponent = pairwise_sum<double>(sxy) / vxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    std::vector<double> res2(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        res2[i] = r * r;
    }
    fit.residual = std::sqrt(pairwise_sum<double>(res2) / count);
    return fit;
}

LossScalingReport loss_scaling_in_n(std::span<const std::size_t> ns, double gamma,
                                    const SweepGrid& grid, double threshold) {
    LossScalingReport report;
    std::vector<ScalingSample> fit_points;
    for (std::size_t n : ns) {
        const double a = loss_area_ratio(sweep_response(grid, n, 0.0), sweep_response(grid, n, gamma),
                                         threshold);
        report.samples.push_back({n, gamma, a});
        fit_points.push_back({static_cast<double>(n), a});
    }
    report.fit = fit_power_law(fit_points);
    return report;
}

LossScalingReport loss_scaling_in_gamma(std::size_t n, std::span<const double> gammas,
                                        const SweepGrid& grid, double threshold) {
    LossScalingReport report;
    std::vector<ScalingSample> fit_points;
    const SweepField lossless = sweep_response(grid, n, 0.0);
    for (double gamma : gammas) {
        const double a = loss_area_ratio(lossless, sweep_response(grid, n, gamma), threshold);
        report.samples.push_back({n, gamma, a});
        fit_points.push_back({gamma, a});
    }
    report.fit = fit_power_law(fit_points);
    return report;
}

std::vector<double> unit_transmission_peaks(const SweepField& field, std::size_t j_phi,
                                            double level) {
    const SweepGrid& g = field.grid;
    if (j_phi >= g.n_phi) throw ConfigError("phi row out of range");
    auto pt = [&](std::size_t i) {
        const auto& node = field.nodes[g.index(i, j_phi)];
        return node ? node->p_t : 0.0;
    };
    const double phi = g.phi_at(j_phi);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < g.n_delta; ++i) {
        if (!(pt(i) >= pt(i - 1) && pt(i) > pt(i + 1))) continue;
        auto negative_pt = [&](double delta) {
            return -periodic_pt(field.n_emitters, field.gamma, phi, delta);
        };
        const auto best = boost::math::tools::brent_find_minima(
            negative_pt, g.delta_at(i - 1), g.delta_at(i + 1), std::numeric_limits<double>::digits / 2);
        if (-best.second >= level) peaks.push_back(best.first);
    }
    return peaks;
}

}  // namespace wqed
