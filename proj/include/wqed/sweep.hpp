#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wqed/transfer.hpp"

namespace wqed {

struct Range {
    double min = 0.0;
    double max = 0.0;

    bool operator==(const Range&) const = default;
};

// Rectangular node grid over (D/Gamma, phi), endpoints included.
struct SweepGrid {
    Range delta;
    Range phi;
    std::size_t n_delta = 2;
    std::size_t n_phi = 2;

    void validate() const;
    double delta_at(std::size_t i) const;
    double phi_at(std::size_t j) const;
    std::size_t node_count() const { return n_delta * n_phi; }
    // Row-major with phi as the outer (slow) index.
    std::size_t index(std::size_t i_delta, std::size_t j_phi) const { return j_phi * n_delta + i_delta; }

    bool operator==(const SweepGrid&) const = default;
};

// The loss-scaling window: D/Gamma in [0, 20], phi in [0, pi/2].
SweepGrid methods_window(std::size_t n_delta = 400, std::size_t n_phi = 400);

struct SweepField {
    SweepGrid grid;
    std::size_t n_emitters = 0;
    double gamma = 0.0;
    // Empty where a lossless emitter sits exactly on resonance.
    std::vector<std::optional<ArrayResponse>> nodes;
};

// Periodic array of n identical emitters (loss gamma) at every grid node. Nodes run in
// parallel; the field is identical for any thread count.
SweepField sweep_response(const SweepGrid& grid, std::size_t n, double gamma);

struct NodeDeviation {
    double dp_t = 0.0;     // a - b
    double dshift = 0.0;   // wrap(a - b)
    bool valid = false;    // false when either node is flagged
};

// Nodewise a - b. Throws GridMismatch.
std::vector<NodeDeviation> deviation_map(const SweepField& a, const SweepField& b);

// Fraction of valid nodes where p_t(lossless) - p_t(lossy) exceeds the threshold.
// Flagged nodes are left out of both counts. Throws GridMismatch.
double loss_area_ratio(const SweepField& lossless, const SweepField& lossy, double threshold = 0.1);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;  // RMS of the log-space residuals
};

struct ScalingSample {
    double x = 0.0;  // N or gamma
    double a = 0.0;
};

// Ordinary least squares of log a against log x. Needs >= 4 samples with a > 0 and x > 0;
// throws DegenerateFit when every x is equal.
PowerLawFit fit_power_law(std::span<const ScalingSample> samples);

struct LossSample {
    std::size_t n = 0;
    double gamma = 0.0;
    double a_gamma = 0.0;
};

struct LossScalingReport {
    std::vector<LossSample> samples;
    PowerLawFit fit;
};

// A_gamma(N) for each N at fixed gamma, fitted against N.
LossScalingReport loss_scaling_in_n(std::span<const std::size_t> ns, double gamma,
                                    const SweepGrid& grid, double threshold = 0.1);
// A_gamma(N) for each gamma at fixed N, fitted against gamma.
LossScalingReport loss_scaling_in_gamma(std::size_t n, std::span<const double> gammas,
                                        const SweepGrid& grid, double threshold = 0.1);

// Detunings of the local maxima of p_t along the phi row j_phi, each refined with Brent's
// method between its grid neighbours, keeping those whose refined p_t reaches `level`.
std::vector<double> unit_transmission_peaks(const SweepField& field, std::size_t j_phi,
                                            double level = 1.0 - 1e-6);

}  // namespace wqed
