#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wqed/transfer.hpp"

namespace wqed {

enum class DisorderKind { Position, Frequency };

// Weights p_c(r) of the vectorial phase average. Uniform is the plain Monte Carlo estimator;
// Transmission weights each realization by its |T_N|^2.
enum class PhaseWeighting { Uniform, Transmission };

struct DisorderSpec {
    DisorderKind kind = DisorderKind::Position;
    double mean = 0.0;   // mean phi (Position) or mean transition frequency (Frequency)
    double sigma = 0.0;  // standard deviation of the Gaussian before any truncation
    std::size_t n_realizations = 1000;
    std::uint64_t seed = 0;
    PhaseWeighting weighting = PhaseWeighting::Uniform;

    void validate() const;
};

struct PhaseAverage {
    double mean_shift = 0.0;        // (-pi, pi]
    double resultant_length = 0.0;  // [0, 1]
};

struct DisorderEnsembleResult {
    double mean_pt = 0.0;
    double std_error_pt = 0.0;  // sample standard deviation of p_t over sqrt(n_effective)
    double mean_shift = 0.0;    // NaN when the phasors cancel
    double resultant_length = 0.0;
    std::size_t n_effective = 0;
    std::size_t n_singular = 0;
};

// Normalized resultant below which the mean phase is reported as undefined.
inline constexpr double kZeroResultantFloor = 1e-12;

// Draws n_gaps phases from Normal(mean, sigma^2); negative draws are discarded and redrawn.
// The stream is a pure function of (seed, realization_index).
std::vector<double> sample_position_phases(const DisorderSpec& spec, std::size_t n_gaps,
                                           std::uint64_t realization_index);

// Draws n_emitters transition frequencies from Normal(mean, sigma^2), no truncation.
std::vector<double> sample_frequencies(const DisorderSpec& spec, std::size_t n_emitters,
                                       std::uint64_t realization_index);

// Arg and length of sum_r w_r exp(i shift_r) / sum_r w_r. Throws ZeroResultant when the
// normalized length is below kZeroResultantFloor.
PhaseAverage vectorial_phase_average(std::span<const double> shifts,
                                     std::span<const double> weights);

// Realizations run in parallel (OpenMP); results are bit-identical for any thread count.
// Position disorder replaces the phases of base_geometry; frequency disorder replaces the
// transition frequencies. Realizations with a resonant lossless emitter are skipped and
// counted. Throws AllRealizationsSingular when none survive.
DisorderEnsembleResult run_disorder_ensemble(const ArrayGeometry& base_geometry,
                                             const DisorderSpec& spec, double omega);

}  // namespace wqed
