#include "wqed/disorder.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

constexpr int kMaxRedraws = 1'000'000;

std::mt19937_64 realization_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

struct Realization {
    double p_t = 0.0;
    double shift = 0.0;
    bool singular = false;
};

Realization run_one(const ArrayGeometry& base, const DisorderSpec& spec, double omega,
                    std::uint64_t index) {
    ArrayGeometry g = base;
    if (spec.kind == DisorderKind::Position) {
        g.phases = sample_position_phases(spec, base.phases.size(), index);
    } else {
        const auto freqs = sample_frequencies(spec, base.size(), index);
        for (std::size_t n = 0; n < g.emitters.size(); ++n) g.emitters[n].omega_e = freqs[n];
    }
    try {
        const ArrayResponse r = array_response_from_params(omega, g);
        return {r.p_t, *r.phase_shift, false};
    } catch (const SingularTransmission&) {
        return {0.0, 0.0, true};
    }
}

}  // namespace

void DisorderSpec::validate() const {
    if (!std::isfinite(mean)) throw ConfigError("disorder mean must be finite");
    if (!std::isfinite(sigma) || sigma < 0.0) throw ConfigError("disorder sigma must be >= 0");
    if (n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
}

std::vector<double> sample_position_phases(const DisorderSpec& spec, std::size_t n_gaps,
                                           std::uint64_t realization_index) {
    if (spec.kind != DisorderKind::Position)
        throw ConfigError("sample_position_phases needs a position-disorder spec");
    spec.validate();
    std::vector<double> out(n_gaps, spec.mean);
    if (spec.sigma == 0.0) {
        if (spec.mean < 0.0) throw ConfigError("mean phase must be >= 0 without disorder");
        return out;
    }
    auto rng = realization_stream(spec.seed, realization_index);
    std::normal_distribution<double> normal(spec.mean, spec.sigma);
    for (double& phi : out) {
        int tries = 0;
        do {
            if (++tries > kMaxRedraws)
                throw ConfigError("mean phase too negative: no nonnegative draw found");
            phi = normal(rng);
        } while (phi < 0.0);
    }
    return out;
}

std::vector<double> sample_frequencies(const DisorderSpec& spec, std::size_t n_emitters,
                                       std::uint64_t realization_index) {
    if (spec.kind != DisorderKind::Frequency)
        throw ConfigError("sample_frequencies needs a frequency-disorder spec");
    spec.validate();
    std::vector<double> out(n_emitters, spec.mean);
    if (spec.sigma == 0.0) return out;
    auto rng = realization_stream(spec.seed, realization_index);
    std::normal_distribution<double> normal(spec.mean, spec.sigma);
    for (double& w : out) w = normal(rng);
    return out;
}

PhaseAverage vectorial_phase_average(std::span<const double> shifts,
                                     std::span<const double> weights) {
    if (shifts.size() != weights.size() || shifts.empty())
        throw ConfigError("shifts and weights must be non-empty and of equal length");
    std::vector<cplx> phasors(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw ConfigError("phase weights must be >= 0");
        phasors[i] = weights[i] * std::polar(1.0, shifts[i]);
    }
    const double total = pairwise_sum<double>(weights);
    if (!(total > 0.0)) throw ConfigError("phase weights must have a positive sum");
    const cplx mean = pairwise_sum<cplx>(phasors) / total;
    const double length = std::abs(mean);
    if (!(length >= kZeroResultantFloor))
        throw ZeroResultant("phasors cancel; mean phase undefined (resultant " +
                            std::to_string(length) + ")");
    return {arg_wrapped(mean), std::min(length, 1.0)};
}

DisorderEnsembleResult run_disorder_ensemble(const ArrayGeometry& base_geometry,
                                             const DisorderSpec& spec, double omega) {
    spec.validate();
    base_geometry.validate();
    const auto n = static_cast<std::int64_t>(spec.n_realizations);
    std::vector<Realization> runs(spec.n_realizations);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t r = 0; r < n; ++r) {
        runs[r] = run_one(base_geometry, spec, omega, static_cast<std::uint64_t>(r));
    }

    std::vector<double> p_t, shifts;
    p_t.reserve(runs.size());
    shifts.reserve(runs.size());
    DisorderEnsembleResult out;
    for (const auto& run : runs) {
        if (run.singular) {
            ++out.n_singular;
            continue;
        }
        p_t.push_back(run.p_t);
        shifts.push_back(run.shift);
    }
    out.n_effective = p_t.size();
    if (out.n_effective == 0)
        throw AllRealizationsSingular("every realization hit a resonant lossless emitter");

    const double count = static_cast<double>(out.n_effective);
    out.mean_pt = pairwise_sum<double>(p_t) / count;
    if (out.n_effective > 1) {
        std::vector<double> sq(p_t.size());
        for (std::size_t i = 0; i < p_t.size(); ++i) sq[i] = (p_t[i] - out.mean_pt) * (p_t[i] - out.mean_pt);
        out.std_error_pt = std::sqrt(pairwise_sum<double>(sq) / (count - 1.0) / count);
    }

    std::vector<double> weights = spec.weighting == PhaseWeighting::Uniform
                                      ? std::vector<double>(p_t.size(), 1.0)
                                      : p_t;
    try {
        const PhaseAverage avg = vectorial_phase_average(shifts, weights);
        out.mean_shift = avg.mean_shift;
        out.resultant_length = avg.resultant_length;
    } catch (const ZeroResultant&) {
        out.mean_shift = std::numeric_limits<double>::quiet_NaN();
        out.resultant_length = 0.0;
    } catch (const ConfigError&) {
        // Transmission weighting with every realization fully dark.
        out.mean_shift = std::numeric_limits<double>::quiet_NaN();
        out.resultant_length = 0.0;
    }
    return out;
}

}  // namespace wqed
