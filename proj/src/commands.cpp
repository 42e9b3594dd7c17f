#include "wqed/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>

#include <omp.h>

#include "wqed/csv.hpp"
#include "wqed/disorder.hpp"
#include "wqed/errors.hpp"
#include "wqed/periodic_gate.hpp"
#include "wqed/pulse.hpp"
#include "wqed/sweep.hpp"
#include "wqed/two_photon.hpp"

namespace wqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepGrid grid_from(const RunConfig& cfg) {
    SweepGrid g{{cfg.get_real("delta_min"), cfg.get_real("delta_max")},
                {cfg.get_real("phi_min"), cfg.get_real("phi_max")},
                cfg.get_count("n_delta", 2),
                cfg.get_count("n_phi", 2)};
    g.validate();
    return g;
}

double nonnegative(const RunConfig& cfg, std::string_view key) {
    const double v = cfg.get_real(key);
    if (v < 0.0) throw ConfigError("'" + std::string(key) + "' must be >= 0");
    return v;
}

// Runs body(j) for every row in parallel and rethrows the first failure by row order.
template <typename Body>
void parallel_rows(std::size_t rows, Body body) {
    std::vector<std::exception_ptr> errors(rows);
    const auto count = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t j = 0; j < count; ++j) {
        try {
            body(static_cast<std::size_t>(j));
        } catch (...) {
            errors[j] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
    const SweepGrid grid = grid_from(cfg);
    const std::size_t n = cfg.get_count("n_emitters", 1);
    const double gamma = nonnegative(cfg, "gamma");
    const SweepField field = sweep_response(grid, n, gamma);

    CsvWriter csv({"delta_over_gamma", "phi", "p_t", "phase_shift", "phase_shift_over_pi",
                   "flux_deficit"});
    double max_pt = 0.0;
    std::size_t flagged = 0;
    for (std::size_t j = 0; j < grid.n_phi; ++j) {
        for (std::size_t i = 0; i < grid.n_delta; ++i) {
            const auto& node = field.nodes[grid.index(i, j)];
            if (node) {
                max_pt = std::max(max_pt, node->p_t);
                csv.row({grid.delta_at(i), grid.phi_at(j), node->p_t, *node->phase_shift,
                         *node->phase_shift / kPi, node->flux_deficit()});
            } else {
                // A resonant lossless emitter reflects everything; the phase is undefined.
                ++flagged;
                csv.row({grid.delta_at(i), grid.phi_at(j), 0.0, kNaN, kNaN, 0.0});
            }
        }
    }
    return {csv.str(),
            {{"max_p_t", format_real(max_pt)}, {"flagged_nodes", std::to_string(flagged)}},
            {}};
}

CommandOutput cmd_design_gate(const RunConfig& cfg) {
    const std::int64_t n64 = cfg.get_int("n_emitters");
    if (n64 < 2 || n64 > 1'000'000) throw ConfigError("'n_emitters' must lie in [2, 1000000]");
    const int n = static_cast<int>(n64);
    if (n % 2 != 0) throw OddEmitterCount("'n_emitters' must be even, got " + std::to_string(n));
    const double target = cfg.get_real("target_shift");
    if (!(target > -kPi && target <= kPi)) throw ConfigError("'target_shift' must lie in (-pi, pi]");
    const double delta_max = cfg.get_real("delta_max");
    if (!(delta_max > 0.0)) throw ConfigError("'delta_max' must be > 0");

    std::vector<int> full;
    for (const auto& b : find_coverage_branches(n, delta_max)) full.push_back(b.branch_index);

    CsvWriter csv({"branch_index", "phi", "delta_over_gamma", "predicted_shift",
                   "predicted_shift_over_pi", "transmission_residual", "phase_residual",
                   "full_coverage", "crosses_zero_detuning"});
    std::optional<OperatingPoint> first_full;
    for (int m = -n; m <= n; ++m) {
        OperatingPoint p;
        try {
            p = design_gate(target, n, m);
        } catch (const TargetOutsideBranch&) {
            continue;
        } catch (const NearSingularPhase&) {
            continue;
        }
        const OperatingResiduals res = verify_operating_point(p);
        const Interval phi_range = branch_phi_interval(n, m);
        const bool crosses_zero = phi_range.contains(0.0) || phi_range.contains(kPi);
        const bool is_full = std::find(full.begin(), full.end(), m) != full.end();
        if (is_full && !first_full) first_full = p;
        csv.row({m, p.phi, p.delta, p.predicted_shift, p.predicted_shift / kPi, res.transmission,
                 res.phase, is_full, crosses_zero});
    }
    if (csv.row_count() == 0) throw NoValidBranch("no branch realizes the target shift");

    CommandOutput out{csv.str(), {{"solutions", std::to_string(csv.row_count())},
                                  {"full_coverage_branches", std::to_string(full.size())}},
                      {}};
    if (first_full) {
        out.derived.emplace_back("operating_point.phi", format_real(first_full->phi));
        out.derived.emplace_back("operating_point.delta_over_gamma", format_real(first_full->delta));
    }
    return out;
}

CommandOutput cmd_disorder(const RunConfig& cfg) {
    const SweepGrid grid = grid_from(cfg);
    const std::size_t n = cfg.get_count("n_emitters", 1);
    const double gamma = nonnegative(cfg, "gamma");
    DisorderSpec spec;
    spec.kind = cfg.get_choice("kind", {"position", "frequency"}) == "position"
                    ? DisorderKind::Position
                    : DisorderKind::Frequency;
    spec.sigma = cfg.get_real("sigma");
    spec.n_realizations = cfg.get_count("n_realizations", 1);
    spec.seed = cfg.get_u64("seed");
    spec.weighting = cfg.get_choice("weighting", {"uniform", "transmission"}) == "uniform"
                         ? PhaseWeighting::Uniform
                         : PhaseWeighting::Transmission;
    spec.validate();
    const EmitterParams emitter{0.0, gamma, 1.0};
    emitter.validate();

    const bool position = spec.kind == DisorderKind::Position;
    CsvWriter csv({position ? "delta_over_gamma" : "mean_delta", "phi_mean", "mean_pt",
                   "std_error_pt", "mean_shift", "mean_shift_over_pi", "resultant_length",
                   "n_effective"});
    std::size_t empty_nodes = 0;
    for (std::size_t j = 0; j < grid.n_phi; ++j) {
        const double phi = grid.phi_at(j);
        const auto geometry = ArrayGeometry::periodic(n, emitter, phi);
        DisorderSpec node_spec = spec;
        node_spec.mean = position ? phi : 0.0;
        for (std::size_t i = 0; i < grid.n_delta; ++i) {
            const double delta = grid.delta_at(i);
            try {
                const auto r = run_disorder_ensemble(geometry, node_spec, delta);
                csv.row({delta, phi, r.mean_pt, r.std_error_pt, r.mean_shift, r.mean_shift / kPi,
                         r.resultant_length, r.n_effective});
            } catch (const AllRealizationsSingular&) {
                ++empty_nodes;
                csv.row({delta, phi, 0.0, 0.0, kNaN, kNaN, 0.0, std::size_t{0}});
            }
        }
    }
    return {csv.str(), {{"empty_nodes", std::to_string(empty_nodes)}}, {}};
}

CommandOutput cmd_pulse(const RunConfig& cfg) {
    const SweepGrid grid = grid_from(cfg);
    const std::size_t n = cfg.get_count("n_emitters", 1);
    const double gamma = nonnegative(cfg, "gamma");
    const double omega_e = cfg.get_real("omega_e");
    const double bandwidth = cfg.get_real("bandwidth");
    if (!(bandwidth > 0.0)) throw ConfigError("'bandwidth' must be > 0");
    PulseOptions options;
    options.scheme = cfg.get_choice("scheme", {"adaptive", "gauss-hermite"}) == "adaptive"
                         ? QuadratureScheme::Adaptive
                         : QuadratureScheme::GaussHermite;
    options.free_propagation_reference = cfg.get_bool("reference");
    options.transmission_weighted_phase =
        cfg.get_choice("phase_weighting", {"cubic", "plain"}) == "cubic";
    const EmitterParams emitter{omega_e, gamma, 1.0};
    emitter.validate();
    if (!(omega_e + grid.delta.min - kPulseWindow * bandwidth > 0.0))
        throw ConfigError("'omega_e' must exceed the pulse window so every frequency is positive");

    struct Node {
        double pulse_pt, pulse_shift, mono_pt, mono_shift;
    };
    std::vector<Node> nodes(grid.node_count());
    parallel_rows(grid.n_phi, [&](std::size_t j) {
        const auto geometry = ArrayGeometry::periodic(n, emitter, grid.phi_at(j));
        for (std::size_t i = 0; i < grid.n_delta; ++i) {
            const GaussianPulse pulse{omega_e + grid.delta_at(i), bandwidth};
            Node& node = nodes[grid.index(i, j)];
            node.pulse_pt = pulse_transmission_probability(pulse, geometry, options);
            try {
                node.pulse_shift = pulse_phase_shift(pulse, geometry, options);
            } catch (const ZeroResultant&) {
                node.pulse_shift = kNaN;
            }
            try {
                const ArrayResponse mono = array_response_from_params(pulse.omega_c, geometry);
                node.mono_pt = mono.p_t;
                node.mono_shift = *mono.phase_shift;
            } catch (const SingularTransmission&) {
                node.mono_pt = 0.0;
                node.mono_shift = kNaN;
            }
        }
    });

    CsvWriter csv({"omega_c_detuning", "phi", "pulse_pt", "pulse_shift", "mono_pt", "mono_shift",
                   "dp_t", "dshift"});
    double max_dpt = 0.0;
    for (std::size_t j = 0; j < grid.n_phi; ++j) {
        for (std::size_t i = 0; i < grid.n_delta; ++i) {
            const Node& v = nodes[grid.index(i, j)];
            const double dpt = v.pulse_pt - v.mono_pt;
            max_dpt = std::max(max_dpt, std::abs(dpt));
            csv.row({grid.delta_at(i), grid.phi_at(j), v.pulse_pt, v.pulse_shift, v.mono_pt,
                     v.mono_shift, dpt, wrap_phase(v.pulse_shift - v.mono_shift)});
        }
    }
    return {csv.str(), {{"max_abs_dp_t", format_real(max_dpt)}}, {}};
}

// Exactly antisymmetric grid over [-half, half].
std::vector<double> symmetric_grid(double half, std::size_t count) {
    std::vector<double> g(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double k = 2.0 * static_cast<double>(i) - denom;
        g[i] = half * k / denom;
    }
    return g;
}

CommandOutput cmd_two_photon(const RunConfig& cfg) {
    const double omega_e = cfg.get_real("omega_e");
    const double gamma = nonnegative(cfg, "gamma");
    const EmitterParams emitter{omega_e, gamma, 1.0};
    emitter.validate();
    const double omega_c = omega_e + cfg.get_real("omega_c_offset");
    const double delta_in = cfg.get_real("delta_in");
    const double half = cfg.get_real("delta_out_half_width");
    if (!(half > 0.0)) throw ConfigError("'delta_out_half_width' must be > 0");
    const std::size_t count = cfg.get_count("n_delta_out", 3);

    const auto grid = symmetric_grid(half, count);
    const auto result = inelastic_density(omega_c, delta_in, grid, emitter);

    CsvWriter csv({"delta_out", "density", "phase", "phase_over_pi"});
    std::vector<double> density(count);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& r = result[i];
        csv.row({r.delta_out, r.density, r.phase, r.phase / kPi});
        density[i] = r.density;
        if (r.density > result[peak].density) peak = i;
    }
    return {csv.str(),
            {{"omega_c", format_real(omega_c)},
             {"delta_in", format_real(delta_in)},
             {"peak_delta_out", format_real(std::abs(result[peak].delta_out))},
             {"integral", format_real(trapezoid(grid, density))}},
            {}};
}

CommandOutput cmd_loss_scaling(const RunConfig& cfg) {
    const SweepGrid grid = grid_from(cfg);
    const auto ns = cfg.get_count_list("n_values");
    const double gamma = nonnegative(cfg, "gamma");
    const std::size_t n_fixed = cfg.get_count("n_fixed", 1);
    const auto gammas = cfg.get_real_list("gamma_values");
    for (double g : gammas)
        if (!(g > 0.0)) throw ConfigError("'gamma_values' must all be > 0");
    const double threshold = cfg.get_real("threshold");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("'threshold' must lie in (0, 1)");
    if (ns.size() < 4 || gammas.size() < 4)
        throw ConfigError("'n_values' and 'gamma_values' need at least 4 entries each");

    const auto by_n = loss_scaling_in_n(ns, gamma, grid, threshold);
    const auto by_gamma = loss_scaling_in_gamma(n_fixed, gammas, grid, threshold);

    CsvWriter csv({"series", "n", "gamma", "a_gamma"});
    for (const auto& s : by_n.samples) csv.row({"n", s.n, s.gamma, s.a_gamma});
    for (const auto& s : by_gamma.samples) csv.row({"gamma", s.n, s.gamma, s.a_gamma});

    CsvWriter fit({"series", "exponent", "prefactor", "residual", "n_points"});
    fit.row({"n", by_n.fit.exponent, by_n.fit.prefactor, by_n.fit.residual, by_n.samples.size()});
    fit.row({"gamma", by_gamma.fit.exponent, by_gamma.fit.prefactor, by_gamma.fit.residual,
             by_gamma.samples.size()});
    return {csv.str(),
            {{"exponent_n", format_real(by_n.fit.exponent)},
             {"exponent_gamma", format_real(by_gamma.fit.exponent)}},
            {{".fit.csv", fit.str()}}};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << text;
    if (!out.flush()) throw ConfigError("failed writing " + path);
}

}  // namespace

CommandOutput run_command(const RunConfig& cfg) {
    const std::size_t threads = cfg.get_count("threads");
    if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
    const std::string& c = cfg.command();
    if (c == "sweep") return cmd_sweep(cfg);
    if (c == "design-gate") return cmd_design_gate(cfg);
    if (c == "disorder") return cmd_disorder(cfg);
    if (c == "pulse") return cmd_pulse(cfg);
    if (c == "two-photon") return cmd_two_photon(cfg);
    if (c == "loss-scaling") return cmd_loss_scaling(cfg);
    throw ConfigError("unknown command '" + c + "'");
}

std::string manifest_text(const RunConfig& cfg, const CommandOutput& output,
                          std::string_view timestamp) {
    std::string text = "# wqed run manifest; replay with: wqed " + cfg.command() +
                       " --config <this file>\n";
    text += "# version = " + std::string(kVersion) + "\n";
    text += "# timestamp = " + std::string(timestamp) + "\n";
    for (const auto& [key, value] : output.derived) text += "# derived." + key + " = " + value + "\n";
    for (const auto& [key, value] : cfg.values()) text += key + " = " + value + "\n";
    return text;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> write_outputs(const RunConfig& cfg, const CommandOutput& output) {
    const std::string& out = cfg.get_string("out");
    if (out.empty()) throw ConfigError("'out' must not be empty");
    std::vector<std::string> written;
    write_file(out, output.csv);
    written.push_back(out);
    for (const auto& [suffix, text] : output.extra_files) {
        write_file(out + suffix, text);
        written.push_back(out + suffix);
    }
    write_file(out + ".manifest", manifest_text(cfg, output, utc_timestamp()));
    written.push_back(out + ".manifest");
    return written;
}

}  // namespace wqed
