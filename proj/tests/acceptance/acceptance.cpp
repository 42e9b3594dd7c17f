// Acceptance suite: runs every criterion at its pinned tolerance and prints one PASS/FAIL line
// per criterion. Exit status is the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "oracle/mode_matching.hpp"
#include "wqed/csv.hpp"
#include "wqed/disorder.hpp"
#include "wqed/errors.hpp"
#include "wqed/periodic_gate.hpp"
#include "wqed/pulse.hpp"
#include "wqed/sweep.hpp"
#include "wqed/two_photon.hpp"

using namespace wqed;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

// 1. t1 - r1 = 1 within 2 ulp and lossless flux within 1e-12 over 1e6 random samples.
Outcome single_emitter_identities() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> exponent(-6.0, 6.0), sign(-1.0, 1.0);
    const double ulp = std::numeric_limits<double>::epsilon();
    double worst_identity = 0.0, worst_flux = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double delta = std::copysign(std::pow(10.0, exponent(rng)), sign(rng));
        const double gamma = std::pow(10.0, exponent(rng) / 2.0);
        const EmitterParams lossy{0.0, gamma, 1.0};
        const cplx d = transmission_coefficient_single(Detuning{delta}, lossy) -
                       reflection_coefficient_single(Detuning{delta}, lossy);
        worst_identity = std::max({worst_identity, std::abs(d.real() - 1.0) / ulp, std::abs(d.imag()) / ulp});
        const EmitterParams lossless{0.0, 0.0, 1.0};
        const cplx t = transmission_coefficient_single(Detuning{delta}, lossless);
        const cplx r = reflection_coefficient_single(Detuning{delta}, lossless);
        const cplx d0 = t - r;
        worst_identity = std::max({worst_identity, std::abs(d0.real() - 1.0) / ulp, std::abs(d0.imag()) / ulp});
        worst_flux = std::max(worst_flux, std::abs(std::norm(t) + std::norm(r) - 1.0));
    }
    const double elapsed = seconds_since(start);
    return {worst_identity <= 2.0 && worst_flux <= 1e-12 && elapsed < 1.0,
            "max |t1-r1-1| = " + fmt("%.1f", worst_identity) + " ulp, max flux error " +
                fmt("%.2e", worst_flux) + ", " + fmt("%.2f", elapsed) + " s (limit 1 s)"};
}

// 2. Transfer matrix against the mode-matching linear solve.
Outcome oracle_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_real_distribution<double> freq(-3.0, 3.0), loss(0.0, 1.0), phase(0.0, 2.0 * kPi),
        omega(-5.0, 5.0);
    double worst = 0.0;
    for (int s = 0; s < 500; ++s) {
        const int n = count(rng);
        ArrayGeometry g;
        std::vector<oracle::Emitter> em;
        for (int k = 0; k < n; ++k) {
            const EmitterParams e{freq(rng), loss(rng), 1.0};
            g.emitters.push_back(e);
            em.push_back({e.omega_e, e.gamma_loss, e.gamma_wg});
        }
        for (int k = 0; k + 1 < n; ++k) g.phases.push_back(phase(rng));
        const double w = omega(rng);
        const auto ref = oracle::solve(w, em, g.phases);
        const auto r = array_response(compose_array(g, w));
        worst = std::max({worst, std::abs(r.t_n - ref.t), std::abs(r.r_n - ref.r)});
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-8 && elapsed < 10.0,
            "max |dT|,|dR| = " + fmt("%.2e", worst) + " over 500 arrays, " + fmt("%.2f", elapsed) +
                " s (limit 10 s)"};
}

// 3. Unit transmission and closed-form phase on the deterministic curve for every even N <= 128.
Outcome deterministic_curve() {
    const auto start = Clock::now();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, kPi);
    double worst_t = 0.0, worst_phase = 0.0;
    for (int n = 2; n <= 128; n += 2) {
        int done = 0;
        while (done < 200) {
            const double phi = u(rng);
            if (std::abs(phi - kPi / 2.0) < 1e-3) continue;
            ++done;
            const OperatingPoint p{phi, deterministic_detuning(phi), n, deterministic_phase_shift(n, phi)};
            const auto res = verify_operating_point(p);
            worst_t = std::max(worst_t, res.transmission);
            worst_phase = std::max(worst_phase, res.phase);
        }
    }
    const double elapsed = seconds_since(start);
    return {worst_t <= 1e-10 && worst_phase <= 1e-9 && elapsed < 30.0,
            "max ||T|^2-1| = " + fmt("%.2e", worst_t) + ", max phase error " + fmt("%.2e", worst_phase) +
                ", " + fmt("%.2f", elapsed) + " s (limit 30 s)"};
}

// 4. N = 30 lossless: 29 unit-transmission maxima along fixed-phi slices. Near phi = 0 or pi and
// at a few slices in between, one branch runs past |D| = 20; the slices keep all 29 inside.
Outcome branch_count() {
    const std::vector<double> slices{kPi / 4.0, 1.0, 1.309, 1.5, 2.147};
    const SweepGrid line{{-20.0, 20.0}, {0.0, 1.0}, 200001, 2};
    std::string counts;
    bool ok = true;
    for (double phi : slices) {
        SweepGrid g = line;
        g.phi = {phi, phi + 1e-3};
        const auto field = sweep_response(g, 30, 0.0);
        const auto peaks = unit_transmission_peaks(field, 0);
        ok = ok && peaks.size() == 29;
        counts += (counts.empty() ? "" : ", ") + std::to_string(peaks.size()) + " at phi=" + fmt("%.4f", phi);
    }
    return {ok, "maxima above 1-1e-6: " + counts};
}

// 5. Full-coverage branches for N = 8 and N = 10.
Outcome full_coverage_branch() {
    const auto eight = find_coverage_branches(8);
    const auto ten = find_coverage_branches(10);
    bool found = false;
    std::string span = "none";
    for (const auto& b : ten) {
        const bool lo_ok = std::abs(b.delta_interval.lo - 0.4) <= 0.2 * 0.4;
        const bool hi_ok = std::abs(b.delta_interval.hi - 1.5) <= 0.2 * 1.5;
        if (lo_ok && hi_ok) {
            found = true;
            span = "[" + fmt("%.3f", b.delta_interval.lo) + ", " + fmt("%.3f", b.delta_interval.hi) + "]";
        }
    }
    return {!eight.empty() && found, std::to_string(eight.size()) + " branch(es) for N=8; N=10 branch D/Gamma in " + span};
}

// 6. N = 100, gamma = 0.18: loss deviations concentrated near resonance; phase preserved on the
// far coverage branch.
Outcome decoherence_map() {
    const SweepGrid g{{-20.0, 20.0}, {0.0, kPi}, 400, 400};
    const auto lossless = sweep_response(g, 100, 0.0);
    const auto lossy = sweep_response(g, 100, 0.18);
    const auto dev = deviation_map(lossy, lossless);
    double global = 0.0, far = 0.0, far_delta = 0.0, far_phi = 0.0;
    for (std::size_t j = 0; j < g.n_phi; ++j) {
        for (std::size_t i = 0; i < g.n_delta; ++i) {
            const auto& d = dev[g.index(i, j)];
            if (!d.valid) continue;
            const double a = std::abs(d.dp_t);
            global = std::max(global, a);
            if (std::abs(g.delta_at(i)) > 10.0 && a > far) {
                far = a;
                far_delta = g.delta_at(i);
                far_phi = g.phi_at(j);
            }
        }
    }
    // Farthest full-coverage branch from resonance.
    const auto branches = find_coverage_branches(100);
    const CoverageBranch* best = nullptr;
    for (const auto& b : branches) {
        const double dist = std::min(std::abs(b.delta_interval.lo), std::abs(b.delta_interval.hi));
        if (!best || dist > std::min(std::abs(best->delta_interval.lo), std::abs(best->delta_interval.hi))) best = &b;
    }
    if (!best) return {false, "no full-coverage branch for N=100"};
    double worst_phase = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double target = -kPi + (k + 0.5) * 2.0 * kPi / 64.0;
        const auto p = design_gate(target, *best);
        const auto clean = array_response_from_params(p.delta, ArrayGeometry::periodic(100, EmitterParams{}, p.phi));
        const auto noisy = array_response_from_params(
            p.delta, ArrayGeometry::periodic(100, EmitterParams{0.0, 0.18, 1.0}, p.phi));
        worst_phase = std::max(worst_phase, std::abs(wrap_phase(*noisy.phase_shift - *clean.phase_shift)));
    }
    const double ratio = far / global;
    return {ratio < 0.25 && worst_phase < 0.02 * kPi,
            "max |dp_t| for |D|>10: " + fmt("%.4f", far) + " (at D=" + fmt("%.2f", far_delta) + ", phi=" +
                fmt("%.3f", far_phi) + ") = " + fmt("%.1f", 100.0 * ratio) + "% of global max " +
                fmt("%.4f", global) + " (limit 25%); far branch D in [" + fmt("%.2f", best->delta_interval.lo) +
                ", " + fmt("%.2f", best->delta_interval.hi) + "] max phase deviation " +
                fmt("%.5f", worst_phase / kPi) + " pi (limit 0.02 pi)"};
}

// 7. Loss-area scaling in N and gamma over the loss window.
Outcome loss_scaling() {
    const auto start = Clock::now();
    const auto grid = methods_window(400, 400);
    const std::vector<std::size_t> ns{10, 20, 40, 80, 160};
    const std::vector<double> gammas{0.02, 0.04, 0.08, 0.12, 0.16, 0.2};
    const auto by_n = loss_scaling_in_n(ns, 0.18, grid);
    const auto by_gamma = loss_scaling_in_gamma(10, gammas, grid);
    const double elapsed = seconds_since(start);
    const bool ok = std::abs(by_n.fit.exponent - 0.67) <= 0.15 && std::abs(by_gamma.fit.exponent - 1.0) <= 0.2 &&
                    elapsed < 600.0;
    return {ok, "exponent in N " + fmt("%.4f", by_n.fit.exponent) + " (N=10..160, gamma=0.18), exponent in gamma " +
                    fmt("%.4f", by_gamma.fit.exponent) + " (N=10, gamma=0.02..0.2), " + fmt("%.1f", elapsed) +
                    " s (limit 600 s)"};
}

// 8. Position disorder flattens the spacing dependence; vanishing disorder recovers the
// periodic array.
Outcome position_disorder() {
    std::vector<double> means;
    for (int k = 0; k <= 20; ++k) {
        const double phi = k * kPi / 20.0;
        const auto g = ArrayGeometry::periodic(100, EmitterParams{}, phi);
        const DisorderSpec spec{DisorderKind::Position, phi, kPi / 2.0, 1000, 8, PhaseWeighting::Uniform};
        means.push_back(run_disorder_ensemble(g, spec, 10.0).mean_pt);
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double avg = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    const double variation = (*hi - *lo) / avg;

    double worst_sigmas = 0.0;
    for (double phi : {0.4, kPi / 4.0, 2.0}) {
        const auto g = ArrayGeometry::periodic(100, EmitterParams{}, phi);
        const double periodic = array_response_from_params(10.0, g).p_t;
        const DisorderSpec spec{DisorderKind::Position, phi, 1e-6, 1000, 8, PhaseWeighting::Uniform};
        const auto r = run_disorder_ensemble(g, spec, 10.0);
        worst_sigmas = std::max(worst_sigmas, std::abs(r.mean_pt - periodic) / r.std_error_pt);
    }
    return {variation < 0.05 && worst_sigmas < 3.0,
            "(max-min)/mean of mean p_t over 21 mean phases at D=10: " + fmt("%.2f", 100.0 * variation) +
                "% (limit 5%); sigma=1e-6 vs periodic: " + fmt("%.2f", worst_sigmas) + " standard errors (limit 3)"};
}

// 9. Frequency disorder pushes the dark-bright boundary outwards.
Outcome frequency_disorder() {
    const auto g = ArrayGeometry::periodic(100, EmitterParams{}, kPi / 4.0);
    std::vector<double> boundaries;
    std::string text;
    for (double sigma : {1.25, 2.5, 5.0, 10.0}) {
        const DisorderSpec spec{DisorderKind::Frequency, 0.0, sigma, 1000, 9, PhaseWeighting::Uniform};
        double prev_d = 0.0, prev_p = run_disorder_ensemble(g, spec, 0.0).mean_pt;
        double crossing = std::nan("");
        for (int k = 1; k <= 400; ++k) {
            const double d = 0.1 * k;
            const double p = run_disorder_ensemble(g, spec, d).mean_pt;
            if (prev_p < 0.5 && p >= 0.5) {
                crossing = prev_d + (0.5 - prev_p) * (d - prev_d) / (p - prev_p);
                break;
            }
            prev_d = d;
            prev_p = p;
        }
        boundaries.push_back(crossing);
        text += (text.empty() ? "" : ", ") + fmt("%.3g", sigma) + " -> " + fmt("%.2f", crossing);
    }
    bool ok = std::all_of(boundaries.begin(), boundaries.end(), [](double b) { return std::isfinite(b); });
    for (std::size_t k = 1; k < boundaries.size(); ++k) ok = ok && boundaries[k] > boundaries[k - 1];
    return {ok, "first D with mean p_t >= 0.5 at phi=pi/4 (sigma -> D): " + text};
}

// 10. Vectorial phase averaging across the branch cut.
Outcome vectorial_average() {
    const double eps = 0.05;
    const std::vector<double> shifts{kPi - eps, -(kPi - eps)}, weights{1.0, 1.0};
    const auto v = vectorial_phase_average(shifts, weights);
    const double algebraic = (shifts[0] + shifts[1]) / 2.0;
    const bool control_wrong = std::abs(wrap_phase(algebraic - kPi)) > 3.0;
    return {v.mean_shift == kPi && control_wrong,
            "vectorial mean " + fmt("%.17g", v.mean_shift) + " (exactly pi: " + (v.mean_shift == kPi ? "yes" : "no") +
                "); algebraic mean " + fmt("%.3g", algebraic) + " (negative control, off by pi)"};
}

// 11. Pulse results converge to the monochromatic response as the bandwidth shrinks.
Outcome pulse_convergence() {
    const double omega = 100.0;
    const auto at = [&](double phi) { return ArrayGeometry::periodic(4, EmitterParams{omega, 0.0, 1.0}, phi); };
    PulseOptions tight;
    tight.rel_tol = 1e-13;
    const double omega_c = omega + 2.0, phi0 = kPi / 4.0;
    const double mono = array_response_from_params(omega_c, at(phi0)).p_t;
    std::vector<ScalingSample> samples;
    for (double bw : {1e-1, 1e-2, 1e-3})
        samples.push_back({bw, std::abs(pulse_transmission_probability({omega_c, bw}, at(phi0), tight) - mono)});
    // Three points; fit_power_law needs four, so take the slope directly.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        const double x = std::log(s.x), y = std::log(s.a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double exponent = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);

    const SweepGrid window{{-5.0, 5.0}, {0.0, kPi}, 100, 100};
    double max_pt[2] = {0.0, 0.0}, max_shift[2] = {0.0, 0.0};
    const double bws[2] = {0.1, 0.01};
    for (int b = 0; b < 2; ++b) {
        for (std::size_t j = 0; j < window.n_phi; ++j) {
            const auto g = at(window.phi_at(j));
            for (std::size_t i = 0; i < window.n_delta; ++i) {
                const GaussianPulse p{omega + window.delta_at(i), bws[b]};
                const auto m = array_response_from_params(p.omega_c, g);
                max_pt[b] = std::max(max_pt[b], std::abs(pulse_transmission_probability(p, g) - m.p_t));
                try {
                    max_shift[b] = std::max(max_shift[b], std::abs(wrap_phase(pulse_phase_shift(p, g) - *m.phase_shift)));
                } catch (const ZeroResultant&) {
                }
            }
        }
    }
    const bool ok = std::abs(exponent - 2.0) <= 0.2 && max_pt[1] < max_pt[0] && max_shift[1] < max_shift[0];
    return {ok, "error exponent " + fmt("%.4f", exponent) + " (bw 1e-1..1e-3, D=2, phi=pi/4); max |dp_t| " +
                    fmt("%.4g", max_pt[0]) + " -> " + fmt("%.4g", max_pt[1]) + ", max |dphase| " +
                    fmt("%.4g", max_shift[0]) + " -> " + fmt("%.4g", max_shift[1]) + " for bw 0.1 -> 0.01"};
}

// 12. Two-photon inelastic density at omega_c = Omega + 2 Gamma.
Outcome two_photon_density() {
    const EmitterParams e{100.0, 0.0, 1.0};
    const std::size_t n = 2401;
    const double half = 300.0;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = half * (2.0 * static_cast<double>(i) - static_cast<double>(n - 1)) / static_cast<double>(n - 1);
    const double step = grid[1] - grid[0];
    const auto res = inelastic_density(102.0, 0.0, grid, e);
    std::vector<double> d;
    for (const auto& r : res) d.push_back(r.density);
    const double integral = trapezoid(grid, d);
    bool symmetric = true;
    for (std::size_t i = 0; i < n; ++i) symmetric = symmetric && d[i] == d[n - 1 - i];
    const std::size_t peak = std::max_element(d.begin(), d.end()) - d.begin();
    const double node = std::abs(grid[peak]);
    // Continuous maximum of the density around the peak node.
    auto neg = [&](double x) { return -std::norm(inelastic_amplitude({102.0, 0.0, x}, e)); };
    const double refined = boost::math::tools::brent_find_minima(neg, node - step, node + step, 40).first;
    const bool ok = std::abs(node - 4.0) <= step && std::abs(refined - 4.0) <= step &&
                    std::abs(integral - 1.0) <= 1e-8 && symmetric;
    return {ok, "peak node |d_out| = " + fmt("%.4g", node) + ", continuous peak " + fmt("%.5f", refined) +
                    " (grid step " + fmt("%.3g", step) + "), integral - 1 = " + fmt("%.2e", integral - 1.0) +
                    ", exactly symmetric: " + (symmetric ? "yes" : "no")};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(WQED_CLI_PATH) + " " + args + " >/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 13. Every command replayed from its manifest gives identical bytes at 1 and 4 threads.
Outcome reproducibility() {
    const fs::path dir = fs::temp_directory_path() / ("wqed_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"sweep", "--n_delta 120 --n_phi 90"},
        {"design-gate", "--n_emitters 30 --target_shift 3*pi/4"},
        {"disorder", "--kind position --n_emitters 40 --n_realizations 200 --n_delta 9 --n_phi 7 --seed 42"},
        {"disorder", "--kind frequency --sigma 2.5 --n_emitters 40 --n_realizations 200 --n_delta 9 --n_phi 7 --seed 7"},
        {"pulse", "--n_delta 24 --n_phi 16"},
        {"two-photon", ""},
        {"loss-scaling", "--n_delta 80 --n_phi 80 --n_values 10,20,40,80"},
    };
    bool ok = true;
    std::string failures;
    int index = 0;
    for (const auto& [command, args] : runs) {
        const std::string base = (dir / (command + std::to_string(index++) + ".csv")).string();
        const std::string replay = base + ".replay.csv";
        const int first = run_cli(command + " " + args + " --threads 1 --out " + base);
        const int second = run_cli(command + " --config " + base + ".manifest --threads 4 --out " + replay);
        bool same = first == 0 && second == 0 && slurp(base) == slurp(replay) && !slurp(base).empty();
        if (command == "loss-scaling") same = same && slurp(base + ".fit.csv") == slurp(replay + ".fit.csv");
        if (!same) {
            ok = false;
            failures += " " + command;
        }
    }
    fs::remove_all(dir);
    return {ok, ok ? "7 runs over 6 commands replayed byte-identically (1 vs 4 threads)"
                   : "mismatch or failure in:" + failures};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"single-emitter identities", single_emitter_identities},
        {"transfer matrix vs mode-matching oracle", oracle_equivalence},
        {"deterministic-transmission curve", deterministic_curve},
        {"unit-transmission branch count", branch_count},
        {"full-coverage branch", full_coverage_branch},
        {"decoherence map", decoherence_map},
        {"loss scaling", loss_scaling},
        {"position disorder", position_disorder},
        {"frequency disorder", frequency_disorder},
        {"vectorial averaging", vectorial_average},
        {"pulse convergence", pulse_convergence},
        {"two-photon density", two_photon_density},
        {"reproducibility", reproducibility},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
