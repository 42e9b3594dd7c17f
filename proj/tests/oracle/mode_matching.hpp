#pragma once

// Independent reference solver for tests: the single-photon field is written as right- and
// left-moving plane-wave amplitudes on both sides of every emitter and the matching conditions
// are solved as one dense linear system. Shares no code with the transfer-matrix engine.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

struct Emitter {
    double omega_e = 0.0;
    double gamma_loss = 0.0;
    double gamma_wg = 1.0;
};

struct Scattering {
    cd t;
    cd r;
};

inline Scattering single(double omega, const Emitter& e) {
    const cd denom(2.0 * (omega - e.omega_e), e.gamma_loss + e.gamma_wg);
    return {cd(2.0 * (omega - e.omega_e), e.gamma_loss) / denom, cd(0.0, -e.gamma_wg) / denom};
}

// Unknowns per emitter n: B_n (left-moving, leaving on its left) and C_n (right-moving,
// leaving on its right). Incoming amplitudes are A_1 = 1, A_{n+1} = C_n e^{i phi_n},
// D_n = B_{n+1} e^{i phi_n}, D_N = 0. Each emitter gives C = t A + r D and B = r A + t D.
// Returns T = C_N and R = B_1.
inline Scattering solve(double omega, const std::vector<Emitter>& emitters,
                        const std::vector<double>& phases) {
    const int n = static_cast<int>(emitters.size());
    const int dim = 2 * n;
    auto b_idx = [](int k) { return 2 * k; };
    auto c_idx = [](int k) { return 2 * k + 1; };
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    for (int k = 0; k < n; ++k) {
        const Scattering s = single(omega, emitters[k]);
        const int row_c = 2 * k, row_b = 2 * k + 1;
        a(row_c, c_idx(k)) += 1.0;
        a(row_b, b_idx(k)) += 1.0;
        // Incoming from the left.
        if (k == 0) {
            rhs(row_c) += s.t;
            rhs(row_b) += s.r;
        } else {
            const cd ph = std::polar(1.0, phases[k - 1]);
            a(row_c, c_idx(k - 1)) -= s.t * ph;
            a(row_b, c_idx(k - 1)) -= s.r * ph;
        }
        // Incoming from the right.
        if (k + 1 < n) {
            const cd ph = std::polar(1.0, phases[k]);
            a(row_c, b_idx(k + 1)) -= s.r * ph;
            a(row_b, b_idx(k + 1)) -= s.t * ph;
        }
    }
    const Eigen::VectorXcd x = a.fullPivLu().solve(rhs);
    return {x(c_idx(n - 1)), x(b_idx(0))};
}

}  // namespace oracle
