#pragma once

// Semi-analytic modal oracle for weighted resolvent norms on product-type
// waveguides. Independent of the sparse solver path: per transverse mode the
// 1D Green's function is evaluated in closed form and the weighted block norm
// is taken by dense power iteration, so ||W R(z) W|| = max over modes.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace wsl_test {

using Complex = std::complex<double>;

inline Complex sqrt_upper(Complex w) {
    Complex s = std::sqrt(w);
    if (s.imag() < 0.0) s = -s;
    if (s.imag() == 0.0 && s.real() < 0.0) s = -s;
    return s;
}

struct ModalOracleConfig {
    double h = 0.05;          // x quadrature step (use the FD grid's h)
    double L = 40.0;          // truncation of the x integrals
    double delta = 1.0;       // weight exponent
    double x0 = 0.0;          // weight center (two-ended case)
    bool half_line = true;    // Dirichlet half-line vs full line kernel
    bool discrete_lambda = true; // transverse eigenvalues of the FD section
    int n_transverse = 0;     // FD nodes across the section (discrete_lambda)
    double width = 0.0;       // cross-section width
    int max_modes = 24;
};

// Half-line kernel with Dirichlet at 0: (e^{i tau |x-x'|} - e^{i tau (x+x')}) / (2 i tau).
// Full-line kernel: i e^{i tau |x-x'|} / (2 tau).
inline double modal_weighted_norm(Complex z, const ModalOracleConfig& cfg) {
    const int nx = static_cast<int>(std::round(cfg.L / cfg.h)) - 1;
    std::vector<double> xs(static_cast<std::size_t>(nx));
    std::vector<double> wgt(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        const double x = (i + 1) * cfg.h;
        xs[static_cast<std::size_t>(i)] = cfg.half_line ? x : x - cfg.L / 2.0;
        const double base = 1.0 + std::abs(xs[static_cast<std::size_t>(i)] - cfg.x0);
        wgt[static_cast<std::size_t>(i)] = std::pow(base, -0.5 * (3.0 + cfg.delta));
    }

    double best = 0.0;
    for (int j = 1; j <= cfg.max_modes; ++j) {
        double lam;
        if (cfg.discrete_lambda) {
            const double s = std::sin(0.5 * j * M_PI / (cfg.n_transverse + 1));
            lam = 4.0 / (cfg.h * cfg.h) * s * s;
        } else {
            lam = std::pow(j * M_PI / cfg.width, 2);
        }
        const Complex tau = sqrt_upper(z - lam);
        if (tau.imag() * 3.0 > 30.0 && j > 4) break; // deep evanescent tail

        Eigen::MatrixXcd M(nx, nx);
        for (int a = 0; a < nx; ++a) {
            for (int b = 0; b < nx; ++b) {
                const double xa = xs[static_cast<std::size_t>(a)];
                const double xb = xs[static_cast<std::size_t>(b)];
                Complex G;
                if (cfg.half_line) {
                    G = Complex(0, 1) *
                        (std::exp(Complex(0, 1) * tau * std::abs(xa - xb)) -
                         std::exp(Complex(0, 1) * tau * (xa + xb))) /
                        (2.0 * tau);
                } else {
                    G = Complex(0, 1) * std::exp(Complex(0, 1) * tau * std::abs(xa - xb)) /
                        (2.0 * tau);
                }
                M(a, b) = wgt[static_cast<std::size_t>(a)] * G * wgt[static_cast<std::size_t>(b)] *
                          cfg.h;
            }
        }
        // Dense power iteration on M^H M, deterministic seed.
        std::mt19937_64 rng(42);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXcd v(nx);
        for (int a = 0; a < nx; ++a) v[a] = Complex(gauss(rng), gauss(rng));
        v /= v.norm();
        double sigma = 0.0, prev = -1.0;
        for (int it = 0; it < 400; ++it) {
            Eigen::VectorXcd Mv = M * v;
            sigma = Mv.norm();
            v = M.adjoint() * Mv;
            const double nv = v.norm();
            if (nv == 0) break;
            v /= nv;
            if (prev > 0 && std::abs(sigma - prev) < 1e-6 * sigma) break;
            prev = sigma;
        }
        best = std::max(best, sigma);
    }
    return best;
}

// 1D Dirichlet half-line modal solution profile for a separable right-hand
// side f(x) phi_j(y): v(x) = int G_j(x, x') f(x') dx'.
inline std::vector<Complex> halfline_modal_solution(Complex z, double lam,
                                                    const std::vector<double>& xs,
                                                    const std::vector<double>& f, double h) {
    const Complex tau = sqrt_upper(z - lam);
    std::vector<Complex> v(xs.size(), Complex(0, 0));
    for (std::size_t a = 0; a < xs.size(); ++a) {
        Complex acc(0, 0);
        for (std::size_t b = 0; b < xs.size(); ++b) {
            const Complex G = Complex(0, 1) *
                              (std::exp(Complex(0, 1) * tau * std::abs(xs[a] - xs[b])) -
                               std::exp(Complex(0, 1) * tau * (xs[a] + xs[b]))) /
                              (2.0 * tau);
            acc += G * f[b] * h;
        }
        v[a] = acc;
    }
    return v;
}

} // namespace wsl_test
