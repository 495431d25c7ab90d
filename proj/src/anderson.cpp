#include "kr/anderson.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "kr/errors.hpp"
#include "kr/fitting.hpp"
#include "kr/rng.hpp"

namespace kr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<double> pseudo_disorder(double omega, double kbar, double beta_qm,
                                    std::span<const double> omegas, const LatticeBox& box) {
    const int d = static_cast<int>(box.range.size());
    if (d < 1) throw IncompatibleDimensions("pseudo_disorder: empty box");
    if (static_cast<std::size_t>(d - 1) != omegas.size())
        throw IncompatibleDimensions("pseudo_disorder: need d-1 drive frequencies");

    std::vector<double> out;
    out.reserve(box.size());
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = box.range[i].first;
    for (;;) {
        const double m1 = idx[0] + beta_qm;
        double v = 0.5 * omega - 0.25 * kbar * m1 * m1;
        for (int i = 1; i < d; ++i) v -= 0.5 * idx[i] * omegas[i - 1];
        out.push_back(std::tan(v));
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] > box.range[axis].second) {
            idx[axis] = box.range[axis].first;
            --axis;
        }
        if (axis < 0) break;
    }
    return out;
}

namespace {

// One doubling level of the periodic trapezoid rule; d=1 or 2.
std::vector<double> hopping_level(double kappa, double epsilon, int d, int r_max, int n) {
    std::vector<double> t;
    if (d == 1) {
        t.assign(r_max + 1, 0.0);
        for (int j = 0; j < n; ++j) {
            const double x = kTwoPi * j / n;
            const double w = std::tan(0.5 * kappa * std::cos(x));
            for (int r = 0; r <= r_max; ++r) t[r] += w * std::cos(r * x);
        }
        for (auto& v : t) v /= n;
    } else {
        const int nr2 = 2 * r_max + 1;
        t.assign(static_cast<std::size_t>(r_max + 1) * nr2, 0.0);
        std::vector<double> g(nr2);
        for (int j = 0; j < n; ++j) {
            const double x = kTwoPi * j / n;
            std::fill(g.begin(), g.end(), 0.0);
            for (int l = 0; l < n; ++l) {
                const double y = kTwoPi * l / n;
                const double w = std::tan(0.5 * kappa * std::cos(x) * (1.0 + epsilon * std::cos(y)));
                for (int r2 = -r_max; r2 <= r_max; ++r2) g[r2 + r_max] += w * std::cos(r2 * y);
            }
            for (int r1 = 0; r1 <= r_max; ++r1) {
                const double c = std::cos(r1 * x);
                for (int r2 = 0; r2 < nr2; ++r2) t[static_cast<std::size_t>(r1) * nr2 + r2] += c * g[r2];
            }
        }
        const double inv = 1.0 / (static_cast<double>(n) * n);
        for (auto& v : t) v *= inv;
    }
    return t;
}

}  // namespace

HoppingTable hopping_coefficients(double kappa, double epsilon, int d, int r_max, int n_quad,
                                  int sign) {
    if (d != 1 && d != 2) throw IncompatibleDimensions("hopping_coefficients: d must be 1 or 2");
    if (r_max < 0) throw OutOfRange("r_max", ">= 0");
    if (sign != 1 && sign != -1) throw OutOfRange("sign", "+1 or -1");
    const double reach = (d == 1) ? kappa : kappa * (1.0 + std::abs(epsilon));
    if (std::abs(reach) >= std::numbers::pi)
        throw PoleInDomain("hopping_coefficients: kick phase reaches a tan pole (|kappa|(1+|eps|) >= pi)");

    const int n_cap = (d == 1) ? (1 << 18) : 4096;
    int n = std::max(n_quad, 4 * (r_max + 1));
    std::vector<double> prev = hopping_level(kappa, epsilon, d, r_max, n);
    for (;;) {
        if (2 * n > n_cap)
            throw QuadratureNotConverged("hopping_coefficients: not below 1e-10 at n=" + std::to_string(n));
        n *= 2;
        std::vector<double> cur = hopping_level(kappa, epsilon, d, r_max, n);
        double delta = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) delta = std::max(delta, std::abs(cur[i] - prev[i]));
        prev = std::move(cur);
        if (delta < 1e-10) break;
    }
    if (sign == -1)
        for (auto& v : prev) v = -v;
    return HoppingTable{d, r_max, std::move(prev), sign};
}

EigenSystem solve_tight_binding(std::span<const double> onsite, const HoppingTable& hopping) {
    if (hopping.d != 1) throw IncompatibleDimensions("solve_tight_binding: 1D chains only");
    const auto n = static_cast<Eigen::Index>(onsite.size());
    if (n < 2) throw IncompatibleDimensions("solve_tight_binding: chain too short");
    if (hopping.r_max >= n) throw IncompatibleDimensions("solve_tight_binding: r_max >= chain length");

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = onsite[static_cast<std::size_t>(i)];
        for (int r = 1; r <= hopping.r_max && i + r < n; ++r) {
            h(i, i + r) = hopping.t[static_cast<std::size_t>(r)];
            h(i + r, i) = hopping.t[static_cast<std::size_t>(r)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw NotConverged("dense eigensolve failed");

    EigenSystem out;
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    out.vectors.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto col = es.eigenvectors().col(k);
        out.vectors[static_cast<std::size_t>(k)].assign(col.data(), col.data() + n);
    }
    return out;
}

double envelope_decay_rate(std::span<const double> y) {
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    if (n < 8) throw WindowTooNarrow("envelope: series too short");
    std::ptrdiff_t i0 = std::max_element(y.begin(), y.end()) - y.begin();
    const double peak = y[static_cast<std::size_t>(i0)];
    if (!(peak > 0.0)) throw WindowTooNarrow("envelope: empty peak");
    const double floor = peak * 1e-12;

    std::vector<double> xs, ls;
    for (int dir : {-1, +1}) {
        std::ptrdiff_t d_max = 0;
        for (std::ptrdiff_t i = i0 + dir; i >= 0 && i < n; i += dir) {
            if (y[static_cast<std::size_t>(i)] <= floor) break;
            d_max = std::abs(i - i0);
        }
        const double lo = 0.2 * d_max, hi = 0.8 * d_max;
        for (std::ptrdiff_t i = i0 + dir; i >= 0 && i < n; i += dir) {
            const double d = static_cast<double>(std::abs(i - i0));
            if (d > d_max) break;
            if (d < lo || d > hi) continue;
            xs.push_back(d);
            ls.push_back(std::log(y[static_cast<std::size_t>(i)]));
        }
    }
    if (xs.size() < 6) throw WindowTooNarrow("envelope: fewer than 6 points in fit window");
    const LinearFit f = linear_fit(xs, ls);
    if (!(f.slope < 0.0)) throw WindowTooNarrow("envelope: non-decaying");
    return -f.slope;
}

FloquetReport floquet_oracle(double K, double kbar, double beta_qm, int M_small) {
    using cd = std::complex<double>;
    if (M_small < 8) throw OutOfRange("M_small", ">= 8");
    const int N = 2 * M_small + 1;
    const double kappa = K / kbar;

    // One-period unitary in the momentum basis, built through the discrete
    // position grid so it is exactly unitary at any truncation.
    Eigen::MatrixXcd dft(N, N);  // momentum -> position
    for (int j = 0; j < N; ++j) {
        const double x = kTwoPi * j / N;
        for (int c = 0; c < N; ++c) {
            const int m = c - M_small;
            dft(j, c) = std::polar(1.0, m * x);
        }
    }
    Eigen::VectorXcd kick(N), free_ph(N);
    for (int j = 0; j < N; ++j)
        kick(j) = std::polar(1.0, -kappa * std::cos(kTwoPi * j / N));
    for (int c = 0; c < N; ++c) {
        const double m = c - M_small + beta_qm;
        free_ph(c) = std::polar(1.0, -0.5 * kbar * m * m);
    }
    Eigen::MatrixXcd u_mat = (dft.adjoint() * kick.asDiagonal() * dft) / static_cast<double>(N);
    u_mat = u_mat * free_ph.asDiagonal();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u_mat);
    if (es.info() != Eigen::Success) throw NotConverged("Floquet eigensolve failed");

    FloquetReport rep;
    rep.n_total = N;
    for (int k = 0; k < N; ++k)
        rep.unimodularity = std::max(rep.unimodularity, std::abs(std::abs(es.eigenvalues()(k)) - 1.0));

    const int r_max = 40;
    HoppingTable prose = hopping_coefficients(kappa, 0.0, 1, r_max, 1024, -1);
    rep.t0_abs = std::abs(prose.t[0]);

    const int edge = static_cast<int>(0.9 * M_small);
    const int win = M_small / 2;
    std::vector<double> res_prose, res_printed;
    for (int k = 0; k < N; ++k) {
        Eigen::VectorXcd psi = es.eigenvectors().col(k);
        double edge_w = 0.0;
        for (int c = 0; c < N; ++c)
            if (std::abs(c - M_small) > edge) edge_w += std::norm(psi(c));
        if (edge_w > 1e-8) continue;

        const double omega = -std::arg(es.eigenvalues()(k));
        Eigen::VectorXcd psix = dft * psi;
        for (int j = 0; j < N; ++j) {
            const double x = kTwoPi * j / N;
            psix(j) *= std::polar(1.0, -omega) / cd(1.0, -std::tan(0.5 * kappa * std::cos(x)));
        }
        Eigen::VectorXcd uv = (dft.adjoint() * psix) / static_cast<double>(N);

        double nrm2 = 0.0, sq_p = 0.0, sq_q = 0.0;
        for (int m = -win; m <= win; ++m) {
            const double mb = m + beta_qm;
            const double tv = std::tan(0.5 * omega - 0.25 * kbar * mb * mb);
            cd acc_p = tv * uv(m + M_small), acc_q = acc_p;
            for (int r = -r_max; r <= r_max; ++r) {
                const int mm = m + r;
                if (mm < -M_small || mm > M_small) continue;
                acc_p += prose.at(r) * uv(mm + M_small);
                acc_q -= prose.at(r) * uv(mm + M_small);  // printed sign
            }
            nrm2 += std::norm(uv(m + M_small));
            sq_p += std::norm(acc_p);
            sq_q += std::norm(acc_q);
        }
        if (!(nrm2 > 0.0)) continue;
        res_prose.push_back(std::sqrt(sq_p / nrm2));
        res_printed.push_back(std::sqrt(sq_q / nrm2));
    }
    if (res_prose.empty())
        throw TruncationDominates("floquet_oracle: every eigenstate leaks past 0.9M at M=" +
                                  std::to_string(M_small));
    rep.n_interior = static_cast<int>(res_prose.size());

    auto median = [](std::vector<double>& v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    rep.median_residual = median(res_prose);
    rep.median_residual_printed = median(res_printed);
    rep.chosen_sign = rep.median_residual <= rep.median_residual_printed ? -1 : +1;
    return rep;
}

XiEstimate transfer_matrix_xi(double W, double T, double energy, long n_sites, uint64_t seed) {
    if (!(T > 0.0)) throw OutOfRange("T", "> 0");
    if (n_sites < 1000) throw OutOfRange("n_sites", ">= 1000");
    if (W < 0.0) throw OutOfRange("W", ">= 0");
    if (W == 0.0) return XiEstimate{.xi = 0.0, .stderr_xi = 0.0, .gamma = 0.0, .infinite = true};

    Xoshiro256pp rng(seed);
    const int n_blocks = 16;
    const long block = n_sites / n_blocks;
    std::vector<double> gamma_b(n_blocks, 0.0);
    double u_prev = 0.0, u_cur = 1.0;
    for (int b = 0; b < n_blocks; ++b) {
        double log_sum = 0.0;
        for (long i = 0; i < block; ++i) {
            const double eps = W * (rng.uniform() - 0.5);
            const double u_next = ((energy - eps) / T) * u_cur - u_prev;
            u_prev = u_cur;
            u_cur = u_next;
            const double s = std::max(std::abs(u_prev), std::abs(u_cur));
            if (s > 1e100 || (s > 0.0 && s < 1e-100)) {
                u_prev /= s;
                u_cur /= s;
                log_sum += std::log(s);
            }
        }
        // flush the residual growth into this block
        const double s = std::max(std::abs(u_prev), std::abs(u_cur));
        if (s > 0.0) {
            u_prev /= s;
            u_cur /= s;
            log_sum += std::log(s);
        }
        gamma_b[b] = log_sum / static_cast<double>(block);
    }
    double mean = 0.0;
    for (double g : gamma_b) mean += g;
    mean /= n_blocks;
    double var = 0.0;
    for (double g : gamma_b) var += (g - mean) * (g - mean);
    var /= (n_blocks - 1);
    const double se = std::sqrt(var / n_blocks);
    if (!(mean > 0.0) || se / mean > 0.02) throw NotConverged("transfer matrix: gamma rel. error > 2%");
    return XiEstimate{.xi = 1.0 / mean, .stderr_xi = se / (mean * mean), .gamma = mean, .infinite = false};
}

}  // namespace kr
