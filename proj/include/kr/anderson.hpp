#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace kr {

// Inclusive index ranges per axis, row-major flattening (last axis fastest).
struct LatticeBox {
    std::vector<std::pair<int, int>> range;
    std::size_t size() const {
        std::size_t n = 1;
        for (auto [lo, hi] : range) n *= static_cast<std::size_t>(hi - lo + 1);
        return n;
    }
};

// On-site pseudo-disorder E_m = tan(omega/2 - (m1+beta)^2*kbar/4 - sum_i m_{i+1}*omega_i/2).
// Deterministic; tan poles are genuine heavy tails (Cauchy bulk).
std::vector<double> pseudo_disorder(double omega, double kbar, double beta_qm,
                                    std::span<const double> omegas, const LatticeBox& box);

// Hopping integrals t_r = sign * (1/2pi)^d int e^{i r.x} tan((kappa/2) cos x1 (1+eps cos x2..)) d^d x,
// computed by trapezoid-on-periodic quadrature with grid doubling until all
// coefficients move < 1e-10. The printed equation carries sign=+1; the prose
// definition (and the tight-binding derivation) needs sign=-1; the Floquet
// oracle resolves the flag empirically. d=1 or 2.
struct HoppingTable {
    int d = 1;
    int r_max = 0;
    std::vector<double> t;  // d=1: t[r], r=0..r_max; d=2: t[r1*(2*r_max+1) + (r2+r_max)], r1>=0
    int sign = -1;
    double at(int r) const { return t[r < 0 ? -r : r]; }  // d=1, even in r
};
HoppingTable hopping_coefficients(double kappa, double epsilon, int d, int r_max,
                                  int n_quad = 1024, int sign = -1);

// Dense symmetric eigensolve of the assembled 1D chain
// H[i][i] = onsite[i], H[i][i+r] = t_r (open boundary).
struct EigenSystem {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  // vectors[k][i]
};
EigenSystem solve_tight_binding(std::span<const double> onsite, const HoppingTable& hopping);

// Decay rate per site of an envelope: linear regression of log y over the
// central 60% of the decay range, peak excluded. |u|^2 envelopes decay at
// 2/xi (amplitude convention).
double envelope_decay_rate(std::span<const double> y);
inline double envelope_xi(std::span<const double> u2) { return 2.0 / envelope_decay_rate(u2); }

// Brute-force equivalence oracle for the FGP construction: diagonalizes the
// one-period unitary on the discrete (2M+1)-point grid (exactly unitary by
// construction), transforms each Floquet state with
// u = (1 + i tan(kappa cos x/2))^{-1} e^{-i omega} psi, and reports the
// residual of the tight-binding equation
// tan(v_m) u_m + sum_{r != 0} t_r u_{m+r} = -t_0 u_m with
// v_m = omega/2 - kbar (m+beta)^2 / 4.
struct FloquetReport {
    double unimodularity = 0.0;      // max | |lambda| - 1 |
    double median_residual = 0.0;    // chosen sign, interior-supported pairs
    double median_residual_printed = 0.0;  // sign=+1 variant
    int chosen_sign = 0;
    int n_interior = 0;              // pairs below the edge-weight gate
    int n_total = 0;
    double t0_abs = 0.0;
};
FloquetReport floquet_oracle(double K, double kbar, double beta_qm, int M_small);

// Lyapunov localization length of the 1D box-disorder chain
// E u_n = eps_n u_n + T (u_{n+1} + u_{n-1}), eps_n ~ U[-W/2, W/2].
struct XiEstimate {
    double xi = 0.0;
    double stderr_xi = 0.0;
    double gamma = 0.0;
    bool infinite = false;  // clean chain
};
XiEstimate transfer_matrix_xi(double W, double T, double energy, long n_sites, uint64_t seed);

}  // namespace kr
