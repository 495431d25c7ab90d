#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace kr {

// Log-derivative beta(t) = d ln<p^2> / d ln t over centered sliding windows
// (window_decades wide, >= 5 samples, window fully inside the data range).
struct BetaSeries {
    std::vector<double> t;
    std::vector<double> beta;
};
BetaSeries beta_transport(std::span<const double> times, std::span<const double> p2,
                          double window_decades = 1.0);

// Least-squares slope of ln<p^2> vs ln t over the last decade of samples.
double last_decade_beta(std::span<const double> times, std::span<const double> p2);

// beta over a (K, epsilon) grid plus the beta = 2/3 boundary, linearly
// interpolated along K for each epsilon.
struct PhaseMap {
    std::vector<double> K, epsilon;
    std::vector<double> beta;                          // row-major [iK][ie]
    std::vector<std::pair<double, double>> boundary;   // (K_c, epsilon)
};
PhaseMap phase_diagram(std::span<const double> K, std::span<const double> epsilon,
                       std::span<const double> beta_rowmajor);

// Finite-time scaling of Lambda = t^{-2/3} <p^2> against u = t^{-1/3}:
// curves are branch-split by the sign of beta - 2/3, shifted onto per-branch
// master curves in ln-ln (monotone interpolation, overlap >= 25% of the curve
// span), and the resulting ln xi(K) family is fitted to
// ln xi = c_branch - nu ln(alpha + b |K - K_c|). The critical point is fitted
// jointly by default; fixing it at the beta-crossing estimate is exposed as a
// mode but biases nu upward on synthetic data.
struct FtsOptions {
    double t_min = 10.0;
    double exclude_band = 0.05;  // |beta - 2/3| band dropped from the family fit
    int n_starts = 60;
    int n_bootstrap = 200;       // member resamples for the nu error bar
    uint64_t seed = 13;
    enum class KcMode { joint, fixed_from_crossing };
    KcMode kc_mode = KcMode::joint;
};
struct FtsCurveSet {
    std::vector<double> K;                            // ascending
    std::vector<double> times;                        // shared kick times
    std::vector<std::vector<std::vector<double>>> p2; // [K][member][time]
};
struct FtsResult {
    double nu = 0.0, nu_err = 0.0;
    double nu_loc = 0.0, nu_dif = 0.0;   // per-branch refits at fixed K_c
    double k_c = 0.0, k_c_crossing = 0.0;
    std::vector<double> beta;            // per K, last-decade slope
    std::vector<double> ln_xi;           // per K, from the shift chain
    std::vector<int> branch;             // -1 localized, +1 diffusive
    double slope_loc = 0.0, slope_dif = 0.0;  // master-curve asymptotes
    double fit_cost = 0.0;
    int bootstrap_used = 0;
    std::vector<double> master_w_loc, master_y_loc;   // pooled shifted points
    std::vector<double> master_w_dif, master_y_dif;
};
FtsResult finite_time_scaling(const FtsCurveSet& curves, const FtsOptions& opt = {});

// Shape distance of rescaled momentum distributions: each snapshot is mapped
// to f(x) = t^{1/3} rho(p) at x = p t^{-1/3} on a fixed grid, renormalized,
// and compared pairwise in L1. Returns the maximum pairwise distance.
struct MomentumDist {
    double t = 0.0;
    std::vector<double> p;     // uniform grid
    std::vector<double> prob;  // probability per grid point
};
double critical_collapse(std::span<const MomentumDist> snaps);

// Saturated <p^2> levels vs drive amplitude: ln <p^2>_sat is fitted linearly
// in epsilon. Curves whose last-decade slope exceeds 0.1 are not saturated;
// with enforce set this throws NotSaturated listing them.
struct TwoDLawResult {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    std::vector<double> p2_sat;
    std::vector<double> beta_last;
};
TwoDLawResult two_d_localization_law(std::span<const double> epsilons,
                                     std::span<const double> times,
                                     const std::vector<std::vector<double>>& p2_curves,
                                     bool enforce_saturation = true);
double two_d_predicted_slope(double K, double kbar);

}  // namespace kr
