#pragma once
#include <cstdint>
#include <vector>

namespace kr {

// Standard Map phase point. theta reduced mod 2pi, L unbounded (momentum
// diffusion is the observable).
struct PhasePoint {
    double theta = 0.0;
    double L = 0.0;
};

// theta' = theta + L (mod 2pi), L' = L + K sin(theta')
PhasePoint standard_map_step(PhasePoint pt, double K);

// Inverse map: L = L' - K sin(theta'), theta = theta' - L (mod 2pi)
PhasePoint standard_map_step_back(PhasePoint pt, double K);

struct DiffusionEstimate {
    double D = 0.0;           // least-squares slope of mean L^2 vs 2t
    double stderr_D = 0.0;
    bool regime_warning = false;  // K <= 5: mixed phase space
    std::vector<double> mean_L2;  // per step, 1..n_steps
};

// Ensemble of n_traj trajectories, theta_0 uniform in [0,2pi), L_0 = 0.
// Fit window excludes the first 10 steps (transient convention).
DiffusionEstimate classical_diffusion(double K, int n_traj, int n_steps, uint64_t seed);

}  // namespace kr
