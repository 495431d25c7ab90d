#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "kr/errors.hpp"

namespace kr {

// Full physical + numerical parameter set for one rotor family.
// Dimensionless units: time in kick periods, momentum eigenvalues
// p = kbar*(m + beta_qm), one-period free phase exp(-i*kbar*(m+beta)^2/2).
struct SimParams {
    double K = 0.0;                // kick strength
    double kbar = 2.89;            // effective Planck constant
    double epsilon = 0.0;          // modulation amplitude, [0,1)
    std::vector<double> omegas;    // extra frequencies w_2..w_d (rad per kick)
    std::vector<double> phis;      // modulation phases, [0,2pi)
    double beta_qm = 0.0;          // quasimomentum, [0,1)
    long n_kicks = 0;
    int basis_half_width = 512;    // M: momentum indices m in [-M, M]
    uint64_t seed = 0;

    // effective dimension d = 1 + number of extra frequencies
    int dimension() const { return 1 + static_cast<int>(omegas.size()); }
};

struct EnsembleSpec {
    int n_members = 1;
    // Sampling rules are fixed by convention: beta_qm uniform in [0,1),
    // each phi_i uniform in [0,2pi), member streams from
    // derive_member_seed(seed, index). Draw order per member: beta first,
    // then phi_2, phi_3, ...
};

struct ValidatedParams {
    SimParams p;
    bool fgp_applicable = false;  // kappa*(1+epsilon) < pi
    double kappa = 0.0;           // K/kbar
};

// Checks ranges and dimension compatibility; throws OutOfRange /
// IncompatibleDimensions. The FGP bound is recorded as a flag, not an
// error: large-K dynamics is legitimate engine territory, only the
// Anderson mapping needs the bound.
ValidatedParams validate(const SimParams& p);

// JSON round-trip with exactly the field names above, full precision.
std::string to_json(const SimParams& p, const EnsembleSpec& e);
void from_json(const std::string& text, SimParams& p, EnsembleSpec& e);

// Default irrational frequency pair for d=3 runs.
std::vector<double> default_omegas3();

}  // namespace kr
