#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "kr/grid.hpp"
#include "kr/params.hpp"

namespace kr {

// Per-kick amplitude factors a_n = 1 + epsilon * prod_i cos(omega_i*n + phi_i),
// kick index n = 1..n_kicks.
struct KickSchedule {
    std::vector<double> a;
    bool constant = true;  // epsilon == 0 or no extra frequencies

    static KickSchedule make(const SimParams& p, const std::vector<double>& phis);
};

// Log-spaced integer sample times (~per_decade points per decade), always
// ending at n_kicks.
std::vector<long> sample_times(long n_kicks, int per_decade = 30);

struct SampleSpec {
    std::vector<long> times;       // observable samples
    std::vector<long> dist_times;  // full |psi|^2 snapshots (natural m order)
};

struct InitialState {
    enum class Kind { Delta, Gaussian } kind = Kind::Delta;
    double width = 1.0;  // gaussian only
};

// Amplitudes in natural order m = -M..M, normalized. Throws BasisTooSmall
// if the gaussian tail at |m| = M exceeds 1e-12.
std::vector<std::complex<double>> build_initial_state(const InitialState& init, int M);

// One member's time series. Momentum distributions are |psi_m|^2 in natural
// order over the internal lattice m = -Mi..Mi.
struct MemberSeries {
    std::vector<long> times;
    std::vector<double> p2;   // sum |psi_m|^2 kbar^2 (m+beta)^2
    std::vector<double> pi0;  // |psi_{m=0}|^2
    std::vector<std::vector<double>> dists;
    double beta_qm = 0.0;
    std::vector<double> phis;
    uint64_t seed = 0;
    double norm_drift = 0.0;  // max |norm-1| seen at samples
};

// Deterministic single-member propagation. Throws EdgeLeak if more than
// 1e-6 of the norm sits at |m| > 0.9*Mi at any sample time.
MemberSeries evolve(const SimParams& p, const KickSchedule& schedule, const SampleSpec& sampling,
                    const std::vector<std::complex<double>>* init = nullptr);

struct EnsembleResult {
    std::vector<long> times;
    std::vector<double> p2, pi0;  // ensemble means, fixed-order reduction
    std::vector<long> dist_times;
    std::vector<std::vector<double>> dists;  // mean distribution per dist time
    std::vector<double> dist_p;              // momentum value per column, kbar*m
    std::vector<std::vector<double>> member_p2;  // retained for bootstrap
    std::vector<double> member_beta;
    int N = 0, Mi = 0;
    double norm_drift = 0.0;
};

// Members drawn from derive_member_seed(p.seed, index): beta ~ U[0,1) then
// each phi_i ~ U[0,2pi). Ensemble means are reduced serially in member-index
// order, so results are byte-identical for any n_threads.
EnsembleResult run_ensemble(const SimParams& p, const EnsembleSpec& spec,
                            const SampleSpec& sampling, int n_threads = 1);

}  // namespace kr
