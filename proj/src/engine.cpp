#include "kr/engine.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "kr/errors.hpp"
#include "kr/kernels.hpp"
#include "kr/rng.hpp"

namespace kr {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Per-worker spectral workspace: one in-place c2c plan pair per grid.
// Plan creation is mutex-guarded (FFTW planner is not thread-safe);
// execution on the owned buffer is.
class Evolver {
  public:
    explicit Evolver(int basis_half_width)
        : grid_(MomentumGrid::make(basis_half_width)) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * grid_.N));
        std::lock_guard<std::mutex> lk(planner_mutex());
        to_pos_ = fftw_plan_dft_1d(grid_.N, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        to_mom_ = fftw_plan_dft_1d(grid_.N, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Evolver() {
        std::lock_guard<std::mutex> lk(planner_mutex());
        fftw_destroy_plan(to_pos_);
        fftw_destroy_plan(to_mom_);
        fftw_free(buf_);
    }
    Evolver(const Evolver&) = delete;
    Evolver& operator=(const Evolver&) = delete;

    const MomentumGrid& grid() const { return grid_; }

    MemberSeries run(const SimParams& p, const KickSchedule& schedule,
                     const SampleSpec& sampling, const std::vector<std::complex<double>>* init,
                     int member_tag) {
        const int N = grid_.N;
        const auto& k = kernels();
        auto* psi = reinterpret_cast<std::complex<double>*>(buf_);

        // state: delta at m=0 unless an explicit initial vector is given
        std::fill(psi, psi + N, std::complex<double>{0.0, 0.0});
        if (init) {
            const int M = (static_cast<int>(init->size()) - 1) / 2;
            for (int m = -M; m <= M; ++m) psi[m >= 0 ? m : N + m] = (*init)[m + M];
        } else {
            psi[0] = 1.0;
        }

        // per-member tables
        std::vector<double> vals(N), w2(N);
        for (int j = 0; j < N; ++j) {
            const double mb = grid_.m[j] + p.beta_qm;
            vals[j] = p.kbar * mb * mb * 0.5;
            w2[j] = p.kbar * p.kbar * mb * mb;
        }
        std::vector<std::complex<double>> free_phase(N);
        k.build_phase(free_phase.data(), vals.data(), N);

        std::vector<std::complex<double>> kick_const;
        if (schedule.constant && !schedule.a.empty()) {
            kick_const.resize(N);
            const double z = p.K * schedule.a[0] / p.kbar;
            for (int j = 0; j < N; ++j) vals[j] = z * grid_.cosx[j];
            k.build_phase(kick_const.data(), vals.data(), N);
            const double inv = 1.0 / N;
            for (auto& c : kick_const) c *= inv;
        }

        MemberSeries out;
        out.beta_qm = p.beta_qm;
        out.phis = p.phis;
        out.seed = p.seed;

        std::size_t si = 0, di = 0;
        auto sample = [&](long t) {
            while (si < sampling.times.size() && sampling.times[si] == t) {
                out.times.push_back(t);
                out.p2.push_back(k.weighted_norm2(psi, w2.data(), N));
                out.pi0.push_back(std::norm(psi[0]));
                const double nrm = k.norm2(psi, N);
                out.norm_drift = std::max(out.norm_drift, std::abs(nrm - 1.0));
                const double edge = k.norm2(psi + grid_.edge_lo, grid_.edge_len);
                if (edge > 1e-6) throw EdgeLeak(member_tag, t, edge);
                ++si;
            }
            while (di < sampling.dist_times.size() && sampling.dist_times[di] == t) {
                std::vector<double> d(N);
                for (int j = 0; j < N; ++j) d[grid_.m[j] + grid_.Mi] = std::norm(psi[j]);
                out.dists.push_back(std::move(d));
                ++di;
            }
        };

        sample(0);
        for (long n = 1; n <= p.n_kicks; ++n) {
            k.cmul(psi, free_phase.data(), N);
            fftw_execute(to_pos_);
            if (!kick_const.empty()) {
                k.cmul(psi, kick_const.data(), N);
            } else {
                const double z = p.K * schedule.a[n - 1] / p.kbar;
                k.kick_phase(psi, grid_.cosx.data(), z, 1.0 / N, N);
            }
            fftw_execute(to_mom_);
            sample(n);
        }
        return out;
    }

  private:
    MomentumGrid grid_;
    fftw_complex* buf_;
    fftw_plan to_pos_, to_mom_;
};

}  // namespace

KickSchedule KickSchedule::make(const SimParams& p, const std::vector<double>& phis) {
    KickSchedule s;
    s.a.assign(p.n_kicks, 1.0);
    s.constant = (p.epsilon == 0.0) || p.omegas.empty();
    if (!s.constant) {
        for (long n = 1; n <= p.n_kicks; ++n) {
            double f = 1.0;
            for (std::size_t i = 0; i < p.omegas.size(); ++i)
                f *= std::cos(p.omegas[i] * n + phis[i]);
            s.a[n - 1] = 1.0 + p.epsilon * f;
        }
    }
    return s;
}

std::vector<long> sample_times(long n_kicks, int per_decade) {
    std::vector<long> ts;
    for (int k = 0;; ++k) {
        const long t = std::llround(std::pow(10.0, static_cast<double>(k) / per_decade));
        if (t >= n_kicks) break;
        if (ts.empty() || t > ts.back()) ts.push_back(std::max<long>(t, 1));
    }
    if (n_kicks >= 1) ts.push_back(n_kicks);
    return ts;
}

std::vector<std::complex<double>> build_initial_state(const InitialState& init, int M) {
    std::vector<std::complex<double>> psi(2 * M + 1, {0.0, 0.0});
    if (init.kind == InitialState::Kind::Delta) {
        psi[M] = 1.0;
        return psi;
    }
    if (!(init.width > 0)) throw OutOfRange("width", "> 0");
    double nrm = 0;
    for (int m = -M; m <= M; ++m) {
        const double a = std::exp(-m * m / (2.0 * init.width * init.width));
        psi[m + M] = a;
        nrm += a * a;
    }
    const double inv = 1.0 / std::sqrt(nrm);
    for (auto& c : psi) c *= inv;
    if (std::norm(psi[0]) > 1e-12)
        throw BasisTooSmall("gaussian tail at |m|=M exceeds 1e-12");
    return psi;
}

MemberSeries evolve(const SimParams& p, const KickSchedule& schedule, const SampleSpec& sampling,
                    const std::vector<std::complex<double>>* init) {
    validate(p);
    if (static_cast<long>(schedule.a.size()) != p.n_kicks)
        throw IncompatibleDimensions("schedule length != n_kicks");
    Evolver ev(p.basis_half_width);
    return ev.run(p, schedule, sampling, init, -1);
}

EnsembleResult run_ensemble(const SimParams& p, const EnsembleSpec& spec,
                            const SampleSpec& sampling, int n_threads) {
    {
        SimParams q = p;
        if (q.phis.empty()) q.phis.assign(q.omegas.size(), 0.0);  // drawn per member
        validate(q);
    }
    for (const auto& ts : {sampling.times, sampling.dist_times})
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (ts[i] > p.n_kicks || ts[i] < 0 || (i > 0 && ts[i] <= ts[i - 1]))
                throw OutOfRange("sampling", "sorted, unique, within [0, n_kicks]");
    const int n = spec.n_members;
    if (n < 1) throw OutOfRange("n_members", ">= 1");
    n_threads = std::max(1, std::min(n_threads, n));

    std::vector<MemberSeries> members(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<int> next{0};

    auto worker = [&]() {
        Evolver ev(p.basis_half_width);
        for (int i; (i = next.fetch_add(1)) < n;) {
            try {
                SimParams mp = p;
                Xoshiro256pp rng(derive_member_seed(p.seed, i));
                mp.beta_qm = rng.uniform();
                std::vector<double> phis(p.omegas.size());
                for (auto& ph : phis) ph = rng.uniform(0.0, 2.0 * M_PI);
                mp.phis = phis;
                const KickSchedule sched = KickSchedule::make(mp, phis);
                members[i] = ev.run(mp, sched, sampling, nullptr, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (int i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);

    // fixed member-order reduction: results do not depend on n_threads
    EnsembleResult out;
    out.times = members[0].times;
    const std::size_t ns = out.times.size();
    out.p2.resize(ns);
    out.pi0.resize(ns);
    out.member_p2.resize(n);
    out.member_beta.resize(n);
    for (std::size_t s = 0; s < ns; ++s) {
        detail::Neumaier ap2, api0;
        for (int i = 0; i < n; ++i) {
            ap2.add(members[i].p2[s]);
            api0.add(members[i].pi0[s]);
        }
        out.p2[s] = ap2.value() / n;
        out.pi0[s] = api0.value() / n;
    }
    for (int i = 0; i < n; ++i) {
        out.member_p2[i] = std::move(members[i].p2);
        out.member_beta[i] = members[i].beta_qm;
        out.norm_drift = std::max(out.norm_drift, members[i].norm_drift);
    }

    const MomentumGrid g = MomentumGrid::make(p.basis_half_width);
    out.N = g.N;
    out.Mi = g.Mi;
    out.dist_times = sampling.dist_times;
    if (!sampling.dist_times.empty()) {
        out.dist_p.resize(g.N);
        for (int m = -g.Mi; m <= g.Mi; ++m) out.dist_p[m + g.Mi] = p.kbar * m;
        out.dists.assign(sampling.dist_times.size(), std::vector<double>(g.N, 0.0));
        for (std::size_t d = 0; d < sampling.dist_times.size(); ++d) {
            for (int j = 0; j < g.N; ++j) {
                detail::Neumaier acc;
                for (int i = 0; i < n; ++i) acc.add(members[i].dists[d][j]);
                out.dists[d][j] = acc.value() / n;
            }
        }
    }
    return out;
}

}  // namespace kr
