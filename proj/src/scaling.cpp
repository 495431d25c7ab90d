#include "kr/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kr/errors.hpp"
#include "kr/fitting.hpp"
#include "kr/rng.hpp"

namespace kr {

BetaSeries beta_transport(std::span<const double> times, std::span<const double> p2,
                          double window_decades) {
    if (times.size() != p2.size()) throw IncompatibleDimensions("beta_transport");
    if (!(window_decades > 0.0)) throw OutOfRange("window_decades", "> 0");
    const double half = 0.5 * window_decades * std::numbers::ln10;
    BetaSeries out;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) continue;
        const double c = std::log(times[i]);
        if (c - half < std::log(times.front() > 0 ? times.front() : 1.0) - 1e-12) continue;
        if (c + half > std::log(times.back()) + 1e-12) continue;
        lx.clear();
        ly.clear();
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (!(times[j] > 0.0) || !(p2[j] > 0.0)) continue;
            const double l = std::log(times[j]);
            if (l < c - half || l > c + half) continue;
            lx.push_back(l);
            ly.push_back(std::log(p2[j]));
        }
        if (lx.size() < 5) continue;
        out.t.push_back(times[i]);
        out.beta.push_back(linear_fit(lx, ly).slope);
    }
    if (out.t.empty()) throw WindowTooNarrow("beta_transport: no admissible windows");
    return out;
}

double last_decade_beta(std::span<const double> times, std::span<const double> p2) {
    if (times.size() != p2.size() || times.empty()) throw IncompatibleDimensions("last_decade_beta");
    const double cut = times.back() / 10.0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < cut || !(times[i] > 0.0) || !(p2[i] > 0.0)) continue;
        lx.push_back(std::log(times[i]));
        ly.push_back(std::log(p2[i]));
    }
    if (lx.size() < 3) throw WindowTooNarrow("last_decade_beta: fewer than 3 samples");
    return linear_fit(lx, ly).slope;
}

PhaseMap phase_diagram(std::span<const double> K, std::span<const double> epsilon,
                       std::span<const double> beta_rowmajor) {
    const std::size_t nk = K.size(), ne = epsilon.size();
    if (beta_rowmajor.size() != nk * ne) throw IncompatibleDimensions("phase_diagram");
    PhaseMap pm;
    pm.K.assign(K.begin(), K.end());
    pm.epsilon.assign(epsilon.begin(), epsilon.end());
    pm.beta.assign(beta_rowmajor.begin(), beta_rowmajor.end());
    constexpr double bc = 2.0 / 3.0;
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t k = 0; k + 1 < nk; ++k) {
            const double b0 = pm.beta[k * ne + e] - bc;
            const double b1 = pm.beta[(k + 1) * ne + e] - bc;
            if (b0 == 0.0) {
                pm.boundary.emplace_back(K[k], epsilon[e]);
            } else if (b0 * b1 < 0.0) {
                const double f = b0 / (b0 - b1);
                pm.boundary.emplace_back(K[k] + f * (K[k + 1] - K[k]), epsilon[e]);
            }
        }
    }
    return pm;
}

namespace {

constexpr double kBc = 2.0 / 3.0;

struct Curve {
    std::vector<double> w;  // ln u, ascending
    std::vector<double> y;  // ln Lambda
    double beta = 0.0;
};

struct PointEstimate {
    double nu = 0.0, k_c = 0.0, k_c_crossing = 0.0, cost = 0.0;
    double nu_loc = 0.0, nu_dif = 0.0;
    double slope_loc = 0.0, slope_dif = 0.0;
    std::vector<double> ln_xi, beta;
    std::vector<int> branch;
    std::vector<double> mwl, myl, mwd, myd;
};

std::vector<Curve> build_curves(std::span<const double> K, std::span<const double> times,
                                const std::vector<std::vector<double>>& means, double t_min) {
    std::vector<Curve> cs(K.size());
    for (std::size_t k = 0; k < K.size(); ++k) {
        std::vector<double> tt, pp;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] < t_min) continue;
            tt.push_back(times[i]);
            pp.push_back(means[k][i]);
        }
        if (tt.size() < 8) throw WindowTooNarrow("finite_time_scaling: too few samples past t_min");
        Curve& c = cs[k];
        c.beta = last_decade_beta(tt, pp);
        c.w.resize(tt.size());
        c.y.resize(tt.size());
        for (std::size_t i = 0; i < tt.size(); ++i) {
            const std::size_t j = tt.size() - 1 - i;  // ascending in ln u
            const double lu = -std::log(tt[j]) / 3.0;
            c.w[i] = lu;
            c.y[i] = std::log(pp[j]) + 2.0 * lu;
        }
    }
    return cs;
}

// Sequential master matching within one branch; returns ln xi per member of
// `order` (ln xi of the first is 0) and appends the pooled shifted points.
void match_branch(const std::vector<Curve>& cs, const std::vector<std::size_t>& order,
                  std::span<const double> K, double span, std::vector<double>& ln_xi,
                  std::vector<double>& pool_w, std::vector<double>& pool_y) {
    const Curve& c0 = cs[order[0]];
    std::vector<double> mw = c0.w, my = c0.y;
    ln_xi[order[0]] = 0.0;
    for (std::size_t oi = 1; oi < order.size(); ++oi) {
        const Curve& c = cs[order[oi]];
        const Pchip f2(c.w, c.y);
        auto cost = [&](double d) {
            const double lo = std::max(mw.front(), c.w.front() - d);
            const double hi = std::min(mw.back(), c.w.back() - d);
            if (hi - lo < 0.25 * span) return 1e6 + std::abs(d);
            double ss = 0.0;
            int n = 0;
            for (std::size_t i = 0; i < mw.size(); ++i) {
                if (mw[i] < lo || mw[i] > hi) continue;
                const double q = std::clamp(mw[i] + d, f2.xmin(), f2.xmax());
                const double r = my[i] - f2(q);
                ss += r * r;
                ++n;
            }
            if (n < 5) return 1e6 + std::abs(d);
            return ss / n;
        };
        int ibest = 0;
        double cbest = 1e18;
        for (int i = 0; i <= 80; ++i) {
            const double c_i = cost(-4.0 + 0.1 * i);
            if (c_i < cbest) {
                cbest = c_i;
                ibest = i;
            }
        }
        if (cbest >= 1e6)
            throw NoOverlap("finite_time_scaling: curve at K=" + std::to_string(K[order[oi]]) +
                            " shares no admissible overlap with its branch master");
        const double dl = -4.0 + 0.1 * std::max(0, ibest - 2);
        const double dh = -4.0 + 0.1 * std::min(80, ibest + 2);
        const double d = golden_min(cost, dl, dh, 1e-8);
        ln_xi[order[oi]] = -d;
        for (std::size_t i = 0; i < c.w.size(); ++i) {
            mw.push_back(c.w[i] - d);
            my.push_back(c.y[i]);
        }
        std::vector<std::size_t> idx(mw.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mw[a] < mw[b]; });
        std::vector<double> w2(mw.size()), y2(mw.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            w2[i] = mw[idx[i]];
            y2[i] = my[idx[i]];
        }
        mw = std::move(w2);
        my = std::move(y2);
    }
    pool_w.insert(pool_w.end(), mw.begin(), mw.end());
    pool_y.insert(pool_y.end(), my.begin(), my.end());
}

double asymptote_slope(std::span<const double> w, std::span<const double> y) {
    if (w.size() < 10) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sw(w.begin(), w.end());
    std::nth_element(sw.begin(), sw.begin() + sw.size() * 15 / 100, sw.end());
    const double q15 = sw[sw.size() * 15 / 100];
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] <= q15) {
            fx.push_back(w[i]);
            fy.push_back(y[i]);
        }
    if (fx.size() < 6) return std::numeric_limits<double>::quiet_NaN();
    return linear_fit(fx, fy).slope;
}

PointEstimate fts_point(std::span<const double> K, std::span<const double> times,
                        const std::vector<std::vector<double>>& means, const FtsOptions& opt,
                        uint64_t nm_seed, int n_starts, bool with_extras) {
    const std::size_t nk = K.size();
    std::vector<Curve> cs = build_curves(K, times, means, opt.t_min);

    std::ptrdiff_t ic = -1;
    for (std::size_t i = 0; i + 1 < nk; ++i)
        if ((cs[i].beta - kBc) * (cs[i + 1].beta - kBc) <= 0.0) {
            ic = static_cast<std::ptrdiff_t>(i);
            break;
        }
    if (ic < 0) throw BranchAssignmentAmbiguous("no beta = 2/3 crossing in the K range");
    const std::size_t s_lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, ic - 1));
    const std::size_t s_hi = std::min(nk, static_cast<std::size_t>(ic) + 3);
    std::vector<double> kx, kb;
    for (std::size_t i = s_lo; i < s_hi; ++i) {
        kx.push_back(K[i]);
        kb.push_back(cs[i].beta);
    }
    const LinearFit cross = linear_fit(kx, kb);
    const double kc0 = (kBc - cross.intercept) / cross.slope;

    std::vector<std::size_t> loc, dif;
    for (std::size_t i = 0; i < nk; ++i)
        (cs[i].beta < kBc ? loc : dif).push_back(i);
    if (loc.empty() || dif.empty())
        throw BranchAssignmentAmbiguous("a branch is empty after the beta split");

    const double span = cs[0].w.back() - cs[0].w.front();
    PointEstimate pe;
    pe.k_c_crossing = kc0;
    pe.ln_xi.assign(nk, 0.0);
    pe.beta.resize(nk);
    pe.branch.resize(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        pe.beta[i] = cs[i].beta;
        pe.branch[i] = cs[i].beta < kBc ? -1 : +1;
    }
    auto by_dist = [&](std::vector<std::size_t> v) {
        std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(K[a] - kc0) < std::abs(K[b] - kc0);
        });
        return v;
    };
    match_branch(cs, by_dist(loc), K, span, pe.ln_xi, pe.mwl, pe.myl);
    match_branch(cs, by_dist(dif), K, span, pe.ln_xi, pe.mwd, pe.myd);

    std::vector<double> kl, xl, kd, xd;
    for (std::size_t i : loc)
        if (std::abs(cs[i].beta - kBc) > opt.exclude_band) {
            kl.push_back(K[i]);
            xl.push_back(pe.ln_xi[i]);
        }
    for (std::size_t i : dif)
        if (std::abs(cs[i].beta - kBc) > opt.exclude_band) {
            kd.push_back(K[i]);
            xd.push_back(pe.ln_xi[i]);
        }
    if (kl.size() < 3 || kd.size() < 3)
        throw BranchAssignmentAmbiguous("too few curves outside the exclusion band");

    const bool fixed_kc = opt.kc_mode == FtsOptions::KcMode::fixed_from_crossing;
    auto family = [&](double nu, double la, double lb, double cl, double cd, double kc) {
        if (!(nu > 0.2 && nu < 6.0) || !(la > -7.0 && la < 4.0) || !(lb > -6.0 && lb < 4.0))
            return 1e9;
        if (!(kc > K[1] && kc < K[nk - 2])) return 1e9;
        const double a = std::exp(la), b = std::exp(lb);
        double ss = 0.0;
        for (std::size_t i = 0; i < kl.size(); ++i) {
            const double r = xl[i] - (cl - nu * std::log(a + b * std::abs(kl[i] - kc)));
            ss += r * r;
        }
        for (std::size_t i = 0; i < kd.size(); ++i) {
            const double r = xd[i] - (cd - nu * std::log(a + b * std::abs(kd[i] - kc)));
            ss += r * r;
        }
        return ss;
    };

    Xoshiro256pp rng(nm_seed);
    std::vector<double> best;
    double fbest = 1e30;
    for (int s = 0; s < n_starts; ++s) {
        std::vector<double> x0 = {rng.uniform(0.8, 2.8),
                                  std::log(rng.uniform(0.02, 1.0)),
                                  std::log(rng.uniform(0.05, 1.5)),
                                  rng.uniform(-3.0, 3.0),
                                  rng.uniform(-3.0, 3.0),
                                  rng.uniform(K[2], K[nk - 3])};
        std::vector<double> scale = {0.2, 0.3, 0.3, 0.3, 0.3, 0.1};
        if (fixed_kc) {
            x0[5] = kc0;
            scale[5] = 0.0;
        }
        auto obj = [&](std::span<const double> th) {
            return family(th[0], th[1], th[2], th[3], th[4], th[5]);
        };
        double fv = 0.0;
        std::vector<double> xm = nelder_mead(obj, x0, scale, 8000, 1e-13, &fv);
        if (fv < fbest) {
            fbest = fv;
            best = xm;
        }
    }
    if (best.empty() || fbest >= 1e9) throw NotConverged("finite_time_scaling: family fit failed");
    pe.nu = best[0];
    pe.k_c = fixed_kc ? kc0 : best[5];
    pe.cost = fbest;

    if (with_extras) {
        pe.slope_loc = asymptote_slope(pe.mwl, pe.myl);
        pe.slope_dif = asymptote_slope(pe.mwd, pe.myd);
        const double kc_fix = pe.k_c;
        auto side = [&](std::span<const double> ks, std::span<const double> xs) {
            auto obj = [&](std::span<const double> th) {
                const double nu = th[0], la = th[1], lb = th[2], c = th[3];
                if (!(nu > 0.2 && nu < 6.0) || !(la > -7.0 && la < 4.0) || !(lb > -6.0 && lb < 4.0))
                    return 1e9;
                const double a = std::exp(la), b = std::exp(lb);
                double ss = 0.0;
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    const double r = xs[i] - (c - nu * std::log(a + b * std::abs(ks[i] - kc_fix)));
                    ss += r * r;
                }
                return ss;
            };
            double fb = 1e30, fv = 0.0;
            std::vector<double> bx;
            for (int s = 0; s < std::max(10, n_starts / 2); ++s) {
                std::vector<double> x0 = {rng.uniform(0.8, 2.8), std::log(rng.uniform(0.02, 1.0)),
                                          std::log(rng.uniform(0.05, 1.5)), rng.uniform(-3.0, 3.0)};
                const std::vector<double> scale = {0.2, 0.3, 0.3, 0.3};
                std::vector<double> xm = nelder_mead(obj, x0, scale, 6000, 1e-13, &fv);
                if (fv < fb) {
                    fb = fv;
                    bx = xm;
                }
            }
            return bx.empty() ? std::numeric_limits<double>::quiet_NaN() : bx[0];
        };
        pe.nu_loc = side(kl, xl);
        pe.nu_dif = side(kd, xd);
    }
    return pe;
}

}  // namespace

FtsResult finite_time_scaling(const FtsCurveSet& curves, const FtsOptions& opt) {
    const std::size_t nk = curves.K.size();
    if (nk < 6) throw IncompatibleDimensions("finite_time_scaling: need >= 6 K values");
    if (curves.p2.size() != nk) throw IncompatibleDimensions("finite_time_scaling: p2 vs K");
    for (const auto& per_k : curves.p2) {
        if (per_k.empty()) throw IncompatibleDimensions("finite_time_scaling: empty ensemble");
        for (const auto& m : per_k)
            if (m.size() != curves.times.size())
                throw IncompatibleDimensions("finite_time_scaling: member length vs times");
    }
    for (std::size_t i = 0; i + 1 < nk; ++i)
        if (!(curves.K[i] < curves.K[i + 1])) throw OutOfRange("K", "strictly ascending");

    auto means_of = [&](const std::vector<std::vector<std::size_t>>* pick) {
        std::vector<std::vector<double>> means(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            const auto& mem = curves.p2[k];
            means[k].assign(curves.times.size(), 0.0);
            const std::size_t nm = mem.size();
            for (std::size_t j = 0; j < nm; ++j) {
                const auto& row = pick ? mem[(*pick)[k][j]] : mem[j];
                for (std::size_t i = 0; i < row.size(); ++i) means[k][i] += row[i];
            }
            for (auto& v : means[k]) v /= static_cast<double>(nm);
        }
        return means;
    };

    const PointEstimate pe =
        fts_point(curves.K, curves.times, means_of(nullptr), opt, opt.seed, opt.n_starts, true);

    FtsResult out;
    out.nu = pe.nu;
    out.nu_loc = pe.nu_loc;
    out.nu_dif = pe.nu_dif;
    out.k_c = pe.k_c;
    out.k_c_crossing = pe.k_c_crossing;
    out.beta = pe.beta;
    out.ln_xi = pe.ln_xi;
    out.branch = pe.branch;
    out.slope_loc = pe.slope_loc;
    out.slope_dif = pe.slope_dif;
    out.fit_cost = pe.cost;
    out.master_w_loc = pe.mwl;
    out.master_y_loc = pe.myl;
    out.master_w_dif = pe.mwd;
    out.master_y_dif = pe.myd;

    if (opt.n_bootstrap > 0) {
        Xoshiro256pp rng(opt.seed ^ 0x626f6f74ULL);
        std::vector<double> nus;
        nus.reserve(static_cast<std::size_t>(opt.n_bootstrap));
        std::vector<std::vector<std::size_t>> pick(nk);
        for (int b = 0; b < opt.n_bootstrap; ++b) {
            for (std::size_t k = 0; k < nk; ++k) {
                const std::size_t nm = curves.p2[k].size();
                pick[k].resize(nm);
                for (std::size_t j = 0; j < nm; ++j)
                    pick[k][j] = std::min(nm - 1, static_cast<std::size_t>(rng.uniform() * nm));
            }
            try {
                const PointEstimate pb = fts_point(curves.K, curves.times, means_of(&pick), opt,
                                                   opt.seed + 1000 + static_cast<uint64_t>(b), 25,
                                                   false);
                nus.push_back(pb.nu);
            } catch (const std::runtime_error&) {
                // degenerate resample; skip
            }
        }
        out.bootstrap_used = static_cast<int>(nus.size());
        if (out.bootstrap_used < std::max(20, opt.n_bootstrap / 2))
            throw NotConverged("finite_time_scaling: too many bootstrap failures");
        double mean = 0.0;
        for (double v : nus) mean += v;
        mean /= nus.size();
        double var = 0.0;
        for (double v : nus) var += (v - mean) * (v - mean);
        out.nu_err = std::sqrt(var / nus.size());
    }
    return out;
}

double critical_collapse(std::span<const MomentumDist> snaps) {
    if (snaps.size() < 2) throw IncompatibleDimensions("critical_collapse: need >= 2 snapshots");
    constexpr int n_grid = 2001;
    constexpr double x_max = 6.0;
    const double dx = 2.0 * x_max / (n_grid - 1);

    std::vector<std::vector<double>> fs;
    for (const auto& s : snaps) {
        if (s.p.size() != s.prob.size() || s.p.size() < 8)
            throw IncompatibleDimensions("critical_collapse: snapshot shape");
        if (!(s.t > 0.0)) throw OutOfRange("t", "> 0");
        const double g = std::cbrt(s.t);
        const double dp = s.p[1] - s.p[0];
        std::vector<double> f(n_grid, 0.0);
        for (int i = 0; i < n_grid; ++i) {
            const double x = -x_max + i * dx;
            const double p = x * g;
            const double fi = (p - s.p.front()) / dp;
            const auto j = static_cast<std::ptrdiff_t>(std::floor(fi));
            if (j < 0 || j + 1 >= static_cast<std::ptrdiff_t>(s.p.size())) continue;
            const double w = fi - static_cast<double>(j);
            const double rho = ((1.0 - w) * s.prob[static_cast<std::size_t>(j)] +
                                w * s.prob[static_cast<std::size_t>(j) + 1]) / dp;
            f[static_cast<std::size_t>(i)] = rho * g;
        }
        double mass = 0.0;
        for (double v : f) mass += v * dx;
        if (!(mass > 0.0)) throw OutOfRange("prob", "nonzero mass in the collapse window");
        for (auto& v : f) v /= mass;
        fs.push_back(std::move(f));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t b = a + 1; b < fs.size(); ++b) {
            double l1 = 0.0;
            for (int i = 0; i < n_grid; ++i)
                l1 += std::abs(fs[a][static_cast<std::size_t>(i)] - fs[b][static_cast<std::size_t>(i)]) * dx;
            worst = std::max(worst, l1);
        }
    return worst;
}

TwoDLawResult two_d_localization_law(std::span<const double> epsilons,
                                     std::span<const double> times,
                                     const std::vector<std::vector<double>>& p2_curves,
                                     bool enforce_saturation) {
    if (epsilons.size() != p2_curves.size() || epsilons.size() < 3)
        throw IncompatibleDimensions("two_d_localization_law");
    TwoDLawResult out;
    std::vector<std::size_t> stale;
    const double cut = times.back() / 10.0;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const auto& p2 = p2_curves[e];
        if (p2.size() != times.size()) throw IncompatibleDimensions("two_d_localization_law: curve length");
        double sat = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] >= cut) {
                sat += p2[i];
                ++n;
            }
        out.p2_sat.push_back(sat / n);
        out.beta_last.push_back(last_decade_beta(times, p2));
        if (out.beta_last.back() > 0.1) stale.push_back(e);
    }
    if (enforce_saturation && !stale.empty()) {
        std::string which;
        for (std::size_t e : stale) which += (which.empty() ? "" : ", ") + std::to_string(epsilons[e]);
        throw NotSaturated(which);
    }
    std::vector<double> ly(out.p2_sat.size());
    for (std::size_t i = 0; i < ly.size(); ++i) ly[i] = std::log(out.p2_sat[i]);
    const LinearFit f = linear_fit(epsilons, ly);
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.r2 = f.r2;
    return out;
}

double two_d_predicted_slope(double K, double kbar) {
    const double k = K / kbar;
    return 2.0 * (std::numbers::pi / std::sqrt(32.0)) * k * k;
}

}  // namespace kr
