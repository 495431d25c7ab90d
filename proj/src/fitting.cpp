#include "kr/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kr/errors.hpp"

namespace kr {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: need n >= 2 equal-size");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = (syy > 0) ? 1.0 - ss_res / syy : 1.0;
    f.stderr_slope = (n > 2) ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return f;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x0, std::span<const double> scale,
                                int max_iter, double ftol, double* fbest) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += scale[i];
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        {
            std::vector<std::vector<double>> s2;
            std::vector<double> f2;
            for (auto i : order) {
                s2.push_back(simplex[i]);
                f2.push_back(fv[i]);
            }
            simplex.swap(s2);
            fv.swap(f2);
        }
        if (std::abs(fv[n] - fv[0]) <= ftol * (std::abs(fv[0]) + ftol)) break;

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += simplex[i][j];
            centroid[j] = s / n;
        }
        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - simplex[n][j]);
        const double fr = f(xr);
        if (fr < fv[0]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - simplex[n][j]);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            if (outside) {
                for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            } else {
                for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (simplex[n][j] - centroid[j]);
            }
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    if (fbest) *fbest = fv[best];
    return simplex[best];
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || n != y_.size()) throw std::invalid_argument("Pchip: need n >= 2");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: x not increasing");
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    // Fritsch-Carlson: weighted harmonic mean at interior knots when the
    // neighbor slopes agree in sign, zero otherwise.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0) {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double d0, double d1, double h0, double h1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0) d = 0.0;
        else if (d0 * d1 <= 0 && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
        return d;
    };
    d_[0] = (n == 2) ? delta[0] : end_slope(delta[0], delta[1], h[0], h[1]);
    d_[n - 1] = (n == 2) ? delta[0] : end_slope(delta[n - 2], delta[n - 3], h[n - 2], h[n - 3]);
}

double Pchip::operator()(double q) const {
    const std::size_t n = x_.size();
    if (q < x_.front() || q > x_.back()) throw std::domain_error("Pchip: query out of range");
    std::size_t i = std::upper_bound(x_.begin(), x_.end(), q) - x_.begin();
    i = std::min(std::max<std::size_t>(i, 1), n - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

ShapeFit fit_distribution_shape(std::span<const double> p, std::span<const double> w) {
    const std::size_t n = p.size();
    if (n != w.size() || n < 5) throw std::invalid_argument("fit_distribution_shape: bad input");
    double wsum = 0;
    for (double v : w) wsum += v;
    if (!(wsum > 0)) throw FitDiverged("empty distribution");

    // cross-entropy at (alpha, ln s): sum_i w_i |p_i|^a e^{-ln s} + ln Z,
    // Z summed over the data's own grid (log-sum-exp guarded)
    std::vector<double> absp(n);
    for (std::size_t i = 0; i < n; ++i) absp[i] = std::abs(p[i]);
    std::vector<double> q(n);
    auto ce = [&](double alpha, double lns) {
        for (std::size_t i = 0; i < n; ++i) q[i] = std::pow(absp[i], alpha);
        const double inv_s = std::exp(-lns);
        double data_term = 0, zmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double zi = q[i] * inv_s;
            data_term += (w[i] / wsum) * zi;
            zmin = std::min(zmin, zi);
        }
        double zsum = 0;
        for (std::size_t i = 0; i < n; ++i) zsum += std::exp(-(q[i] * inv_s - zmin));
        return data_term + std::log(zsum) - zmin;
    };
    auto profile = [&](double alpha) {
        // inner 1D minimization over ln s; generous bracket covers
        // p ~ 1e3, alpha ~ 3.4
        return golden_min([&](double lns) { return ce(alpha, lns); }, -10.0, 40.0, 1e-9);
    };

    constexpr double a_lo = 0.3, a_hi = 3.4, a_step = 0.05;
    double best_a = a_lo, best_f = std::numeric_limits<double>::infinity();
    for (double a = a_lo; a <= a_hi + 1e-12; a += a_step) {
        const double f = ce(a, profile(a));
        if (f < best_f) {
            best_f = f;
            best_a = a;
        }
    }
    if (best_a <= a_lo + 1e-9 || best_a >= a_hi - a_step / 2)
        throw FitDiverged("alpha at search boundary");
    const double a_ref = golden_min([&](double a) { return ce(a, profile(a)); },
                                    best_a - a_step, best_a + a_step, 1e-6);
    ShapeFit fit;
    fit.alpha = a_ref;
    fit.s = std::exp(profile(a_ref));
    fit.cross_entropy = ce(a_ref, profile(a_ref));
    fit.converged = true;
    return fit;
}

}  // namespace kr
