#pragma once
#include <functional>
#include <span>
#include <vector>

namespace kr {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double stderr_slope = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Golden-section minimum of f on [a,b]; tol on the argument.
double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

// Nelder-Mead on n dims from a start simplex around x0 (scale per dim).
// Returns best point; fbest output optional.
std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x0, std::span<const double> scale,
                                int max_iter = 4000, double ftol = 1e-12,
                                double* fbest = nullptr);

// Monotone piecewise-cubic interpolant (Fritsch-Carlson). x strictly
// increasing; evaluation outside [x0, xn] is an error by construction
// (callers clamp the query range).
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);
    double operator()(double q) const;
    double xmin() const { return x_.front(); }
    double xmax() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;  // d_: endpoint derivatives per knot
};

// Stretched-exponential family Pi(p) ~ exp(-|p|^alpha / s), fitted by
// maximum likelihood against a normalized histogram on its own momentum
// grid: the normalizer is the discrete sum over that grid, which keeps the
// estimator exact on coarse grids (continuous-integral normalization is
// visibly biased there).
struct ShapeFit {
    double alpha = 0.0;
    double s = 0.0;          // scale, in the same units as p^alpha
    double cross_entropy = 0.0;
    bool converged = false;
};

// p: momentum values of the grid; w: nonnegative weights (normalized
// internally). Throws FitDiverged if the optimum pins to the alpha bounds.
ShapeFit fit_distribution_shape(std::span<const double> p, std::span<const double> w);

}  // namespace kr
