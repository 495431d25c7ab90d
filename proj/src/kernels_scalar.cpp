#include <cmath>

#include "kr/kernels.hpp"

namespace kr {
namespace detail {

namespace {
// pi/2 split into three non-overlapping doubles (Cody-Waite)
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// fdlibm kernel coefficients on |r| <= pi/4
constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;

constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

inline double sin_kernel(double r) {
    const double z = r * r;
    const double w = z * z;
    const double p = S2 + z * (S3 + z * S4) + z * w * (S5 + z * S6);
    return r + r * z * (S1 + z * p);
}

inline double cos_kernel(double r) {
    const double z = r * r;
    const double w = z * z;
    const double p = z * (C1 + z * (C2 + z * C3)) + w * w * (C4 + z * (C5 + z * C6));
    return 1.0 - 0.5 * z + z * p;
}
}  // namespace

void sincos_poly(double x, double& s, double& c) {
    const double kd = std::nearbyint(x * kTwoOverPi);
    const long long k = static_cast<long long>(kd);
    double r = x - kd * kPio2Hi;
    r -= kd * kPio2Mid;
    r -= kd * kPio2Lo;
    const double sr = sin_kernel(r);
    const double cr = cos_kernel(r);
    switch (k & 3) {
        case 0: s = sr;  c = cr;  break;
        case 1: s = cr;  c = -sr; break;
        case 2: s = -sr; c = -cr; break;
        default: s = -cr; c = sr; break;
    }
}

double combine4(const Neumaier* lanes) {
    const double a = (lanes[0].sum + lanes[0].comp) + (lanes[1].sum + lanes[1].comp);
    const double b = (lanes[2].sum + lanes[2].comp) + (lanes[3].sum + lanes[3].comp);
    return a + b;
}

}  // namespace detail

namespace {

using std::complex;
using detail::Neumaier;

void cmul_scalar(complex<double>* dst, const complex<double>* phase, std::size_t n) {
    double* d = reinterpret_cast<double*>(dst);
    const double* p = reinterpret_cast<const double*>(phase);
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = d[2 * i], ai = d[2 * i + 1];
        const double br = p[2 * i], bi = p[2 * i + 1];
        d[2 * i] = ar * br - ai * bi;
        d[2 * i + 1] = ar * bi + ai * br;
    }
}

void kick_phase_scalar(complex<double>* dst, const double* cosx, double z, double scale,
                       std::size_t n) {
    double* d = reinterpret_cast<double*>(dst);
    for (std::size_t i = 0; i < n; ++i) {
        double s, c;
        detail::sincos_poly(z * cosx[i], s, c);
        const double br = c * scale;
        const double bi = s * (-scale);
        const double ar = d[2 * i], ai = d[2 * i + 1];
        d[2 * i] = ar * br - ai * bi;
        d[2 * i + 1] = ar * bi + ai * br;
    }
}

void build_phase_scalar(complex<double>* out, const double* vals, std::size_t n) {
    double* o = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < n; ++i) {
        double s, c;
        detail::sincos_poly(vals[i], s, c);
        o[2 * i] = c;
        o[2 * i + 1] = -s;
    }
}

double weighted_norm2_scalar(const complex<double>* psi, const double* w, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    Neumaier lanes[4];
    for (std::size_t i = 0; i < n; ++i) {
        const double re = p[2 * i], im = p[2 * i + 1];
        lanes[i & 3].add((re * re + im * im) * w[i]);
    }
    return detail::combine4(lanes);
}

double norm2_scalar(const complex<double>* psi, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    Neumaier lanes[4];
    for (std::size_t i = 0; i < n; ++i) {
        const double re = p[2 * i], im = p[2 * i + 1];
        lanes[i & 3].add(re * re + im * im);
    }
    return detail::combine4(lanes);
}

}  // namespace

const KernelTable& kernels_scalar() {
    static const KernelTable t{"scalar",        cmul_scalar,         kick_phase_scalar,
                               build_phase_scalar, weighted_norm2_scalar, norm2_scalar};
    return t;
}

}  // namespace kr
