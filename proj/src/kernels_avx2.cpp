// AVX2 variants. Each kernel replicates the scalar reference operation for
// operation: same products, same addition order, no FMA, so results are
// bit-identical (enforced by test_kernels with exact comparison).
#include <immintrin.h>

#include <cmath>

#include "kr/kernels.hpp"

namespace kr {
namespace {

using std::complex;
using detail::Neumaier;

constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

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

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }
inline __m256d bcast(double v) { return _mm256_set1_pd(v); }

// sin kernel: r + r*z*(S1 + z*(S2 + z*(S3 + z*S4) + z*w*(S5 + z*S6)))
inline __m256d sin_kernel4(__m256d r, __m256d z, __m256d w) {
    const __m256d p = add(add(bcast(S2), mul(z, add(bcast(S3), mul(z, bcast(S4))))),
                          mul(mul(z, w), add(bcast(S5), mul(z, bcast(S6)))));
    return add(r, mul(mul(r, z), add(bcast(S1), mul(z, p))));
}

// cos kernel: 1 - 0.5*z + z*(z*(C1 + z*(C2 + z*C3)) + w*w*(C4 + z*(C5 + z*C6)))
inline __m256d cos_kernel4(__m256d z, __m256d w) {
    const __m256d p = add(mul(z, add(bcast(C1), mul(z, add(bcast(C2), mul(z, bcast(C3)))))),
                          mul(mul(w, w), add(bcast(C4), mul(z, add(bcast(C5), mul(z, bcast(C6)))))));
    return add(sub(bcast(1.0), mul(bcast(0.5), z)), mul(z, p));
}

inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
    const __m256d kd =
        _mm256_round_pd(mul(x, bcast(kTwoOverPi)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = sub(x, mul(kd, bcast(kPio2Hi)));
    r = sub(r, mul(kd, bcast(kPio2Mid)));
    r = sub(r, mul(kd, bcast(kPio2Lo)));
    const __m256d z = mul(r, r);
    const __m256d w = mul(z, z);
    const __m256d sr = sin_kernel4(r, z, w);
    const __m256d cr = cos_kernel4(z, w);

    const __m128i ki32 = _mm256_cvtpd_epi32(kd);
    const __m256i ki = _mm256_cvtepi32_epi64(ki32);
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i bit0 = _mm256_and_si256(ki, one);
    const __m256i bit1 = _mm256_and_si256(_mm256_srli_epi64(ki, 1), one);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(bit0, one));
    const __m256d sgn_s = _mm256_castsi256_pd(_mm256_slli_epi64(bit1, 63));
    const __m256d sgn_c =
        _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_xor_si256(bit0, bit1), 63));

    // quadrant table: s = +-(swap ? cr : sr), c = +-(swap ? sr : cr)
    s = _mm256_xor_pd(_mm256_blendv_pd(sr, cr, swap), sgn_s);
    c = _mm256_xor_pd(_mm256_blendv_pd(cr, sr, swap), sgn_c);
}

// complex multiply of two interleaved vectors (2 complex each), addsub form:
// [ar*br - ai*bi, ar*bi + ai*br]
inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d ardup = _mm256_movedup_pd(a);
    const __m256d aidup = _mm256_permute_pd(a, 0xF);
    const __m256d bswap = _mm256_permute_pd(b, 0x5);
    return _mm256_addsub_pd(mul(ardup, b), mul(aidup, bswap));
}

// interleave [x0..x3],[y0..y3] -> [x0 y0 x1 y1], [x2 y2 x3 y3]
inline void interleave4(__m256d x, __m256d y, __m256d& lo, __m256d& hi) {
    const __m256d a = _mm256_unpacklo_pd(x, y);
    const __m256d b = _mm256_unpackhi_pd(x, y);
    lo = _mm256_permute2f128_pd(a, b, 0x20);
    hi = _mm256_permute2f128_pd(a, b, 0x31);
}

// deinterleave squares of [r0 i0 r1 i1],[r2 i2 r3 i3] -> re2, im2 in element order
inline void abs2_parts4(__m256d v1, __m256d v2, __m256d& re2, __m256d& im2) {
    const __m256d sq1 = mul(v1, v1);
    const __m256d sq2 = mul(v2, v2);
    re2 = _mm256_permute4x64_pd(_mm256_unpacklo_pd(sq1, sq2), 0xD8);
    im2 = _mm256_permute4x64_pd(_mm256_unpackhi_pd(sq1, sq2), 0xD8);
}

void cmul_avx2(complex<double>* dst, const complex<double>* phase, std::size_t n) {
    double* d = reinterpret_cast<double*>(dst);
    const double* p = reinterpret_cast<const double*>(phase);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d a = _mm256_loadu_pd(d + 2 * i);
        const __m256d b = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(d + 2 * i, cmul2(a, b));
    }
    for (; i < n; ++i) {
        const double ar = d[2 * i], ai = d[2 * i + 1];
        const double br = p[2 * i], bi = p[2 * i + 1];
        d[2 * i] = ar * br - ai * bi;
        d[2 * i + 1] = ar * bi + ai * br;
    }
}

void kick_phase_avx2(complex<double>* dst, const double* cosx, double z, double scale,
                     std::size_t n) {
    double* d = reinterpret_cast<double*>(dst);
    const __m256d zv = bcast(z);
    const __m256d sc = bcast(scale);
    const __m256d nsc = bcast(-scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s, c;
        sincos4(mul(zv, _mm256_loadu_pd(cosx + i)), s, c);
        const __m256d br = mul(c, sc);
        const __m256d bi = mul(s, nsc);
        __m256d lo, hi;
        interleave4(br, bi, lo, hi);
        const __m256d a1 = _mm256_loadu_pd(d + 2 * i);
        const __m256d a2 = _mm256_loadu_pd(d + 2 * i + 4);
        _mm256_storeu_pd(d + 2 * i, cmul2(a1, lo));
        _mm256_storeu_pd(d + 2 * i + 4, cmul2(a2, hi));
    }
    for (; i < n; ++i) {
        double s, c;
        detail::sincos_poly(z * cosx[i], s, c);
        const double br = c * scale;
        const double bi = s * (-scale);
        const double ar = d[2 * i], ai = d[2 * i + 1];
        d[2 * i] = ar * br - ai * bi;
        d[2 * i + 1] = ar * bi + ai * br;
    }
}

void build_phase_avx2(complex<double>* out, const double* vals, std::size_t n) {
    double* o = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s, c;
        sincos4(_mm256_loadu_pd(vals + i), s, c);
        const __m256d ns = _mm256_xor_pd(s, bcast(-0.0));
        __m256d lo, hi;
        interleave4(c, ns, lo, hi);
        _mm256_storeu_pd(o + 2 * i, lo);
        _mm256_storeu_pd(o + 2 * i + 4, hi);
    }
    for (; i < n; ++i) {
        double s, c;
        detail::sincos_poly(vals[i], s, c);
        o[2 * i] = c;
        o[2 * i + 1] = -s;
    }
}

struct VecNeumaier {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    inline void add(__m256d x) {
        const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        const __m256d t = _mm256_add_pd(sum, x);
        const __m256d as = _mm256_and_pd(sum, absmask);
        const __m256d ax = _mm256_and_pd(x, absmask);
        const __m256d ge = _mm256_cmp_pd(as, ax, _CMP_GE_OQ);
        const __m256d opt1 = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
        const __m256d opt2 = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(opt2, opt1, ge));
        sum = t;
    }

    void spill(Neumaier* lanes) const {
        alignas(32) double sv[4], cv[4];
        _mm256_store_pd(sv, sum);
        _mm256_store_pd(cv, comp);
        for (int l = 0; l < 4; ++l) {
            lanes[l].sum = sv[l];
            lanes[l].comp = cv[l];
        }
    }
};

double weighted_norm2_avx2(const complex<double>* psi, const double* w, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    VecNeumaier acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d re2, im2;
        abs2_parts4(_mm256_loadu_pd(p + 2 * i), _mm256_loadu_pd(p + 2 * i + 4), re2, im2);
        acc.add(mul(add(re2, im2), _mm256_loadu_pd(w + i)));
    }
    Neumaier lanes[4];
    acc.spill(lanes);
    for (; i < n; ++i) {
        const double re = p[2 * i], im = p[2 * i + 1];
        lanes[i & 3].add((re * re + im * im) * w[i]);
    }
    return detail::combine4(lanes);
}

double norm2_avx2(const complex<double>* psi, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    VecNeumaier acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d re2, im2;
        abs2_parts4(_mm256_loadu_pd(p + 2 * i), _mm256_loadu_pd(p + 2 * i + 4), re2, im2);
        acc.add(add(re2, im2));
    }
    Neumaier lanes[4];
    acc.spill(lanes);
    for (; i < n; ++i) {
        const double re = p[2 * i], im = p[2 * i + 1];
        lanes[i & 3].add(re * re + im * im);
    }
    return detail::combine4(lanes);
}

}  // namespace

const KernelTable& kernels_avx2() {
    static const KernelTable t{"avx2",          cmul_avx2,         kick_phase_avx2,
                               build_phase_avx2, weighted_norm2_avx2, norm2_avx2};
    return t;
}

}  // namespace kr
