#pragma once
#include <complex>
#include <cstddef>
#include <string>

// Hot inner loops of the propagator, in two bit-identical implementations:
// a scalar reference and an AVX2 variant, selected at runtime (CPUID, or the
// KR_KERNELS=scalar|avx2 override). Equivalence is exact, not approximate:
// both paths use the same operation order, the same polynomial sin/cos, no
// FMA, and the same fixed 4-lane Neumaier reduction contract.
namespace kr {

struct KernelTable {
    const char* name;

    // dst[i] *= phase[i] (complex, interleaved)
    void (*cmul)(std::complex<double>* dst, const std::complex<double>* phase, std::size_t n);

    // dst[i] *= scale * exp(-i * z * cosx[i])
    void (*kick_phase)(std::complex<double>* dst, const double* cosx, double z, double scale,
                       std::size_t n);

    // out[i] = exp(-i * vals[i])
    void (*build_phase)(std::complex<double>* out, const double* vals, std::size_t n);

    // sum_i |psi_i|^2 * w[i]  (4-lane Neumaier)
    double (*weighted_norm2)(const std::complex<double>* psi, const double* w, std::size_t n);

    // sum_i |psi_i|^2  (4-lane Neumaier)
    double (*norm2)(const std::complex<double>* psi, std::size_t n);
};

// Active table: AVX2 when the CPU supports it, else scalar; KR_KERNELS
// overrides. Resolved once, thread-safe.
const KernelTable& kernels();

// Specific tables (for equivalence tests).
const KernelTable& kernels_scalar();
const KernelTable& kernels_avx2();  // nullptr members if unsupported at runtime
bool avx2_supported();

namespace detail {

// Polynomial sincos shared by both paths (scalar form; the AVX2 variant
// mirrors the exact operation sequence lane-wise).
// Cody-Waite reduction by pi/2 (3-way split), fdlibm minimax kernels.
// Valid to ~1 ulp for |x| <= ~1e6; engine arguments stay far below that.
void sincos_poly(double x, double& s, double& c);

// Neumaier compensated accumulator; branchless form so the AVX2 lane code
// can replicate it exactly.
struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        const double as = sum < 0 ? -sum : sum;
        const double ax = x < 0 ? -x : x;
        comp += (as >= ax) ? ((sum - t) + x) : ((x - t) + sum);
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Fixed combination order for the 4 lanes: ((l0+l1)+(l2+l3)) of (sum+comp).
double combine4(const Neumaier* lanes);

}  // namespace detail
}  // namespace kr
