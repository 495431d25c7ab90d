#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kr/kernels.hpp"

namespace kr {

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

namespace {
const KernelTable& resolve() {
    const char* env = std::getenv("KR_KERNELS");
    if (env) {
        const std::string mode(env);
        if (mode == "scalar") return kernels_scalar();
        if (mode == "avx2") {
            if (!avx2_supported())
                throw std::runtime_error("KR_KERNELS=avx2 requested but CPU lacks AVX2");
            return kernels_avx2();
        }
        throw std::runtime_error("KR_KERNELS must be 'scalar' or 'avx2', got '" + mode + "'");
    }
    return avx2_supported() ? kernels_avx2() : kernels_scalar();
}
}  // namespace

const KernelTable& kernels() {
    static const KernelTable& t = resolve();
    return t;
}

}  // namespace kr
