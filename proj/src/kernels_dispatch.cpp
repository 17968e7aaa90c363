#include <cstdlib>
#include <cstring>

#include "qsep/kernels.hpp"

namespace qsep::kernels {

#if defined(__x86_64__) || defined(_M_X64)

bool avx2_compiled_in() {
#if defined(QSEP_HAVE_AVX2_BUILD)
    return true;
#else
    return false;
#endif
}

#if !defined(QSEP_HAVE_AVX2_BUILD)
const Ops& avx2_ops() { return scalar_ops(); }
#endif

static bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif

namespace {

const Ops& select() {
    const char* force = std::getenv("QSEP_KERNELS");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(force, "avx2") == 0 && avx2_compiled_in() &&
            cpu_has_avx2())
            return avx2_ops();
#endif
        return scalar_ops();
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_compiled_in() && cpu_has_avx2()) return avx2_ops();
#endif
    return scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops& ops = select();
    return ops;
}

std::vector<std::string> available() {
    std::vector<std::string> names{"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_compiled_in() && cpu_has_avx2()) names.emplace_back("avx2");
#endif
    return names;
}

}  // namespace qsep::kernels
