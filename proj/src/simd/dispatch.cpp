#include <cstdlib>
#include <cstring>

#include "provenir/simd/force_kernels.hpp"

namespace provenir::simd {

namespace {

constexpr Kernels kScalar{Level::Scalar, &repulsion_scalar, &limited_step_scalar};
#if defined(PROVENIR_HAVE_AVX2)
constexpr Kernels kAvx2{Level::Avx2, &repulsion_avx2, &limited_step_avx2};
#endif

bool cpu_has_avx2() noexcept {
#if defined(PROVENIR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

}  // namespace

std::string_view to_string(Level level) noexcept {
    return level == Level::Avx2 ? "avx2" : "scalar";
}

bool available(Level level) noexcept {
    return level == Level::Scalar || (level == Level::Avx2 && cpu_has_avx2());
}

Level detected_level() noexcept { return cpu_has_avx2() ? Level::Avx2 : Level::Scalar; }

Level default_level() noexcept {
    const char* requested = std::getenv("PROVENIR_SIMD");
    if (requested != nullptr && std::strcmp(requested, "scalar") == 0) return Level::Scalar;
    return detected_level();
}

const Kernels& kernels(Level level) noexcept {
#if defined(PROVENIR_HAVE_AVX2)
    if (level == Level::Avx2 && cpu_has_avx2()) return kAvx2;
#endif
    (void)level;
    return kScalar;
}

const Kernels& kernels() noexcept {
    static const Kernels& selected = kernels(default_level());
    return selected;
}

}  // namespace provenir::simd
