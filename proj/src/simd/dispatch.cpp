#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tdl/simd/kernels.hpp"

namespace tdl::simd {

namespace {

bool cpu_has_avx2() {
#if defined(TDL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("TDL_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return Isa::scalar;
        if (want == "avx2" && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{&kernels_for(detect())};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("SIMD ISA not available: " + std::string(isa_name(isa)));
#if defined(TDL_HAVE_AVX2)
    if (isa == Isa::avx2) return detail::avx2_table();
#endif
    return detail::scalar_table();
}

Isa active_isa() { return active_table().load()->isa; }

void force_isa(Isa isa) { active_table().store(&kernels_for(isa)); }

const KernelTable& kernels() { return *active_table().load(); }

}  // namespace tdl::simd
