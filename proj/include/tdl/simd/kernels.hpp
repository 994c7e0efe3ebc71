#pragma once

// Data-parallel inner loops shared by the clustering, forecasting and
// regression code. Every kernel has a scalar reference implementation; wider
// variants are picked once at startup from what the CPU reports and must
// agree with the reference (bit-exact for the assignment kernel, to
// reassociation error for the reductions).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace tdl::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct AbsPctErrorSum {
    double sum = 0.0;       // sum of |a - f| / |a| over pairs with a != 0
    std::size_t used = 0;   // pairs with a != 0
};

struct KernelTable {
    Isa isa;
    // labels[i] = argmin_j (xs[i]-cx[j])^2 + (ys[i]-cy[j])^2, lowest j on ties;
    // sqdist[i] receives the minimum.
    void (*assign_nearest_2d)(const double* xs, const double* ys, std::size_t n, const double* cx, const double* cy,
                              std::size_t k, std::int32_t* labels, double* sqdist);
    AbsPctErrorSum (*abs_pct_error_sum)(const double* actual, const double* forecast, std::size_t n);
    double (*squared_error_sum)(const double* a, const double* b, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
};

bool isa_available(Isa isa);

// Best available ISA unless overridden by force_isa() or TDL_SIMD=scalar|avx2.
Isa active_isa();

// Throws std::invalid_argument when the ISA is not available on this CPU/build.
void force_isa(Isa isa);

const KernelTable& kernels();
const KernelTable& kernels_for(Isa isa);

namespace detail {
const KernelTable& scalar_table();
#if defined(TDL_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
}  // namespace detail

// Span front-ends over the active table.

inline void assign_nearest_2d(std::span<const double> xs, std::span<const double> ys, std::span<const double> cx,
                              std::span<const double> cy, std::span<std::int32_t> labels, std::span<double> sqdist) {
    kernels().assign_nearest_2d(xs.data(), ys.data(), xs.size(), cx.data(), cy.data(), cx.size(), labels.data(),
                                sqdist.data());
}

inline AbsPctErrorSum abs_pct_error_sum(std::span<const double> actual, std::span<const double> forecast) {
    return kernels().abs_pct_error_sum(actual.data(), forecast.data(), actual.size());
}

inline double squared_error_sum(std::span<const double> a, std::span<const double> b) {
    return kernels().squared_error_sum(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}

}  // namespace tdl::simd
