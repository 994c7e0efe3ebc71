// Built with -mavx2. Nothing here may run unless dispatch.cpp confirmed AVX2.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "tdl/simd/kernels.hpp"

namespace tdl::simd {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void assign_nearest_2d_avx2(const double* xs, const double* ys, std::size_t n, const double* cx, const double* cy,
                            std::size_t k, std::int32_t* labels, double* sqdist) {
    const std::size_t vec_n = n - n % 4;
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d px = _mm256_loadu_pd(xs + i);
        const __m256d py = _mm256_loadu_pd(ys + i);
        __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
        __m256d best_label = _mm256_setzero_pd();
        for (std::size_t j = 0; j < k; ++j) {
            const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(cx[j]));
            const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(cy[j]));
            // mul + add kept separate so results match the scalar reference bit for bit
            const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d closer = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
            best = _mm256_blendv_pd(best, d, closer);
            best_label = _mm256_blendv_pd(best_label, _mm256_set1_pd(static_cast<double>(j)), closer);
        }
        _mm256_storeu_pd(sqdist + i, best);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(labels + i), _mm256_cvtpd_epi32(best_label));
    }
    for (std::size_t i = vec_n; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::int32_t label = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const double dx = xs[i] - cx[j];
            const double dy = ys[i] - cy[j];
            const double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                label = static_cast<std::int32_t>(j);
            }
        }
        labels[i] = label;
        sqdist[i] = best;
    }
}

AbsPctErrorSum abs_pct_error_sum_avx2(const double* actual, const double* forecast, std::size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t used = 0;
    const std::size_t vec_n = n - n % 4;
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d a = _mm256_loadu_pd(actual + i);
        const __m256d f = _mm256_loadu_pd(forecast + i);
        const __m256d nonzero = _mm256_cmp_pd(a, zero, _CMP_NEQ_OQ);
        // zero actuals are divided by 1 and masked out
        const __m256d denom = _mm256_blendv_pd(one, _mm256_andnot_pd(sign_mask, a), nonzero);
        const __m256d err = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(a, f));
        acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_div_pd(err, denom), nonzero));
        used += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(nonzero))));
    }
    AbsPctErrorSum out{hsum(acc), used};
    for (std::size_t i = vec_n; i < n; ++i) {
        if (actual[i] == 0.0) continue;
        out.sum += std::fabs(actual[i] - forecast[i]) / std::fabs(actual[i]);
        ++out.used;
    }
    return out;
}

double squared_error_sum_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    const std::size_t vec_n = n - n % 8;
    for (std::size_t i = 0; i < vec_n; i += 8) {
        const __m256d e0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d e1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(e0, e0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(e1, e1));
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (std::size_t i = vec_n; i < n; ++i) {
        const double e = a[i] - b[i];
        sum += e * e;
    }
    return sum;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    const std::size_t vec_n = n - n % 8;
    for (std::size_t i = 0; i < vec_n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (std::size_t i = vec_n; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

constexpr KernelTable kAvx2{Isa::avx2, assign_nearest_2d_avx2, abs_pct_error_sum_avx2, squared_error_sum_avx2,
                            dot_avx2};

}  // namespace

const KernelTable& detail::avx2_table() { return kAvx2; }

}  // namespace tdl::simd
