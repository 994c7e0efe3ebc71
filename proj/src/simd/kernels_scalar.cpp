#include <cmath>
#include <limits>

#include "tdl/simd/kernels.hpp"

namespace tdl::simd {

namespace {

void assign_nearest_2d_scalar(const double* xs, const double* ys, std::size_t n, const double* cx, const double* cy,
                              std::size_t k, std::int32_t* labels, double* sqdist) {
    for (std::size_t i = 0; i < n; ++i) {
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

AbsPctErrorSum abs_pct_error_sum_scalar(const double* actual, const double* forecast, std::size_t n) {
    AbsPctErrorSum out;
    for (std::size_t i = 0; i < n; ++i) {
        if (actual[i] == 0.0) continue;
        out.sum += std::fabs(actual[i] - forecast[i]) / std::fabs(actual[i]);
        ++out.used;
    }
    return out;
}

double squared_error_sum_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = a[i] - b[i];
        sum += e * e;
    }
    return sum;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

constexpr KernelTable kScalar{Isa::scalar, assign_nearest_2d_scalar, abs_pct_error_sum_scalar,
                              squared_error_sum_scalar, dot_scalar};

}  // namespace

const KernelTable& detail::scalar_table() { return kScalar; }

}  // namespace tdl::simd
