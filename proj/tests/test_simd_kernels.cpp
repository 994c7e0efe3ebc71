#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tdl/simd/kernels.hpp"

using namespace tdl::simd;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(a)); }

}  // namespace

TEST_CASE("scalar kernels on small inputs") {
    const auto& k = kernels_for(Isa::scalar);
    const double a[] = {1.0, 2.0, 0.0, 4.0};
    const double f[] = {1.5, 1.0, 7.0, 4.0};
    const auto ape = k.abs_pct_error_sum(a, f, 4);
    CHECK(ape.used == 3);
    CHECK(ape.sum == doctest::Approx(0.5 + 0.5 + 0.0));
    CHECK(k.squared_error_sum(a, f, 4) == doctest::Approx(0.25 + 1.0 + 49.0));
    CHECK(k.dot(a, f, 4) == doctest::Approx(1.5 + 2.0 + 16.0));

    const double xs[] = {0.0, 1.0, 0.5};
    const double ys[] = {0.0, 0.0, 0.0};
    const double cx[] = {0.0, 1.0};
    const double cy[] = {0.0, 0.0};
    std::int32_t labels[3];
    double d[3];
    k.assign_nearest_2d(xs, ys, 3, cx, cy, 2, labels, d);
    CHECK(labels[0] == 0);
    CHECK(labels[1] == 1);
    CHECK(labels[2] == 0);  // equidistant: lower id
    CHECK(d[2] == doctest::Approx(0.25));
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available; skipping");
        return;
    }
    const auto& ref = kernels_for(Isa::scalar);
    const auto& wide = kernels_for(Isa::avx2);
    std::mt19937_64 rng(2024);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1000u, 4099u}) {
        CAPTURE(n);
        auto a = uniform(rng, n, -50.0, 50.0);
        auto b = uniform(rng, n, -50.0, 50.0);
        for (std::size_t i = 0; i < n; i += 5) a[i] = 0.0;  // exercise the zero-actual mask

        const auto r1 = ref.abs_pct_error_sum(a.data(), b.data(), n);
        const auto r2 = wide.abs_pct_error_sum(a.data(), b.data(), n);
        CHECK(r1.used == r2.used);
        CHECK(close(r1.sum, r2.sum, 1e-12));
        CHECK(close(ref.squared_error_sum(a.data(), b.data(), n), wide.squared_error_sum(a.data(), b.data(), n), 1e-12));
        CHECK(close(ref.dot(a.data(), b.data(), n), wide.dot(a.data(), b.data(), n), 1e-12));

        for (std::size_t k : {1u, 2u, 3u, 4u, 5u, 9u}) {
            const auto xs = uniform(rng, n, -3.0, 3.0);
            const auto ys = uniform(rng, n, -3.0, 3.0);
            auto cx = uniform(rng, k, -3.0, 3.0);
            auto cy = uniform(rng, k, -3.0, 3.0);
            if (k > 2) {  // duplicated centroid forces a tie
                cx[2] = cx[1];
                cy[2] = cy[1];
            }
            std::vector<std::int32_t> l1(n), l2(n);
            std::vector<double> d1(n), d2(n);
            ref.assign_nearest_2d(xs.data(), ys.data(), n, cx.data(), cy.data(), k, l1.data(), d1.data());
            wide.assign_nearest_2d(xs.data(), ys.data(), n, cx.data(), cy.data(), k, l2.data(), d2.data());
            CHECK(l1 == l2);
            CHECK(d1 == d2);
        }
    }
}

TEST_CASE("dispatch can be forced") {
    const Isa before = active_isa();
    force_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    CHECK(kernels().isa == Isa::scalar);
    force_isa(before);
    CHECK(active_isa() == before);
    if (!isa_available(Isa::avx2)) CHECK_THROWS(force_isa(Isa::avx2));
    CHECK(isa_name(Isa::scalar) == "scalar");
}
