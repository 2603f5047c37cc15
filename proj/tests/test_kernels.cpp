#include "qhdlab/kernels/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace qhdlab;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo = -2.0,
                               double hi = 2.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// odd lengths exercise the tail loops
const std::size_t kSizes[] = {1, 3, 4, 5, 7, 8, 13, 64, 100, 257, 1003};

} // namespace

TEST_CASE("avx2 variants match the scalar reference") {
    const kernels::Ops* avx2 = kernels::avx2_ops();
    if (!avx2) {
        MESSAGE("AVX2 unavailable on this host; dispatch falls back to scalar");
        CHECK(std::string(kernels::active_isa()) == "scalar");
        return;
    }
    const kernels::Ops& ref = kernels::scalar_ops();
    std::mt19937 rng(20240811);

    for (std::size_t n : kSizes) {
        auto a = random_vec(rng, n), b = random_vec(rng, n, 0.5, 3.0);
        std::vector<double> out_s(n), out_v(n);

        ref.mul(out_s.data(), a.data(), b.data(), n);
        avx2->mul(out_v.data(), a.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);

        ref.div(out_s.data(), a.data(), b.data(), n);
        avx2->div(out_v.data(), a.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);

        ref.sqrt_v(out_s.data(), b.data(), n);
        avx2->sqrt_v(out_v.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);

        ref.scale(out_s.data(), 1.7, a.data(), n);
        avx2->scale(out_v.data(), 1.7, a.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);

        // FMA-backed kernels may contract differently: allow a few ulps
        ref.axpby(out_s.data(), 0.3, a.data(), -1.2, b.data(), n);
        avx2->axpby(out_v.data(), 0.3, a.data(), -1.2, b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i], 1e-15));

        auto acc_s = random_vec(rng, n);
        auto acc_v = acc_s;
        ref.fmacc(acc_s.data(), a.data(), b.data(), n);
        avx2->fmacc(acc_v.data(), a.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(acc_s[i], acc_v[i], 1e-15));

        CHECK(ref.min_v(a.data(), n) == avx2->min_v(a.data(), n));
        CHECK(close(ref.sum(a.data(), n), avx2->sum(a.data(), n), 1e-13));
        CHECK(close(ref.dot(a.data(), b.data(), n), avx2->dot(a.data(), b.data(), n),
                    1e-13));
    }
}

TEST_CASE("stencil and combination kernels match") {
    const kernels::Ops* avx2 = kernels::avx2_ops();
    if (!avx2) return;
    const kernels::Ops& ref = kernels::scalar_ops();
    std::mt19937 rng(7);

    for (std::size_t n : {std::size_t(5), std::size_t(32), std::size_t(129),
                          std::size_t(1000)}) {
        auto f = random_vec(rng, n + 2); // one ghost each side
        std::vector<double> out_s(n), out_v(n);

        ref.diff_c(out_s.data(), f.data() + 1, 0.37, n);
        avx2->diff_c(out_v.data(), f.data() + 1, 0.37, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);

        ref.lap_c(out_s.data(), f.data() + 1, 2.1, n);
        avx2->lap_c(out_v.data(), f.data() + 1, 2.1, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i], 1e-15));

        auto y = random_vec(rng, n), k1 = random_vec(rng, n), k2 = random_vec(rng, n);
        auto k3 = random_vec(rng, n), k4 = random_vec(rng, n);
        ref.comb4(out_s.data(), y.data(), 0.1, k1.data(), 0.2, k2.data(), 0.2,
                  k3.data(), 0.1, k4.data(), n);
        avx2->comb4(out_v.data(), y.data(), 0.1, k1.data(), 0.2, k2.data(), 0.2,
                    k3.data(), 0.1, k4.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i], 1e-15));

        auto z = random_vec(rng, 2 * n);
        ref.abs2_c(out_s.data(), z.data(), n);
        avx2->abs2_c(out_v.data(), z.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(out_s[i] == out_v[i]);
    }
}

TEST_CASE("dispatch selects a usable backend") {
    const kernels::Ops& k = kernels::ops();
    double a[4] = {1, 2, 3, 4}, b[4] = {5, 6, 7, 8}, out[4];
    k.mul(out, a, b, 4);
    CHECK(out[3] == 32.0);
    std::string isa = kernels::active_isa();
    CHECK((isa == "avx2" || isa == "scalar"));
    if (kernels::avx2_available()) CHECK(isa == "avx2");
}
