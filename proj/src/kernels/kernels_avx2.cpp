// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma in its own TU and
// only reachable through the runtime dispatch in dispatch.cpp, so the rest
// of the binary stays baseline x86-64.
//
// Tail elements are handled with the scalar expressions; reductions use a
// 4-lane accumulator folded at the end, so their rounding differs from the
// scalar reference by reassociation only.

#include "qhdlab/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#include <cmath>

namespace qhdlab::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(m, m);
    return _mm_cvtsd_f64(_mm_min_sd(m, sh));
}

void a_mul(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(va, vb));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void a_div(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_div_pd(va, vb));
    }
    for (; i < n; ++i) out[i] = a[i] / b[i];
}

void a_sqrt(double* out, const double* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_loadu_pd(a + i)));
    for (; i < n; ++i) out[i] = std::sqrt(a[i]);
}

void a_scale(double* out, double alpha, const double* a, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(a + i)));
    for (; i < n; ++i) out[i] = alpha * a[i];
}

void a_axpby(double* out, double alpha, const double* a, double beta,
             const double* b, std::size_t n) {
    __m256d valpha = _mm256_set1_pd(alpha);
    __m256d vbeta = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i,
                         _mm256_fmadd_pd(valpha, va, _mm256_mul_pd(vbeta, vb)));
    }
    for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void a_fmacc(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vo = _mm256_loadu_pd(out + i);
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, vb, vo));
    }
    for (; i < n; ++i) out[i] += a[i] * b[i];
}

void a_diff_c(double* out, const double* f, double s, std::size_t n) {
    __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d fp = _mm256_loadu_pd(f + i + 1);
        __m256d fm = _mm256_loadu_pd(f + i - 1);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_sub_pd(fp, fm)));
    }
    for (; i < n; ++i) out[i] = s * (f[i + 1] - f[i - 1]);
}

void a_lap_c(double* out, const double* f, double s, std::size_t n) {
    __m256d vs = _mm256_set1_pd(s);
    __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d fp = _mm256_loadu_pd(f + i + 1);
        __m256d fc = _mm256_loadu_pd(f + i);
        __m256d fm = _mm256_loadu_pd(f + i - 1);
        __m256d t = _mm256_fnmadd_pd(two, fc, _mm256_add_pd(fp, fm));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, t));
    }
    for (; i < n; ++i) out[i] = s * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
}

void a_comb4(double* out, const double* y, double w1, const double* k1,
             double w2, const double* k2, double w3, const double* k3,
             double w4, const double* k4, std::size_t n) {
    __m256d v1 = _mm256_set1_pd(w1);
    __m256d v2 = _mm256_set1_pd(w2);
    __m256d v3 = _mm256_set1_pd(w3);
    __m256d v4 = _mm256_set1_pd(w4);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(y + i);
        acc = _mm256_fmadd_pd(v1, _mm256_loadu_pd(k1 + i), acc);
        acc = _mm256_fmadd_pd(v2, _mm256_loadu_pd(k2 + i), acc);
        acc = _mm256_fmadd_pd(v3, _mm256_loadu_pd(k3 + i), acc);
        acc = _mm256_fmadd_pd(v4, _mm256_loadu_pd(k4 + i), acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i)
        out[i] = y[i] + w1 * k1[i] + w2 * k2[i] + w3 * k3[i] + w4 * k4[i];
}

void a_abs2_c(double* out, const double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d z0 = _mm256_loadu_pd(z + 2 * i);      // re0 im0 re1 im1
        __m256d z1 = _mm256_loadu_pd(z + 2 * i + 4);  // re2 im2 re3 im3
        __m256d s0 = _mm256_mul_pd(z0, z0);
        __m256d s1 = _mm256_mul_pd(z1, z1);
        // hadd yields |z0| |z2| |z1| |z3|; permute back to natural order
        __m256d h = _mm256_hadd_pd(s0, s1);
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; i < n; ++i)
        out[i] = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
}

double a_sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i];
    return r;
}

double a_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double a_min(const double* a, std::size_t n) {
    if (n < 8) {
        double m = a[0];
        for (std::size_t i = 1; i < n; ++i)
            if (a[i] < m) m = a[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(a);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(a + i));
    double m = hmin(acc);
    for (; i < n; ++i)
        if (a[i] < m) m = a[i];
    return m;
}

} // namespace

const Ops* avx2_ops_impl() {
    static const Ops table = {
        a_mul, a_div, a_sqrt, a_scale, a_axpby, a_fmacc,
        a_diff_c, a_lap_c, a_comb4, a_abs2_c,
        a_sum, a_dot, a_min,
    };
    return &table;
}

} // namespace qhdlab::kernels

#else

namespace qhdlab::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
} // namespace qhdlab::kernels

#endif
