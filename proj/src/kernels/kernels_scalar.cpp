// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against.

#include "qhdlab/kernels/kernels.hpp"

#include <cmath>

namespace qhdlab::kernels {
namespace {

void s_mul(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_div(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}

void s_sqrt(double* out, const double* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i]);
}

void s_scale(double* out, double alpha, const double* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i];
}

void s_axpby(double* out, double alpha, const double* a, double beta,
             const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void s_fmacc(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void s_diff_c(double* out, const double* f, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = s * (f[i + 1] - f[i - 1]);
}

void s_lap_c(double* out, const double* f, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = s * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
}

void s_comb4(double* out, const double* y, double w1, const double* k1,
             double w2, const double* k2, double w3, const double* k3,
             double w4, const double* k4, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + w1 * k1[i] + w2 * k2[i] + w3 * k3[i] + w4 * k4[i];
}

void s_abs2_c(double* out, const double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = z[2 * i] * z[2 * i] + z[2 * i + 1] * z[2 * i + 1];
}

double s_sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double s_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double s_min(const double* a, std::size_t n) {
    double m = a[0];
    for (std::size_t i = 1; i < n; ++i)
        if (a[i] < m) m = a[i];
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        s_mul, s_div, s_sqrt, s_scale, s_axpby, s_fmacc,
        s_diff_c, s_lap_c, s_comb4, s_abs2_c,
        s_sum, s_dot, s_min,
    };
    return table;
}

} // namespace qhdlab::kernels
