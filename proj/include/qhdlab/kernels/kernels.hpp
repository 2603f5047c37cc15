#pragma once

// Data-parallel array kernels shared by the solvers and diagnostics.
//
// Every kernel exists in a scalar reference form and, on x86-64 hardware
// with AVX2+FMA, in a vectorized form. The active implementation is chosen
// once at startup from CPUID and can be forced with the environment
// variable QHDLAB_SIMD=scalar|avx2. All variants are equivalence-tested
// against the scalar reference.
//
// Conventions: `out` may alias an input for the pointwise kernels;
// stencil kernels (diff_c, lap_c) read f[i-1..i+1], so `f` must point into
// storage with valid neighbors on both sides of [0, n).

#include <cstddef>

namespace qhdlab::kernels {

struct Ops {
    // pointwise
    void (*mul)(double* out, const double* a, const double* b, std::size_t n);
    void (*div)(double* out, const double* a, const double* b, std::size_t n);
    void (*sqrt_v)(double* out, const double* a, std::size_t n);
    void (*scale)(double* out, double alpha, const double* a, std::size_t n);
    // out = alpha*a + beta*b
    void (*axpby)(double* out, double alpha, const double* a, double beta,
                  const double* b, std::size_t n);
    // out += a*b
    void (*fmacc)(double* out, const double* a, const double* b, std::size_t n);
    // out[i] = s*(f[i+1] - f[i-1])
    void (*diff_c)(double* out, const double* f, double s, std::size_t n);
    // out[i] = s*(f[i+1] - 2f[i] + f[i-1])
    void (*lap_c)(double* out, const double* f, double s, std::size_t n);
    // out = y + w1*k1 + w2*k2 + w3*k3 + w4*k4
    void (*comb4)(double* out, const double* y, double w1, const double* k1,
                  double w2, const double* k2, double w3, const double* k3,
                  double w4, const double* k4, std::size_t n);
    // out[i] = z[2i]^2 + z[2i+1]^2 for interleaved complex z
    void (*abs2_c)(double* out, const double* z, std::size_t n);
    // reductions
    double (*sum)(const double* a, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*min_v)(const double* a, std::size_t n);
};

// Active implementation (dispatch decided on first call).
const Ops& ops();

// Concrete variants, for equivalence tests and explicit selection.
const Ops& scalar_ops();
bool avx2_available();          // CPU supports AVX2+FMA and the build has it
const Ops* avx2_ops();          // nullptr when unavailable
const char* active_isa();       // "scalar" or "avx2"

} // namespace qhdlab::kernels
