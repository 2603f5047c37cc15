// Runtime kernel selection: AVX2+FMA when the CPU has it, scalar otherwise.
// QHDLAB_SIMD=scalar|avx2 forces a backend (requesting avx2 on hardware
// without it falls back to scalar).

#include "qhdlab/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qhdlab::kernels {

const Ops* avx2_ops_impl(); // defined in kernels_avx2.cpp

namespace {

bool cpu_has_avx2_fma() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Selection {
    const Ops* table;
    const char* name;
};

Selection select() {
    const Ops* avx2 = avx2_ops_impl();
    bool want_avx2 = avx2 != nullptr && cpu_has_avx2_fma();
    if (const char* env = std::getenv("QHDLAB_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
        // any other value keeps the autodetected choice
    }
    if (want_avx2) return {avx2, "avx2"};
    return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

} // namespace

const Ops& ops() { return *selection().table; }

bool avx2_available() { return avx2_ops_impl() != nullptr && cpu_has_avx2_fma(); }

const Ops* avx2_ops() { return avx2_available() ? avx2_ops_impl() : nullptr; }

const char* active_isa() { return selection().name; }

} // namespace qhdlab::kernels
