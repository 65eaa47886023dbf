#pragma once

#include <cstddef>
#include <cstdint>

// Vector kernels for arithmetic modulo m (m = p^a < 2^20).  All row
// operations of the exact linear algebra reduce to these.  A scalar
// reference implementation always exists; an AVX2 variant is selected at
// runtime when the CPU supports it.  The two are equivalence-tested.

namespace gstark::kernels {

struct Ops {
    // dst[i] = (dst[i] + c * src[i]) mod m
    void (*axpy)(uint32_t* dst, const uint32_t* src, uint32_t c, size_t n, uint32_t m);
    // dst[i] = (c * dst[i]) mod m
    void (*scale)(uint32_t* dst, uint32_t c, size_t n, uint32_t m);
    // dst[i] = (a[i] + b[i]) mod m
    void (*addv)(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m);
    // dst[i] = (a[i] - b[i]) mod m
    void (*subv)(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m);
    // sum(a[i] * b[i]) mod m
    uint32_t (*dot)(const uint32_t* a, const uint32_t* b, size_t n, uint32_t m);
    const char* name;
};

// Scalar reference kernels (uint64 arithmetic, plain %).
extern const Ops scalar_ops;

#if defined(__x86_64__) || defined(_M_X64)
// AVX2 kernels; products are computed exactly in double precision
// (m < 2^20 keeps every intermediate below 2^53).
extern const Ops avx2_ops;
bool cpu_has_avx2();
#endif

// Dispatched at first use.  Environment variable GSTARK_KERNEL=scalar|avx2
// overrides the choice (used by the equivalence tests).
const Ops& ops();

} // namespace gstark::kernels
