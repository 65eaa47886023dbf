#include "gstark/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace gstark::kernels {

namespace {

void axpy_scalar(uint32_t* dst, const uint32_t* src, uint32_t c, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i)
        dst[i] = static_cast<uint32_t>((dst[i] + static_cast<uint64_t>(c) * src[i]) % m);
}

void scale_scalar(uint32_t* dst, uint32_t c, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i)
        dst[i] = static_cast<uint32_t>((static_cast<uint64_t>(c) * dst[i]) % m);
}

void addv_scalar(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i) {
        uint32_t s = a[i] + b[i];
        dst[i] = s >= m ? s - m : s;
    }
}

void subv_scalar(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i) {
        uint32_t s = a[i] - b[i];
        dst[i] = a[i] < b[i] ? s + m : s;
    }
}

uint32_t dot_scalar(const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    // products < 2^40; partial sums reduced before they can overflow
    uint64_t acc = 0;
    for (size_t i = 0; i < n; ++i) {
        acc += static_cast<uint64_t>(a[i]) * b[i];
        if (acc >= (1ull << 62)) acc %= m;
    }
    return static_cast<uint32_t>(acc % m);
}

} // namespace

const Ops scalar_ops = {axpy_scalar, scale_scalar, addv_scalar, subv_scalar, dot_scalar, "scalar"};

#if defined(__x86_64__) || defined(_M_X64)

namespace {

// Reduce t (exact, < 2^53) modulo m using the precomputed reciprocal.
// floor(t/m) estimated in double may be off by one either way; fix up.
__attribute__((target("avx2,fma"))) inline __m256d reduce_pd(__m256d t, __m256d vm, __m256d vinv) {
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(t, vinv));
    __m256d r = _mm256_sub_pd(t, _mm256_mul_pd(q, vm));
    r = _mm256_sub_pd(r, _mm256_and_pd(vm, _mm256_cmp_pd(r, vm, _CMP_GE_OQ)));
    r = _mm256_add_pd(r, _mm256_and_pd(vm, _mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ)));
    return r;
}

__attribute__((target("avx2,fma"))) void axpy_avx2(uint32_t* dst, const uint32_t* src, uint32_t c,
                                               size_t n, uint32_t m) {
    const __m256d vm = _mm256_set1_pd(static_cast<double>(m));
    const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(m));
    const __m256d vc = _mm256_set1_pd(static_cast<double>(c));
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
        __m256d vs = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i)));
        __m256d t = _mm256_fmadd_pd(vc, vs, vd);
        __m128i out = _mm256_cvttpd_epi32(reduce_pd(t, vm, vinv));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), out);
    }
    for (; i < n; ++i)
        dst[i] = static_cast<uint32_t>((dst[i] + static_cast<uint64_t>(c) * src[i]) % m);
}

__attribute__((target("avx2,fma"))) void scale_avx2(uint32_t* dst, uint32_t c, size_t n, uint32_t m) {
    const __m256d vm = _mm256_set1_pd(static_cast<double>(m));
    const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(m));
    const __m256d vc = _mm256_set1_pd(static_cast<double>(c));
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
        __m128i out = _mm256_cvttpd_epi32(reduce_pd(_mm256_mul_pd(vc, vd), vm, vinv));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), out);
    }
    for (; i < n; ++i)
        dst[i] = static_cast<uint32_t>((static_cast<uint64_t>(c) * dst[i]) % m);
}

__attribute__((target("avx2,fma"))) void addv_avx2(uint32_t* dst, const uint32_t* a, const uint32_t* b,
                                               size_t n, uint32_t m) {
    const __m256i vm = _mm256_set1_epi32(static_cast<int32_t>(m));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i s = _mm256_add_epi32(va, vb);
        // s < 2m < 2^21, so signed compare is safe
        __m256i ge = _mm256_cmpgt_epi32(vm, s); // m > s ? -1 : 0
        s = _mm256_sub_epi32(s, _mm256_andnot_si256(ge, vm));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < n; ++i) {
        uint32_t s = a[i] + b[i];
        dst[i] = s >= m ? s - m : s;
    }
}

__attribute__((target("avx2,fma"))) void subv_avx2(uint32_t* dst, const uint32_t* a, const uint32_t* b,
                                               size_t n, uint32_t m) {
    const __m256i vm = _mm256_set1_epi32(static_cast<int32_t>(m));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i s = _mm256_sub_epi32(va, vb);
        __m256i neg = _mm256_cmpgt_epi32(vb, va);
        s = _mm256_add_epi32(s, _mm256_and_si256(neg, vm));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < n; ++i) {
        uint32_t s = a[i] - b[i];
        dst[i] = a[i] < b[i] ? s + m : s;
    }
}

__attribute__((target("avx2,fma"))) uint32_t dot_avx2(const uint32_t* a, const uint32_t* b, size_t n,
                                                  uint32_t m) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        // 32x32 -> 64 products of even and odd lanes; sums stay < 2^63
        __m256i lo = _mm256_mul_epu32(va, vb);
        __m256i hi = _mm256_mul_epu32(_mm256_srli_epi64(va, 32), _mm256_srli_epi64(vb, 32));
        acc = _mm256_add_epi64(acc, lo);
        acc = _mm256_add_epi64(acc, hi);
    }
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    uint64_t total = 0;
    for (uint64_t v : lanes) total = (total + v) % m;
    for (; i < n; ++i) total = (total + static_cast<uint64_t>(a[i]) * b[i]) % m;
    return static_cast<uint32_t>(total);
}

} // namespace

const Ops avx2_ops = {axpy_avx2, scale_avx2, addv_avx2, subv_avx2, dot_avx2, "avx2"};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

#endif // x86_64

namespace {

const Ops& select_ops() {
    const char* env = std::getenv("GSTARK_KERNEL");
#if defined(__x86_64__) || defined(_M_X64)
    if (env && std::strcmp(env, "scalar") == 0) return scalar_ops;
    if (env && std::strcmp(env, "avx2") == 0) return avx2_ops;
    if (cpu_has_avx2()) return avx2_ops;
#else
    (void)env;
#endif
    return scalar_ops;
}

} // namespace

const Ops& ops() {
    static const Ops& selected = select_ops();
    return selected;
}

} // namespace gstark::kernels
