#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gstark/kernels.hpp"

namespace gstark {

// Residue ring Z/p^a.  Moduli are restricted to prime powers: the chain-ring
// structure is what makes Howell pivots (and hence canonical span
// certificates) well defined.
struct Modulus {
    uint32_t p = 0;
    uint32_t a = 0;
    uint32_t m = 0; // p^a

    Modulus() = default;
    Modulus(uint32_t prime, uint32_t exponent);

    bool operator==(const Modulus&) const = default;

    // p-adic valuation; val(0) = a
    uint32_t val(uint32_t x) const {
        if (x == 0) return a;
        uint32_t v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        return v;
    }

    uint32_t pow_p(uint32_t k) const {
        uint32_t r = 1;
        while (k--) r *= p;
        return r;
    }

    uint32_t add(uint32_t x, uint32_t y) const {
        uint32_t s = x + y;
        return s >= m ? s - m : s;
    }
    uint32_t sub(uint32_t x, uint32_t y) const { return x >= y ? x - y : x + m - y; }
    uint32_t mul(uint32_t x, uint32_t y) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(x) * y) % m);
    }
    uint32_t neg(uint32_t x) const { return x == 0 ? 0 : m - x; }
    bool is_unit(uint32_t x) const { return x % p != 0; }
    // inverse of a unit
    uint32_t inv(uint32_t x) const;
};

// Dense matrix over Z/p^a, row-major.  Values are immutable in spirit: the
// mutating methods are used only while building.
class ZMatrix {
public:
    ZMatrix() = default;
    ZMatrix(uint32_t rows, uint32_t cols, Modulus mod)
        : rows_(rows), cols_(cols), mod_(mod), e_(static_cast<size_t>(rows) * cols, 0) {}

    static ZMatrix identity(uint32_t n, Modulus mod) {
        ZMatrix I(n, n, mod);
        for (uint32_t i = 0; i < n; ++i) I.at(i, i) = 1;
        return I;
    }

    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }
    const Modulus& mod() const { return mod_; }

    uint32_t& at(uint32_t i, uint32_t j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    uint32_t at(uint32_t i, uint32_t j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
    uint32_t* row(uint32_t i) { return e_.data() + static_cast<size_t>(i) * cols_; }
    const uint32_t* row(uint32_t i) const { return e_.data() + static_cast<size_t>(i) * cols_; }

    bool operator==(const ZMatrix&) const = default;

    ZMatrix transposed() const;
    ZMatrix mul(const ZMatrix& rhs) const;
    std::vector<uint32_t> mul_vec(const std::vector<uint32_t>& v) const;
    ZMatrix vstack(const ZMatrix& below) const;
    bool is_zero() const;

private:
    uint32_t rows_ = 0, cols_ = 0;
    Modulus mod_;
    std::vector<uint32_t> e_;
};

// Unique Howell canonical form of the row span.  Pivots are normalized
// powers of p at strictly increasing columns, entries above a pivot p^v are
// reduced mod p^v, and the span-closure rows are included, so equal row
// spans yield identical matrices.
ZMatrix howell_form(const ZMatrix& m);

// Rows generate the right kernel {v : m v = 0}.
ZMatrix kernel(const ZMatrix& m);

// Some x with m x = b, deterministic (greedy reduction of b against the
// Howell form of the column space); nullopt if none exists.
std::optional<std::vector<uint32_t>> solve(const ZMatrix& m, const std::vector<uint32_t>& b);

// Z/p^a-length of the row span (log_p of its cardinality).
uint32_t span_length(const ZMatrix& m);

// Membership of v in the row span of the Howell form h.
bool in_rowspan_howell(const ZMatrix& h, const std::vector<uint32_t>& v);

} // namespace gstark
