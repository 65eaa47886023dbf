#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gstark/zmod.hpp"

namespace gstark {

// R = (Z/p^a)[x_1,...,x_d]/(x_1^{e_1},...,x_d^{e_d}): a zero-dimensional
// Gorenstein local ring with maximal ideal (p, x_1,...,x_d).  The monomial
// family realizes the quotient towers J_n = (x_1^n,...,x_d^n) exactly.
struct RingSpec {
    uint32_t p = 2;
    uint32_t a = 1;
    std::vector<uint32_t> exponents; // e_i >= 1, d = exponents.size()

    bool operator==(const RingSpec&) const = default;

    uint32_t dim() const {
        uint32_t e = 1;
        for (uint32_t x : exponents) e *= x;
        return e;
    }
    uint64_t length() const { return static_cast<uint64_t>(a) * dim(); }
    // target nested under *this: same p, a' <= a, same d, e_i' <= e_i
    bool admits_quotient(const RingSpec& target) const;
    std::string str() const;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// Shared immutable ring context: monomial basis in lexicographic order
// (first variable most significant) and the truncated product table.
class Ring : public std::enable_shared_from_this<Ring> {
public:
    static RingPtr make(RingSpec spec);

    const RingSpec& spec() const { return spec_; }
    const Modulus& mod() const { return mod_; }
    uint32_t dim() const { return dim_; } // number of monomials
    uint32_t nvars() const { return static_cast<uint32_t>(spec_.exponents.size()); }

    // monomial index <-> exponent tuple
    const std::vector<uint32_t>& expo(uint32_t idx) const { return monomials_[idx]; }
    uint32_t index_of(const std::vector<uint32_t>& expo) const;
    // product of monomials i and j, or npos when truncated away
    static constexpr uint32_t npos = UINT32_MAX;
    uint32_t mono_mul(uint32_t i, uint32_t j) const { return prod_[i * dim_ + j]; }
    // index of x_k (npos when e_k == 1)
    uint32_t var_index(uint32_t k) const { return var_idx_[k]; }

private:
    explicit Ring(RingSpec spec);
    RingSpec spec_;
    Modulus mod_;
    uint32_t dim_;
    std::vector<std::vector<uint32_t>> monomials_;
    std::vector<uint32_t> prod_;
    std::vector<uint32_t> var_idx_;
};

// Element of R as a coefficient vector over the monomial basis.
class RingElem {
public:
    RingElem() = default;
    RingElem(RingPtr ring, std::vector<uint32_t> coeffs);
    static RingElem zero(const RingPtr& ring);
    static RingElem one(const RingPtr& ring);
    static RingElem scalar(const RingPtr& ring, uint32_t c);
    static RingElem monomial(const RingPtr& ring, uint32_t idx, uint32_t c = 1);

    const RingPtr& ring() const { return ring_; }
    const std::vector<uint32_t>& coeffs() const { return c_; }
    uint32_t coeff(uint32_t i) const { return c_[i]; }

    bool is_zero() const;
    bool is_unit() const; // constant coefficient prime to p
    bool operator==(const RingElem& o) const {
        return ring_->spec() == o.ring_->spec() && c_ == o.c_;
    }

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator-() const;
    RingElem scaled(uint32_t c) const;
    RingElem inverse() const; // units only

    std::string str() const;

private:
    RingPtr ring_;
    std::vector<uint32_t> c_;
};

RingElem mul(const RingElem& u, const RingElem& v);

// E x E matrix of multiplication by u on the monomial basis (column beta =
// coefficients of u * x^beta); the blow-up of ring arithmetic to Z/p^a.
ZMatrix mult_matrix(const RingElem& u);

// Ideal of R as the Howell form of its full coefficient lattice; closed
// under multiplication by every variable by construction, so equality and
// containment are certificate checks.
class IdealRep {
public:
    IdealRep() = default;
    IdealRep(RingPtr ring, ZMatrix howell_basis);

    static IdealRep zero(const RingPtr& ring);
    static IdealRep unit(const RingPtr& ring);
    static IdealRep from_generators(const RingPtr& ring, const std::vector<RingElem>& gens);

    const RingPtr& ring() const { return ring_; }
    const ZMatrix& basis() const { return basis_; }

    bool contains(const RingElem& g) const;
    bool contains(const IdealRep& other) const;
    bool is_zero() const;
    bool is_unit() const;
    uint32_t length() const; // Z/p^a-length of the lattice
    bool operator==(const IdealRep& o) const;

    std::vector<RingElem> generators() const; // basis rows as elements

    std::string str() const;

private:
    RingPtr ring_;
    ZMatrix basis_;
};

IdealRep ideal_sum(const IdealRep& a, const IdealRep& b);
IdealRep ideal_mul(const IdealRep& a, const IdealRep& b);
IdealRep ideal_pow(const IdealRep& a, uint32_t k);

// socle R[m_R] = (p^{a-1} x_1^{e_1-1} ... x_d^{e_d-1})
IdealRep socle(const RingPtr& ring);
IdealRep maximal_ideal(const RingPtr& ring);

// largest n with i contained in m_R^n; nullopt encodes infinity (zero ideal)
std::optional<uint32_t> m_adic_content(const IdealRep& i);

// Ring surjection R -> S given by reducing coefficients mod p^{a'} and
// truncating monomials with alpha_i >= e_i'.
class QuotientMap {
public:
    QuotientMap(RingPtr src, RingPtr dst);
    const RingPtr& src() const { return src_; }
    const RingPtr& dst() const { return dst_; }

    RingElem apply(const RingElem& x) const;
    IdealRep apply(const IdealRep& i) const;

private:
    RingPtr src_, dst_;
};

} // namespace gstark
