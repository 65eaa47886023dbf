#pragma once

#include <cstdint>
#include <vector>

#include "gstark/modules.hpp"

namespace gstark {

uint64_t binom(uint32_t n, uint32_t k);

// Increasing r-subsets of {0..n-1} in lexicographic order.
struct WedgeBasis {
    uint32_t n = 0, r = 0;
    std::vector<std::vector<uint8_t>> tuples;

    static WedgeBasis make(uint32_t n, uint32_t r);
    uint32_t size() const { return static_cast<uint32_t>(tuples.size()); }
    uint32_t index(const std::vector<uint8_t>& tuple) const; // lexicographic rank
};

// Element of wedge^degree(base): coefficients over increasing generator
// wedges, well defined modulo the wedge relations.
struct WedgeElem {
    PresentedModule base;
    uint32_t degree = 0;
    std::vector<RingElem> coeffs;

    static WedgeElem zero(const PresentedModule& base, uint32_t degree);
};

WedgeElem operator+(const WedgeElem& a, const WedgeElem& b);
WedgeElem scale(const WedgeElem& a, const RingElem& c);

// wedge of the columns of `cols` expanded over generator wedges
// (coefficients are the maximal minors)
WedgeElem wedge_of_columns(const PresentedModule& base, const RMatrix& cols);

// (wedge^k f)(x) for f : M -> M'
WedgeElem wedge_push(const WedgeElem& x, const ModuleMap& f);

// standard presentation of wedge^r M: C(t,r) generator wedges; one relation
// (omega wedge c) per (r-1)-subset omega and relation column c
struct WedgePower {
    PresentedModule power;
    PresentedModule base;
    uint32_t degree = 0;
    WedgeBasis basis;
};
WedgePower exterior_power(const PresentedModule& m, uint32_t r);

// equality in wedge^deg(base): difference lies in the wedge relation span
bool wedge_equal(const WedgeElem& a, const WedgeElem& b);
// membership x in J * wedge^deg(base)
bool wedge_in_ideal_multiple(const WedgeElem& x, const IdealRep& j);

// Element of the exterior bidual: a relation-consistent functional on the
// generator wedges of wedge^degree(M*).
class BidualElement {
public:
    BidualElement() = default;
    BidualElement(DualPtr dual, uint32_t degree, std::vector<RingElem> values);
    static BidualElement zero(const DualPtr& dual, uint32_t degree);

    const DualPtr& dual() const { return dual_; }
    uint32_t degree() const { return degree_; }
    const std::vector<RingElem>& values() const { return values_; }
    const WedgeBasis& basis() const { return basis_; }

    bool is_zero() const;
    bool relation_consistent() const; // kills every relation of wedge^r M*
    bool operator==(const BidualElement& o) const;

    BidualElement scaled(const RingElem& c) const;
    BidualElement operator+(const BidualElement& o) const;

    // ideal generated by all values
    IdealRep value_ideal() const;

private:
    DualPtr dual_;
    uint32_t degree_ = 0;
    WedgeBasis basis_;
    std::vector<RingElem> values_;
};

// evaluate eps on a wedge of functionals given as combination columns of
// the dual generators (U: h x degree); Cauchy-Binet over stored values
RingElem evaluate(const BidualElement& eps, const RMatrix& U);

// the canonical map l_M : wedge^r M -> bidual^r M via the determinant
// pairing
BidualElement canonical_l(const DualPtr& dual, const WedgeElem& w);

// presentation of bidual^r M = (wedge^r M*)*
PresentedModule bidual_presentation(const PresentedModule& m, uint32_t r);

// pushforward along f : M -> M' (dual of wedge^r f*)
BidualElement bidual_push(const BidualElement& eps, const ModuleMap& f, const DualPtr& dual_target);

// The map of Lemma base: given F -h-> M -g-> N -> 0 exact with F free of
// rank s <= r, sends wedge^{r-s} N (tensor det F, trivialized by the
// generator order of F) to wedge^r M by lifting factors through g and
// wedging with the h-image of the F-basis.  Exactness of the input is
// verified (lengths).
WedgeElem lemma_base_map(const ModuleMap& h, const ModuleMap& g, uint32_t r, const WedgeElem& input,
                         bool verify_exactness = true);

// Cartesian square data for the transition map of Definition "map": the
// ambient module M2 mapping to coordinates S2, the kept coordinate set S1,
// and the kernel M1 of the removed coordinates, with everything needed to
// evaluate the induced map on biduals.
struct CartesianSquare {
    PresentedModule m2, m1;
    ModuleMap emb; // m1 -> m2
    DualPtr d2, d1;
    RMatrix lifts;                 // h2 x h1, column i = a lift of the i-th M1* generator
    RMatrix hfun;                  // h2 x s, removed-coordinate functionals on M2
    std::vector<uint32_t> removed; // labels, increasing
    int sign = 1;                  // det splitting sign
};

// rows of v2 are ordered by the sorted labels s2
CartesianSquare make_square(const PresentedModule& m2, const DualPtr& d2, const RMatrix& v2,
                            const std::vector<uint32_t>& s2_labels,
                            const std::vector<uint32_t>& s1_labels);

// same, but reusing a known kernel node (its lattice is verified to agree
// with the kernel computation)
CartesianSquare make_square_with(const PresentedModule& m2, const DualPtr& d2, const RMatrix& v2,
                                 const std::vector<uint32_t>& s2_labels,
                                 const std::vector<uint32_t>& s1_labels,
                                 const PresentedModule& m1, const ModuleMap& emb,
                                 const DualPtr& d1);

// eps of degree r >= |removed| on M2 maps to degree r - |removed| on M1
BidualElement phi_map(const CartesianSquare& sq, const BidualElement& eps);

// Derivation map of the Mazur-Rubin comparison: for 0 -> N -> M -h-> F
// exact with F free of rank one (principal artinian base only), contract a
// wedge by h and express the result in the generators of N.  The F factor
// is trivialized by the generator of F.
WedgeElem mr_derivation(const ModuleMap& h, const KernelResult& ker, const WedgeElem& x);

} // namespace gstark
