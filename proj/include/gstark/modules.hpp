#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gstark/rings.hpp"

namespace gstark {

// Dense matrix over R, row-major; entries stored as flat coefficient blocks.
class RMatrix {
public:
    RMatrix() = default;
    RMatrix(RingPtr ring, uint32_t rows, uint32_t cols);
    static RMatrix identity(const RingPtr& ring, uint32_t n);

    const RingPtr& ring() const { return ring_; }
    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    RingElem at(uint32_t i, uint32_t j) const;
    void set(uint32_t i, uint32_t j, const RingElem& v);
    std::vector<RingElem> col(uint32_t j) const;
    std::vector<RingElem> rowv(uint32_t i) const;

    RMatrix mul(const RMatrix& rhs) const;
    std::vector<RingElem> mul_col(const std::vector<RingElem>& v) const;
    RMatrix hstack(const RMatrix& right) const;
    RMatrix submatrix(const std::vector<uint32_t>& rows, const std::vector<uint32_t>& cols) const;
    RMatrix transposed() const;
    RMatrix mapped(const QuotientMap& q) const;
    bool operator==(const RMatrix& o) const;

    // determinant by Laplace DP over row subsets (square matrices)
    RingElem det() const;

private:
    RingPtr ring_;
    uint32_t rows_ = 0, cols_ = 0;
    std::vector<uint32_t> e_; // (i*cols+j)*E + k

    friend ZMatrix blowup(const RMatrix& m);
};

// coefficient vector of an element of R^t (generator-major blocks)
std::vector<uint32_t> flatten(const std::vector<RingElem>& v);
std::vector<RingElem> unflatten(const RingPtr& ring, const std::vector<uint32_t>& flat);

// the Z/p^a-linear action of an R-matrix on coefficient vectors
ZMatrix blowup(const RMatrix& m);

// M = coker(R^s -> R^t); relations are the columns.  The coefficient
// lattice of the relation span and its linear membership certificate are
// computed once and shared.
class PresentedModule {
public:
    PresentedModule() = default;
    PresentedModule(RingPtr ring, uint32_t gens, RMatrix relations);
    static PresentedModule free_module(RingPtr ring, uint32_t rank);
    static PresentedModule zero(RingPtr ring);

    const RingPtr& ring() const { return d_->ring; }
    uint32_t gens() const { return d_->gens; }
    const RMatrix& relations() const { return d_->relations; }
    // Howell form of the Z-span of all monomial multiples of relation columns
    const ZMatrix& rel_lattice() const { return d_->lattice; }
    // rows D with: v in rel_lattice  <=>  D v = 0
    const ZMatrix& rel_conditions() const { return d_->conditions; }

    uint64_t length() const { return d_->length; }
    bool is_zero() const { return d_->length == 0; }
    bool in_relations(const std::vector<RingElem>& v) const;

    bool same_presentation(const PresentedModule& o) const { return d_ == o.d_; }

private:
    struct Data {
        RingPtr ring;
        uint32_t gens;
        RMatrix relations;
        ZMatrix lattice;
        ZMatrix conditions;
        uint64_t length;
    };
    std::shared_ptr<const Data> d_;
};

// R-linear map between presented modules; well-definedness (images of
// source relations land in the target relation span) is checked on
// construction.
class ModuleMap {
public:
    ModuleMap() = default;
    ModuleMap(PresentedModule source, PresentedModule target, RMatrix mat);
    static ModuleMap identity(const PresentedModule& m);

    const PresentedModule& source() const { return source_; }
    const PresentedModule& target() const { return target_; }
    const RMatrix& mat() const { return mat_; }

    std::vector<RingElem> apply(const std::vector<RingElem>& v) const;
    ModuleMap compose(const ModuleMap& inner) const; // this o inner

private:
    PresentedModule source_, target_;
    RMatrix mat_;
};

uint64_t length(const PresentedModule& m);

// Hom_R(M, N): a presentation plus the generators as explicit matrices.
struct HomModule {
    PresentedModule mod;
    std::vector<RMatrix> gens; // target.gens x source.gens each
};
HomModule hom_module(const PresentedModule& m, const PresentedModule& n);

// M* = Hom(M, R) with its generators as functionals: F[i][j] = phi_i(g_j).
// Matlis duality over the Gorenstein base makes this length-preserving.
struct DualModule {
    PresentedModule base;
    PresentedModule mod;
    RMatrix functionals; // h x t
};
using DualPtr = std::shared_ptr<const DualModule>;
DualPtr dual_of(const PresentedModule& m);

// evaluation of a functional (coordinates w.r.t. dual generators) on an
// element of the base module
RingElem eval_functional(const DualModule& d, const std::vector<RingElem>& func_coords,
                         const std::vector<RingElem>& elem);

struct KernelResult {
    PresentedModule module;
    ModuleMap embedding; // module -> source of f
};
KernelResult kernel_of_map(const ModuleMap& f);

PresentedModule cokernel(const ModuleMap& f);

// Fitt_i(M): ideal of (t-i)-minors of the relation matrix; unit for i >= t,
// zero when there are not enough columns.
IdealRep fitting_ideal(const PresentedModule& m, uint32_t i);

IdealRep annihilator(const PresentedModule& m);

PresentedModule tensor_quotient(const PresentedModule& m, const QuotientMap& q);

// minimal number of generators (Nakayama pruning of the standard generators)
uint32_t min_gens(const PresentedModule& m);
bool is_free_of_rank(const PresentedModule& m, uint32_t k);

// f is an isomorphism iff it is surjective between modules of equal finite
// length
bool is_isomorphism(const ModuleMap& f);

// the canonical map M -> (M*)* as a ModuleMap (for the double-duality check)
ModuleMap double_dual_map(const PresentedModule& m, const DualPtr& d, const DualPtr& dd);

// Prune flat generator vectors to an irredundant R-generating set modulo a
// base lattice; returns indices kept, in order.
std::vector<uint32_t> prune_generators(const RingPtr& ring,
                                       const std::vector<std::vector<uint32_t>>& gens,
                                       const ZMatrix& base_lattice);

// rows: all monomial multiples of the given flat vectors (the Z-lattice of
// their R-span)
ZMatrix rspan_lattice(const RingPtr& ring, const std::vector<std::vector<uint32_t>>& vecs,
                      uint32_t width);

} // namespace gstark
