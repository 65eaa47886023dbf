#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gstark/exterior.hpp"
#include "gstark/rng.hpp"

namespace gstark {

// Synthetic Selmer datum: a free top module H_top = R^{r+N} together with
// one localization matrix loc : H_top -> W = R^N (row q is the localization
// at the abstract prime q, each W_q identified with R once and for all).
// Every Selmer-theoretic object of the engine is a kernel or cokernel of
// rows of loc.
struct SelmerInstance {
    RingPtr ring;
    uint32_t rank_r = 0;             // core rank
    std::vector<std::string> primes; // abstract labels, size N
    RMatrix loc;                     // N x (r+N)

    uint32_t n_primes() const { return static_cast<uint32_t>(primes.size()); }
    uint32_t top_rank() const { return rank_r + n_primes(); }
};

struct InstanceParams {
    RingSpec ring;
    uint32_t rank_r = 1;
    uint32_t n_primes = 2;
    uint32_t density_pct = 50; // chance (percent) that an entry is a non-unit
};

// deterministic in the seed
SelmerInstance random_instance(uint64_t seed, const InstanceParams& p);

// the same abstract instance with the identification W_q = R rescaled by a
// unit per row
SelmerInstance rescale_rows(const SelmerInstance& inst, const std::vector<RingElem>& units);

SelmerInstance reduce_instance(const SelmerInstance& inst, const QuotientMap& q);

// subsets of primes as bitmasks
using Subset = uint32_t;

std::vector<uint32_t> subset_labels(Subset s, uint32_t n);

// All per-subset data derived from one instance: the relaxed modules
// H_S = ker(loc rows outside S), their duals, the dual-Selmer duals
// D_S = coker(loc rows outside S), and the transition squares.
class InstanceContext {
public:
    explicit InstanceContext(SelmerInstance inst);

    const SelmerInstance& instance() const { return inst_; }
    const RingPtr& ring() const { return inst_.ring; }
    uint32_t n() const { return inst_.n_primes(); }
    uint32_t rank() const { return inst_.rank_r; }
    Subset full() const { return (1u << n()) - 1; }

    struct Node {
        PresentedModule H;
        ModuleMap emb; // H -> H_top
        DualPtr dual;
        PresentedModule D;
    };
    const Node& node(Subset s) const;
    const PresentedModule& h_top() const { return h_top_; }

    // D_S = 0; the full set always qualifies
    bool is_core_vertex(Subset s) const { return node(s).D.is_zero(); }

    // one-step square from parent = child + {q} down to child (cached)
    const CartesianSquare& square_to(Subset child, uint32_t removed_prime) const;
    // one-shot square removing everything in parent minus child
    CartesianSquare make_general_square(Subset parent, Subset child) const;

    // embedding H_child -> H_parent solved through H_top
    RMatrix embed_into(Subset child, Subset parent) const;

private:
    SelmerInstance inst_;
    PresentedModule h_top_;
    mutable std::vector<std::unique_ptr<Node>> nodes_;
    mutable std::map<std::pair<Subset, uint32_t>, std::unique_ptr<CartesianSquare>> squares_;
    RMatrix loc_on(Subset s, const ModuleMap& emb) const; // rows of s composed with emb
};

// Stark system: one bidual class per subset, transition-compatible.  The
// whole system is the image of its top class (free rank one).
struct StarkSystem {
    RingElem unit;
    std::map<Subset, BidualElement> classes;
};

StarkSystem stark_from_top(const InstanceContext& ctx, const RingElem& unit);

// transition along an explicit removal order (for ordering-independence
// tests); the canonical chain removes the largest label first
BidualElement transition_chain(const InstanceContext& ctx, Subset from, const BidualElement& top,
                               const std::vector<uint32_t>& removal_order);

// I_i = sum over |S| = i of the value ideal of the class at S; the unit
// ideal for i > N by the Fitting convention
IdealRep ideal_I(const InstanceContext& ctx, const StarkSystem& sys, uint32_t i);

IdealRep fitting_of_dual_selmer(const InstanceContext& ctx, uint32_t i);

struct ControlOutcome {
    bool pass = true;
    uint32_t failed_i = 0;
    IdealRep lhs, rhs;
};
ControlOutcome verify_control(const InstanceContext& ctx, const StarkSystem& sys);

struct ThetaOutcome {
    bool applicable = false; // found/verified a split free rank-r submodule
    bool pass = false;
    RingElem theta;
    bool eq_class = false; // eps_1 = l(theta c_1 ^ ... ^ c_r)
    bool eq_fitt = false;  // theta R = Fitt_0(D_empty)
};
// basis columns are in H_empty generator coordinates
ThetaOutcome theta_of(const InstanceContext& ctx, const StarkSystem& sys, const RMatrix& basis);

// push the top class through the quotient and regenerate
StarkSystem reduce_system(const StarkSystem& sys, const QuotientMap& q,
                          const InstanceContext& dst_ctx);

// ---- Mazur-Rubin comparison layer (principal artinian base) ----

// a wedge class carried as coeff * (wedge of basis columns), the basis
// spanning a free direct summand of H_S (maintained by the transitions)
struct WedgeClass {
    RMatrix basis;
    RingElem coeff;
};
struct WedgeSystem {
    RingElem unit;
    std::map<Subset, WedgeClass> classes;
};

WedgeSystem wedge_system_from_top(const InstanceContext& ctx, const RingElem& unit);

// C_S = (-1)^{mu(S)} l_S (x) j_S with mu(S) = binom(r+|S|, 2)
BidualElement comparison_C_class(const InstanceContext& ctx, const WedgeClass& wc, Subset s);
StarkSystem comparison_C(const InstanceContext& ctx, const WedgeSystem& ws);

// order of vanishing of the layer |S| = t (nullopt = infinity)
std::optional<uint32_t> partial_phi(const InstanceContext& ctx, const WedgeSystem& ws, uint32_t t);

} // namespace gstark
