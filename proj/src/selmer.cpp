#include "gstark/selmer.hpp"

#include <algorithm>

namespace gstark {

namespace {

RingElem random_elem_with_density(Rng& rng, const RingPtr& R, uint32_t density_pct) {
    const Modulus& mod = R->mod();
    std::vector<uint32_t> c(R->dim());
    for (auto& x : c) x = rng.below32(mod.m);
    bool want_non_unit = rng.below(100) < density_pct;
    if (want_non_unit) {
        c[0] = mod.p * rng.below32(mod.m / mod.p); // constant term in (p)
    } else {
        uint32_t u = 1 + rng.below32(mod.m - 1);
        while (!mod.is_unit(u)) u = 1 + rng.below32(mod.m - 1);
        c[0] = u;
    }
    return RingElem(R, std::move(c));
}

} // namespace

SelmerInstance random_instance(uint64_t seed, const InstanceParams& p) {
    SelmerInstance inst;
    inst.ring = Ring::make(p.ring);
    inst.rank_r = p.rank_r;
    Rng rng(seed);
    for (uint32_t q = 0; q < p.n_primes; ++q) inst.primes.push_back("q" + std::to_string(q + 1));
    inst.loc = RMatrix(inst.ring, p.n_primes, p.rank_r + p.n_primes);
    for (uint32_t i = 0; i < p.n_primes; ++i)
        for (uint32_t j = 0; j < inst.top_rank(); ++j)
            inst.loc.set(i, j, random_elem_with_density(rng, inst.ring, p.density_pct));
    return inst;
}

SelmerInstance rescale_rows(const SelmerInstance& inst, const std::vector<RingElem>& units) {
    if (units.size() != inst.n_primes())
        throw std::invalid_argument("rescale_rows: one unit per prime required");
    SelmerInstance out = inst;
    out.loc = RMatrix(inst.ring, inst.loc.rows(), inst.loc.cols());
    for (uint32_t i = 0; i < inst.loc.rows(); ++i) {
        if (!units[i].is_unit()) throw std::invalid_argument("rescale_rows: non-unit factor");
        for (uint32_t j = 0; j < inst.loc.cols(); ++j)
            out.loc.set(i, j, mul(units[i], inst.loc.at(i, j)));
    }
    return out;
}

SelmerInstance reduce_instance(const SelmerInstance& inst, const QuotientMap& q) {
    SelmerInstance out;
    out.ring = q.dst();
    out.rank_r = inst.rank_r;
    out.primes = inst.primes;
    out.loc = inst.loc.mapped(q);
    return out;
}

std::vector<uint32_t> subset_labels(Subset s, uint32_t n) {
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < n; ++q)
        if (s & (1u << q)) out.push_back(q);
    return out;
}

InstanceContext::InstanceContext(SelmerInstance inst)
    : inst_(std::move(inst)), h_top_(PresentedModule::free_module(inst_.ring, inst_.top_rank())),
      nodes_(size_t(1) << inst_.n_primes()) {
    if (inst_.loc.rows() != inst_.n_primes() || inst_.loc.cols() != inst_.top_rank())
        throw std::invalid_argument("SelmerInstance: loc must be N x (r+N)");
}

const InstanceContext::Node& InstanceContext::node(Subset s) const {
    if (s > full()) throw std::invalid_argument("subset out of range");
    if (nodes_[s]) return *nodes_[s];
    auto nd = std::make_unique<Node>();
    const RingPtr& R = inst_.ring;
    std::vector<uint32_t> outside;
    for (uint32_t q = 0; q < n(); ++q)
        if (!(s & (1u << q))) outside.push_back(q);
    if (outside.empty()) {
        nd->H = h_top_;
        nd->emb = ModuleMap::identity(h_top_);
        nd->D = PresentedModule::zero(R);
    } else {
        RMatrix vr(R, static_cast<uint32_t>(outside.size()), inst_.top_rank());
        for (uint32_t i = 0; i < outside.size(); ++i)
            for (uint32_t j = 0; j < inst_.top_rank(); ++j)
                vr.set(i, j, inst_.loc.at(outside[i], j));
        ModuleMap f(h_top_, PresentedModule::free_module(R, vr.rows()), vr);
        KernelResult k = kernel_of_map(f);
        nd->H = k.module;
        nd->emb = k.embedding;
        nd->D = PresentedModule(R, vr.rows(), vr);
    }
    nd->dual = dual_of(nd->H);
    nodes_[s] = std::move(nd);
    return *nodes_[s];
}

RMatrix InstanceContext::loc_on(Subset s, const ModuleMap& emb) const {
    auto labels = subset_labels(s, n());
    RMatrix rows(inst_.ring, static_cast<uint32_t>(labels.size()), inst_.top_rank());
    for (uint32_t i = 0; i < labels.size(); ++i)
        for (uint32_t j = 0; j < inst_.top_rank(); ++j)
            rows.set(i, j, inst_.loc.at(labels[i], j));
    return rows.mul(emb.mat());
}

RMatrix InstanceContext::embed_into(Subset child, Subset parent) const {
    const Node& nc = node(child);
    const Node& np = node(parent);
    const RingPtr& R = inst_.ring;
    const uint32_t E = R->dim();
    ZMatrix lhs = blowup(np.emb.mat()); // h_top free, no relation columns needed
    RMatrix out(R, np.H.gens(), nc.H.gens());
    for (uint32_t c = 0; c < nc.H.gens(); ++c) {
        auto sol = solve(lhs, flatten(nc.emb.mat().col(c)));
        if (!sol) throw std::logic_error("embed_into: child not inside parent");
        auto cc = unflatten(R, std::vector<uint32_t>(sol->begin(),
                                                     sol->begin() + np.H.gens() * E));
        for (uint32_t i = 0; i < np.H.gens(); ++i) out.set(i, c, cc[i]);
    }
    return out;
}

const CartesianSquare& InstanceContext::square_to(Subset child, uint32_t removed_prime) const {
    auto key = std::make_pair(child, removed_prime);
    auto it = squares_.find(key);
    if (it != squares_.end()) return *it->second;
    Subset parent = child | (1u << removed_prime);
    if (parent == child) throw std::invalid_argument("square_to: prime already present");
    const Node& np = node(parent);
    const Node& nc = node(child);
    ModuleMap emb(nc.H, np.H, embed_into(child, parent));
    auto sq = std::make_unique<CartesianSquare>(
        make_square_with(np.H, np.dual, loc_on(parent, np.emb), subset_labels(parent, n()),
                         subset_labels(child, n()), nc.H, emb, nc.dual));
    auto [pos, ok] = squares_.emplace(key, std::move(sq));
    (void)ok;
    return *pos->second;
}

CartesianSquare InstanceContext::make_general_square(Subset parent, Subset child) const {
    if ((child & parent) != child) throw std::invalid_argument("child must be inside parent");
    const Node& np = node(parent);
    const Node& nc = node(child);
    ModuleMap emb(nc.H, np.H, embed_into(child, parent));
    return make_square_with(np.H, np.dual, loc_on(parent, np.emb), subset_labels(parent, n()),
                            subset_labels(child, n()), nc.H, emb, nc.dual);
}

StarkSystem stark_from_top(const InstanceContext& ctx, const RingElem& unit) {
    if (!unit.is_unit()) throw std::invalid_argument("stark_from_top: unit required");
    StarkSystem sys;
    sys.unit = unit;
    const Subset top = ctx.full();
    const auto& tn = ctx.node(top);
    auto topwedge = wedge_of_columns(tn.H, RMatrix::identity(ctx.ring(), tn.H.gens()));
    sys.classes.emplace(top, canonical_l(tn.dual, topwedge).scaled(unit));

    // every other class via its canonical chain: the immediate parent adds
    // back the smallest missing prime (largest primes were removed first)
    for (uint32_t size = ctx.n(); size-- > 0;) {
        for (Subset s = 0; s <= ctx.full(); ++s) {
            if (static_cast<uint32_t>(__builtin_popcount(s)) != size) continue;
            uint32_t qmin = 0;
            while (s & (1u << qmin)) ++qmin;
            Subset parent = s | (1u << qmin);
            const auto& sq = ctx.square_to(s, qmin);
            sys.classes.emplace(s, phi_map(sq, sys.classes.at(parent)));
        }
    }
    return sys;
}

BidualElement transition_chain(const InstanceContext& ctx, Subset from, const BidualElement& top,
                               const std::vector<uint32_t>& removal_order) {
    BidualElement cur = top;
    Subset s = from;
    for (uint32_t q : removal_order) {
        if (!(s & (1u << q))) throw std::invalid_argument("transition_chain: prime not present");
        Subset child = s & ~(1u << q);
        cur = phi_map(ctx.square_to(child, q), cur);
        s = child;
    }
    return cur;
}

IdealRep ideal_I(const InstanceContext& ctx, const StarkSystem& sys, uint32_t i) {
    if (i > ctx.n()) return IdealRep::unit(ctx.ring()); // Fitting convention
    IdealRep acc = IdealRep::zero(ctx.ring());
    for (const auto& [s, cls] : sys.classes) {
        if (static_cast<uint32_t>(__builtin_popcount(s)) != i) continue;
        acc = ideal_sum(acc, cls.value_ideal());
    }
    return acc;
}

IdealRep fitting_of_dual_selmer(const InstanceContext& ctx, uint32_t i) {
    return fitting_ideal(ctx.node(0).D, i);
}

ControlOutcome verify_control(const InstanceContext& ctx, const StarkSystem& sys) {
    ControlOutcome out;
    for (uint32_t i = 0; i <= ctx.n(); ++i) {
        IdealRep lhs = ideal_I(ctx, sys, i);
        IdealRep rhs = fitting_of_dual_selmer(ctx, i);
        if (!(lhs == rhs)) {
            out.pass = false;
            out.failed_i = i;
            out.lhs = lhs;
            out.rhs = rhs;
            return out;
        }
    }
    return out;
}

ThetaOutcome theta_of(const InstanceContext& ctx, const StarkSystem& sys, const RMatrix& basis) {
    ThetaOutcome out;
    const RingPtr& R = ctx.ring();
    const uint32_t r = ctx.rank();
    const auto& nd = ctx.node(0);
    if (basis.cols() != r) return out;
    const BidualElement& eps = sys.classes.at(0);

    // split-freeness certificate: functionals dual to the basis columns
    const uint32_t h = nd.dual->mod.gens();
    const uint32_t E = R->dim();
    RMatrix vals = nd.dual->functionals.mul(basis); // h x r
    ZMatrix lhs = blowup(vals.transposed());        // (r*E) x (h*E)
    RMatrix Pi(R, h, r);
    for (uint32_t i = 0; i < r; ++i) {
        std::vector<uint32_t> target(static_cast<size_t>(r) * E, 0);
        target[static_cast<size_t>(i) * E] = 1;
        auto sol = solve(lhs, target);
        if (!sol) return out; // not a split free submodule
        auto cc = unflatten(R, *sol);
        for (uint32_t k = 0; k < h; ++k) Pi.set(k, i, cc[k]);
    }
    out.applicable = true;

    out.theta = evaluate(eps, Pi);
    BidualElement expected = canonical_l(nd.dual, wedge_of_columns(nd.H, basis)).scaled(out.theta);
    out.eq_class = (expected == eps);
    IdealRep thetaI = out.theta.is_zero() ? IdealRep::zero(R)
                                          : IdealRep::from_generators(R, {out.theta});
    out.eq_fitt = (thetaI == fitting_of_dual_selmer(ctx, 0));
    out.pass = out.eq_class && out.eq_fitt;
    return out;
}

StarkSystem reduce_system(const StarkSystem& sys, const QuotientMap& q,
                          const InstanceContext& dst_ctx) {
    return stark_from_top(dst_ctx, q.apply(sys.unit));
}

// ---- comparison layer ----

WedgeSystem wedge_system_from_top(const InstanceContext& ctx, const RingElem& unit) {
    if (ctx.ring()->nvars() != 0)
        throw std::invalid_argument("wedge systems require a principal artinian base");
    WedgeSystem ws;
    ws.unit = unit;
    const Subset top = ctx.full();
    WedgeClass wc;
    wc.basis = RMatrix::identity(ctx.ring(), ctx.node(top).H.gens());
    wc.coeff = unit;
    ws.classes.emplace(top, std::move(wc));

    const Modulus& mod = ctx.ring()->mod();
    for (uint32_t size = ctx.n(); size-- > 0;) {
        for (Subset s = 0; s <= ctx.full(); ++s) {
            if (static_cast<uint32_t>(__builtin_popcount(s)) != size) continue;
            uint32_t qmin = 0;
            while (s & (1u << qmin)) ++qmin;
            Subset parent = s | (1u << qmin);
            const WedgeClass& pc = ws.classes.at(parent);
            const auto& np = ctx.node(parent);
            const auto& sq = ctx.square_to(s, qmin);

            // h = localization at qmin restricted to H_parent
            auto plabels = subset_labels(parent, ctx.n());
            uint32_t pos = 0;
            while (plabels[pos] != qmin) ++pos; // 0-based position in parent
            RMatrix hrow(ctx.ring(), 1, np.H.gens());
            {
                RMatrix lp = ctx.instance().loc;
                RMatrix comp(ctx.ring(), 1, ctx.instance().top_rank());
                for (uint32_t j = 0; j < ctx.instance().top_rank(); ++j)
                    comp.set(0, j, lp.at(qmin, j));
                hrow = comp.mul(np.emb.mat());
            }

            const uint32_t k = pc.basis.cols();
            std::vector<RingElem> f;
            for (uint32_t i = 0; i < k; ++i) {
                RingElem acc = RingElem::zero(ctx.ring());
                for (uint32_t g = 0; g < np.H.gens(); ++g)
                    acc = acc + mul(hrow.at(0, g), pc.basis.at(g, i));
                f.push_back(acc);
            }

            WedgeClass child;
            uint32_t i0 = k;
            uint32_t best = mod.a + 1;
            for (uint32_t i = 0; i < k; ++i) {
                if (f[i].is_zero()) continue;
                uint32_t v = mod.val(f[i].coeff(0));
                if (v < best) {
                    best = v;
                    i0 = i;
                }
            }
            if (i0 == k) {
                // h kills the whole basis: the class dies, the first k-1
                // columns still span a free submodule of the kernel
                child.coeff = RingElem::zero(ctx.ring());
                RMatrix cols(ctx.ring(), np.H.gens(), k ? k - 1 : 0);
                for (uint32_t c = 0; c + 1 < k; ++c)
                    for (uint32_t g = 0; g < np.H.gens(); ++g)
                        cols.set(g, c, pc.basis.at(g, c));
                child.basis = cols;
            } else {
                uint32_t pv = mod.pow_p(best);
                uint32_t unit_part = f[i0].coeff(0) / pv;
                uint32_t inv_unit = mod.inv(unit_part);
                RMatrix cols(ctx.ring(), np.H.gens(), k - 1);
                uint32_t cidx = 0;
                for (uint32_t i = 0; i < k; ++i) {
                    if (i == i0) continue;
                    uint32_t factor = mod.mul(f[i].coeff(0) / pv, inv_unit);
                    for (uint32_t g = 0; g < np.H.gens(); ++g)
                        cols.set(g, cidx,
                                 pc.basis.at(g, i) - pc.basis.at(g, i0).scaled(factor));
                    ++cidx;
                }
                child.basis = cols;
                // sign: (-1)^{pos} for the det splitting, (-1)^{i0} for
                // moving the pivot factor to the end (both 0-based)
                RingElem c = mul(pc.coeff, f[i0]);
                if ((pos + i0) % 2) c = -c;
                child.coeff = c;
            }

            // rewrite the basis columns in H_child coordinates
            const RingPtr& R = ctx.ring();
            const uint32_t E = R->dim();
            const auto& nc = ctx.node(s);
            ZMatrix lhs(np.H.gens() * E,
                        nc.H.gens() * E + np.H.rel_lattice().rows(), R->mod());
            {
                ZMatrix B = blowup(sq.emb.mat());
                for (uint32_t i = 0; i < B.rows(); ++i)
                    for (uint32_t j = 0; j < B.cols(); ++j) lhs.at(i, j) = B.at(i, j);
                const ZMatrix& L = np.H.rel_lattice();
                for (uint32_t j = 0; j < L.rows(); ++j)
                    for (uint32_t i = 0; i < B.rows(); ++i)
                        lhs.at(i, B.cols() + j) = L.at(j, i);
            }
            RMatrix nb(R, nc.H.gens(), child.basis.cols());
            for (uint32_t c = 0; c < child.basis.cols(); ++c) {
                auto sol = solve(lhs, flatten(child.basis.col(c)));
                if (!sol) throw std::logic_error("wedge transition: column not in kernel");
                auto cc = unflatten(R, std::vector<uint32_t>(sol->begin(),
                                                             sol->begin() + nc.H.gens() * E));
                for (uint32_t g = 0; g < nc.H.gens(); ++g) nb.set(g, c, cc[g]);
            }
            child.basis = std::move(nb);
            ws.classes.emplace(s, std::move(child));
        }
    }
    return ws;
}

BidualElement comparison_C_class(const InstanceContext& ctx, const WedgeClass& wc, Subset s) {
    const auto& nd = ctx.node(s);
    uint32_t k = ctx.rank() + static_cast<uint32_t>(__builtin_popcount(s));
    RingElem c = wc.coeff;
    uint64_t mu = k ? static_cast<uint64_t>(k) * (k - 1) / 2 : 0;
    if (mu % 2) c = -c;
    return canonical_l(nd.dual, wedge_of_columns(nd.H, wc.basis)).scaled(c);
}

StarkSystem comparison_C(const InstanceContext& ctx, const WedgeSystem& ws) {
    StarkSystem sys;
    sys.unit = ws.unit;
    for (const auto& [s, wc] : ws.classes) sys.classes.emplace(s, comparison_C_class(ctx, wc, s));
    return sys;
}

std::optional<uint32_t> partial_phi(const InstanceContext& ctx, const WedgeSystem& ws, uint32_t t) {
    const Modulus& mod = ctx.ring()->mod();
    std::optional<uint32_t> best;
    bool all_zero = true;
    for (const auto& [s, wc] : ws.classes) {
        if (static_cast<uint32_t>(__builtin_popcount(s)) != t) continue;
        if (wc.coeff.is_zero()) continue;
        all_zero = false;
        uint32_t v = mod.val(wc.coeff.coeff(0));
        if (!best || v < *best) best = v;
    }
    if (all_zero) return std::nullopt;
    return best;
}

} // namespace gstark
