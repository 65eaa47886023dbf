#include "gstark/exterior.hpp"

#include <algorithm>

namespace gstark {

uint64_t binom(uint32_t n, uint32_t k) {
    if (k > n) return 0;
    uint64_t r = 1;
    for (uint32_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

WedgeBasis WedgeBasis::make(uint32_t n, uint32_t r) {
    WedgeBasis b;
    b.n = n;
    b.r = r;
    if (r > n) return b;
    std::vector<uint8_t> t(r);
    for (uint32_t i = 0; i < r; ++i) t[i] = static_cast<uint8_t>(i);
    while (true) {
        b.tuples.push_back(t);
        uint32_t i = r;
        while (i-- > 0) {
            if (t[i] + (r - i) < n) {
                ++t[i];
                for (uint32_t j = i + 1; j < r; ++j) t[j] = static_cast<uint8_t>(t[j - 1] + 1);
                break;
            }
            if (i == 0) return b;
        }
        if (r == 0) return b; // single empty tuple
    }
}

uint32_t WedgeBasis::index(const std::vector<uint8_t>& tuple) const {
    // lexicographic rank of an increasing tuple
    uint64_t rank = 0;
    uint32_t prev = 0;
    for (uint32_t i = 0; i < r; ++i) {
        for (uint32_t v = prev; v < tuple[i]; ++v) rank += binom(n - 1 - v, r - 1 - i);
        prev = tuple[i] + 1;
    }
    return static_cast<uint32_t>(rank);
}

WedgeElem WedgeElem::zero(const PresentedModule& base, uint32_t degree) {
    WedgeElem w;
    w.base = base;
    w.degree = degree;
    w.coeffs.assign(binom(base.gens(), degree), RingElem::zero(base.ring()));
    return w;
}

WedgeElem operator+(const WedgeElem& a, const WedgeElem& b) {
    WedgeElem out = a;
    for (size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = out.coeffs[i] + b.coeffs[i];
    return out;
}

WedgeElem scale(const WedgeElem& a, const RingElem& c) {
    WedgeElem out = a;
    for (auto& x : out.coeffs) x = mul(x, c);
    return out;
}

WedgeElem wedge_of_columns(const PresentedModule& base, const RMatrix& cols) {
    WedgeElem out = WedgeElem::zero(base, cols.cols());
    WedgeBasis wb = WedgeBasis::make(base.gens(), cols.cols());
    std::vector<uint32_t> csel(cols.cols());
    for (uint32_t j = 0; j < cols.cols(); ++j) csel[j] = j;
    for (uint32_t s = 0; s < wb.size(); ++s) {
        std::vector<uint32_t> rsel(wb.tuples[s].begin(), wb.tuples[s].end());
        out.coeffs[s] = cols.submatrix(rsel, csel).det();
    }
    return out;
}

WedgeElem wedge_push(const WedgeElem& x, const ModuleMap& f) {
    WedgeElem out = WedgeElem::zero(f.target(), x.degree);
    WedgeBasis src = WedgeBasis::make(f.source().gens(), x.degree);
    WedgeBasis dst = WedgeBasis::make(f.target().gens(), x.degree);
    for (uint32_t t = 0; t < src.size(); ++t) {
        if (x.coeffs[t].is_zero()) continue;
        std::vector<uint32_t> csel(src.tuples[t].begin(), src.tuples[t].end());
        for (uint32_t s = 0; s < dst.size(); ++s) {
            std::vector<uint32_t> rsel(dst.tuples[s].begin(), dst.tuples[s].end());
            RingElem d = f.mat().submatrix(rsel, csel).det();
            if (!d.is_zero()) out.coeffs[s] = out.coeffs[s] + mul(x.coeffs[t], d);
        }
    }
    return out;
}

WedgePower exterior_power(const PresentedModule& m, uint32_t r) {
    WedgePower wp;
    wp.base = m;
    wp.degree = r;
    wp.basis = WedgeBasis::make(m.gens(), r);
    const RingPtr& R = m.ring();
    if (r > m.gens()) {
        wp.power = PresentedModule::zero(R);
        return wp;
    }
    const uint32_t nw = wp.basis.size();
    WedgeBasis lower = WedgeBasis::make(m.gens(), r == 0 ? 0 : r - 1);
    uint32_t nrel = r == 0 ? 0 : lower.size() * m.relations().cols();
    RMatrix rel(R, nw, nrel);
    if (r > 0) {
        uint32_t col = 0;
        for (uint32_t w = 0; w < lower.size(); ++w) {
            const auto& omega = lower.tuples[w];
            for (uint32_t rc = 0; rc < m.relations().cols(); ++rc, ++col) {
                for (uint32_t j = 0; j < m.gens(); ++j) {
                    if (std::find(omega.begin(), omega.end(), j) != omega.end()) continue;
                    RingElem cj = m.relations().at(j, rc);
                    if (cj.is_zero()) continue;
                    // sign: move e_j into place within omega
                    uint32_t greater = 0;
                    std::vector<uint8_t> full(omega.begin(), omega.end());
                    full.push_back(static_cast<uint8_t>(j));
                    std::sort(full.begin(), full.end());
                    for (uint8_t o : omega)
                        if (o > j) ++greater;
                    RingElem signed_c = (greater % 2) ? -cj : cj;
                    uint32_t idx = wp.basis.index(full);
                    rel.set(idx, col, rel.at(idx, col) + signed_c);
                }
            }
        }
    }
    wp.power = PresentedModule(R, nw, std::move(rel));
    return wp;
}

bool wedge_equal(const WedgeElem& a, const WedgeElem& b) {
    if (a.degree != b.degree) return false;
    WedgePower wp = exterior_power(a.base, a.degree);
    std::vector<RingElem> diff;
    for (size_t i = 0; i < a.coeffs.size(); ++i) diff.push_back(a.coeffs[i] - b.coeffs[i]);
    return wp.power.in_relations(diff);
}

bool wedge_in_ideal_multiple(const WedgeElem& x, const IdealRep& j) {
    WedgePower wp = exterior_power(x.base, x.degree);
    const RingPtr& R = x.base.ring();
    const uint32_t E = R->dim();
    const uint32_t nw = wp.basis.size();
    // lattice of J * wedge + wedge relations
    ZMatrix rows(j.basis().rows() * nw, nw * E, R->mod());
    uint32_t r = 0;
    for (uint32_t g = 0; g < j.basis().rows(); ++g)
        for (uint32_t w = 0; w < nw; ++w, ++r)
            for (uint32_t c = 0; c < E; ++c) rows.at(r, w * E + c) = j.basis().at(g, c);
    ZMatrix lat = howell_form(rows.vstack(wp.power.rel_lattice()));
    return in_rowspan_howell(lat, flatten(x.coeffs));
}

BidualElement::BidualElement(DualPtr dual, uint32_t degree, std::vector<RingElem> values)
    : dual_(std::move(dual)), degree_(degree),
      basis_(WedgeBasis::make(dual_->mod.gens(), degree)), values_(std::move(values)) {
    if (values_.size() != basis_.size())
        throw std::invalid_argument("BidualElement: wrong number of values");
}

BidualElement BidualElement::zero(const DualPtr& dual, uint32_t degree) {
    std::vector<RingElem> v(binom(dual->mod.gens(), degree), RingElem::zero(dual->base.ring()));
    return BidualElement(dual, degree, std::move(v));
}

bool BidualElement::is_zero() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const RingElem& x) { return x.is_zero(); });
}

bool BidualElement::relation_consistent() const {
    // the assignment must kill every relation (omega wedge syzygy) of
    // wedge^r M*
    if (degree_ == 0) return true;
    const PresentedModule& dm = dual_->mod;
    WedgeBasis lower = WedgeBasis::make(dm.gens(), degree_ - 1);
    for (uint32_t w = 0; w < lower.size(); ++w) {
        const auto& omega = lower.tuples[w];
        for (uint32_t rc = 0; rc < dm.relations().cols(); ++rc) {
            RingElem acc = RingElem::zero(dual_->base.ring());
            for (uint32_t j = 0; j < dm.gens(); ++j) {
                if (std::find(omega.begin(), omega.end(), j) != omega.end()) continue;
                RingElem cj = dm.relations().at(j, rc);
                if (cj.is_zero()) continue;
                uint32_t greater = 0;
                for (uint8_t o : omega)
                    if (o > j) ++greater;
                std::vector<uint8_t> full(omega.begin(), omega.end());
                full.push_back(static_cast<uint8_t>(j));
                std::sort(full.begin(), full.end());
                RingElem term = mul(cj, values_[basis_.index(full)]);
                acc = (greater % 2) ? acc - term : acc + term;
            }
            if (!acc.is_zero()) return false;
        }
    }
    return true;
}

bool BidualElement::operator==(const BidualElement& o) const {
    return degree_ == o.degree_ && values_ == o.values_;
}

BidualElement BidualElement::scaled(const RingElem& c) const {
    std::vector<RingElem> v;
    v.reserve(values_.size());
    for (const auto& x : values_) v.push_back(mul(x, c));
    return BidualElement(dual_, degree_, std::move(v));
}

BidualElement BidualElement::operator+(const BidualElement& o) const {
    std::vector<RingElem> v;
    v.reserve(values_.size());
    for (size_t i = 0; i < values_.size(); ++i) v.push_back(values_[i] + o.values_[i]);
    return BidualElement(dual_, degree_, std::move(v));
}

IdealRep BidualElement::value_ideal() const {
    std::vector<RingElem> nz;
    for (const auto& v : values_)
        if (!v.is_zero()) nz.push_back(v);
    if (nz.empty()) return IdealRep::zero(dual_->base.ring());
    return IdealRep::from_generators(dual_->base.ring(), nz);
}

RingElem evaluate(const BidualElement& eps, const RMatrix& U) {
    const RingPtr& R = eps.dual()->base.ring();
    if (U.rows() != eps.dual()->mod.gens() || U.cols() != eps.degree())
        throw std::invalid_argument("evaluate: U shape mismatch");
    RingElem acc = RingElem::zero(R);
    std::vector<uint32_t> csel(U.cols());
    for (uint32_t j = 0; j < U.cols(); ++j) csel[j] = j;
    const auto& basis = eps.basis();
    for (uint32_t s = 0; s < basis.size(); ++s) {
        if (eps.values()[s].is_zero()) continue;
        std::vector<uint32_t> rsel(basis.tuples[s].begin(), basis.tuples[s].end());
        RingElem d = U.submatrix(rsel, csel).det();
        if (!d.is_zero()) acc = acc + mul(eps.values()[s], d);
    }
    return acc;
}

BidualElement canonical_l(const DualPtr& dual, const WedgeElem& w) {
    if (!w.base.same_presentation(dual->base))
        throw std::invalid_argument("canonical_l: wedge not over the dual's base module");
    const uint32_t r = w.degree;
    WedgeBasis tb = WedgeBasis::make(dual->base.gens(), r);
    WedgeBasis sb = WedgeBasis::make(dual->mod.gens(), r);
    std::vector<RingElem> values(sb.size(), RingElem::zero(dual->base.ring()));
    for (uint32_t s = 0; s < sb.size(); ++s) {
        std::vector<uint32_t> rsel(sb.tuples[s].begin(), sb.tuples[s].end());
        RingElem acc = RingElem::zero(dual->base.ring());
        for (uint32_t t = 0; t < tb.size(); ++t) {
            if (w.coeffs[t].is_zero()) continue;
            std::vector<uint32_t> csel(tb.tuples[t].begin(), tb.tuples[t].end());
            RingElem d = dual->functionals.submatrix(rsel, csel).det();
            if (!d.is_zero()) acc = acc + mul(w.coeffs[t], d);
        }
        values[s] = acc;
    }
    return BidualElement(dual, r, std::move(values));
}

PresentedModule bidual_presentation(const PresentedModule& m, uint32_t r) {
    DualPtr d = dual_of(m);
    WedgePower wp = exterior_power(d->mod, r);
    return dual_of(wp.power)->mod;
}

BidualElement bidual_push(const BidualElement& eps, const ModuleMap& f,
                          const DualPtr& dual_target) {
    // pullback of target functionals: column j = coords of phi'_j o f in the
    // source dual generators
    const RingPtr& R = f.source().ring();
    const DualPtr& ds = eps.dual();
    const uint32_t h = ds->mod.gens();
    const uint32_t h2 = dual_target->mod.gens();
    RMatrix comp = dual_target->functionals.mul(f.mat()); // h2 x t_src
    ZMatrix lhs = blowup(ds->functionals.transposed());   // (t*E) x (h*E)
    RMatrix P(R, h, h2);
    for (uint32_t j = 0; j < h2; ++j) {
        auto sol = solve(lhs, flatten(comp.rowv(j)));
        if (!sol) throw std::logic_error("bidual_push: pullback not in dual span");
        auto cc = unflatten(R, *sol);
        for (uint32_t i = 0; i < h; ++i) P.set(i, j, cc[i]);
    }
    WedgeBasis tb = WedgeBasis::make(h2, eps.degree());
    std::vector<RingElem> values(tb.size(), RingElem::zero(R));
    for (uint32_t s = 0; s < tb.size(); ++s) {
        std::vector<uint32_t> csel(tb.tuples[s].begin(), tb.tuples[s].end());
        RMatrix U(R, h, eps.degree());
        for (uint32_t c = 0; c < eps.degree(); ++c)
            for (uint32_t i = 0; i < h; ++i) U.set(i, c, P.at(i, csel[c]));
        values[s] = evaluate(eps, U);
    }
    return BidualElement(dual_target, eps.degree(), std::move(values));
}

WedgeElem lemma_base_map(const ModuleMap& h, const ModuleMap& g, uint32_t r, const WedgeElem& input,
                         bool verify_exactness) {
    // F -h-> M -g-> N -> 0, F free of rank s
    const PresentedModule& F = h.source();
    const PresentedModule& M = h.target();
    const PresentedModule& N = g.target();
    if (!g.source().same_presentation(M))
        throw std::invalid_argument("lemma_base_map: maps do not compose");
    const uint32_t s = F.gens();
    if (F.relations().cols() != 0) throw std::invalid_argument("lemma_base_map: F must be free");
    if (s > r) throw std::invalid_argument("lemma_base_map: rank of F exceeds degree");
    if (input.degree != r - s) throw std::invalid_argument("lemma_base_map: wrong input degree");

    if (verify_exactness) {
        if (!cokernel(g).is_zero()) throw std::invalid_argument("lemma_base_map: g not surjective");
        RMatrix comp = g.mat().mul(h.mat());
        for (uint32_t j = 0; j < comp.cols(); ++j)
            if (!N.in_relations(comp.col(j)))
                throw std::invalid_argument("lemma_base_map: g o h != 0");
        // im(h) = ker(g) via lengths
        KernelResult kg = kernel_of_map(g);
        std::vector<std::vector<uint32_t>> hc;
        for (uint32_t j = 0; j < h.mat().cols(); ++j) hc.push_back(flatten(h.mat().col(j)));
        ZMatrix imlat = howell_form(
            rspan_lattice(M.ring(), hc, M.gens() * M.ring()->dim()).vstack(M.rel_lattice()));
        uint64_t im_len = span_length(imlat) - span_length(M.rel_lattice());
        if (im_len != kg.module.length())
            throw std::invalid_argument("lemma_base_map: sequence not exact at M");
    }

    // lift each N-generator through g
    const RingPtr& R = M.ring();
    ZMatrix lhs(0, 0, R->mod());
    {
        ZMatrix G = blowup(g.mat()); // (tN*E) x (tM*E)
        // augment with N's relation lattice as extra columns: g(m) = n mod L_N
        const ZMatrix& L = N.rel_lattice();
        ZMatrix aug(G.rows(), G.cols() + L.rows(), R->mod());
        for (uint32_t i = 0; i < G.rows(); ++i) {
            for (uint32_t j = 0; j < G.cols(); ++j) aug.at(i, j) = G.at(i, j);
            for (uint32_t j = 0; j < L.rows(); ++j) aug.at(i, G.cols() + j) = L.at(j, i);
        }
        lhs = std::move(aug);
    }
    const uint32_t tM = M.gens(), tN = N.gens(), E = R->dim();
    RMatrix lift(R, tM, tN);
    for (uint32_t j = 0; j < tN; ++j) {
        std::vector<uint32_t> e(static_cast<size_t>(tN) * E, 0);
        e[static_cast<size_t>(j) * E] = 1;
        auto sol = solve(lhs, e);
        if (!sol) throw std::logic_error("lemma_base_map: g is not surjective on generators");
        auto cc = unflatten(R, std::vector<uint32_t>(sol->begin(), sol->begin() + tM * E));
        for (uint32_t i = 0; i < tM; ++i) lift.set(i, j, cc[i]);
    }

    // output = (lifted input wedge) wedge (h of the F basis)
    WedgeElem out = WedgeElem::zero(M, r);
    WedgeBasis nb = WedgeBasis::make(tN, r - s);
    for (uint32_t t = 0; t < nb.size(); ++t) {
        if (input.coeffs[t].is_zero()) continue;
        RMatrix cols(R, tM, r);
        for (uint32_t c = 0; c < r - s; ++c)
            for (uint32_t i = 0; i < tM; ++i) cols.set(i, c, lift.at(i, nb.tuples[t][c]));
        for (uint32_t c = 0; c < s; ++c)
            for (uint32_t i = 0; i < tM; ++i) cols.set(i, r - s + c, h.mat().at(i, c));
        out = out + scale(wedge_of_columns(M, cols), input.coeffs[t]);
    }
    return out;
}

namespace {

// express a functional on m1 (given by its values on m1's generators) as a
// combination of the generators of d2 restricted along emb; lhs is the
// blowup of (d2.functionals * emb.mat)^T
RMatrix solve_combinations(const RingPtr& R, const ZMatrix& lhs, const RMatrix& targets) {
    // targets rows: desired value rows; returns (h2 x targets.rows())
    const uint32_t E = R->dim();
    const uint32_t h2 = lhs.cols() / E;
    RMatrix out(R, h2, targets.rows());
    for (uint32_t i = 0; i < targets.rows(); ++i) {
        auto sol = solve(lhs, flatten(targets.rowv(i)));
        if (!sol) throw std::logic_error("cartesian square: functional lift not solvable");
        auto cc = unflatten(R, *sol);
        for (uint32_t k = 0; k < h2; ++k) out.set(k, i, cc[k]);
    }
    return out;
}

CartesianSquare finish_square(const PresentedModule& m2, const DualPtr& d2, const RMatrix& v2,
                              const std::vector<uint32_t>& s2_labels,
                              const std::vector<uint32_t>& s1_labels, PresentedModule m1,
                              ModuleMap emb, DualPtr d1) {
    CartesianSquare sq;
    sq.m2 = m2;
    sq.m1 = std::move(m1);
    sq.emb = std::move(emb);
    sq.d2 = d2;
    sq.d1 = std::move(d1);

    for (uint32_t lbl : s2_labels)
        if (std::find(s1_labels.begin(), s1_labels.end(), lbl) == s1_labels.end())
            sq.removed.push_back(lbl);

    const RingPtr& R = m2.ring();
    // lifts of M1* generators through the restriction M2* -> M1*
    ZMatrix lhs = blowup(d2->functionals.mul(sq.emb.mat()).transposed());
    sq.lifts = solve_combinations(R, lhs, sq.d1->functionals);

    // removed-coordinate functionals of v2 expressed in M2* generators
    RMatrix rows(R, static_cast<uint32_t>(sq.removed.size()), m2.gens());
    for (uint32_t i = 0; i < sq.removed.size(); ++i) {
        uint32_t pos = static_cast<uint32_t>(
            std::find(s2_labels.begin(), s2_labels.end(), sq.removed[i]) - s2_labels.begin());
        for (uint32_t j = 0; j < m2.gens(); ++j) rows.set(i, j, v2.at(pos, j));
    }
    sq.hfun = solve_combinations(R, blowup(d2->functionals.transposed()), rows);

    // sign of the permutation (removed..., kept...) against sorted s2
    uint32_t inversions = 0;
    for (uint32_t c : sq.removed)
        for (uint32_t b : s1_labels)
            if (b < c) ++inversions;
    sq.sign = (inversions % 2) ? -1 : 1;
    return sq;
}

} // namespace

CartesianSquare make_square(const PresentedModule& m2, const DualPtr& d2, const RMatrix& v2,
                            const std::vector<uint32_t>& s2_labels,
                            const std::vector<uint32_t>& s1_labels) {
    const RingPtr& R = m2.ring();
    std::vector<uint32_t> removed_pos;
    for (uint32_t i = 0; i < s2_labels.size(); ++i)
        if (std::find(s1_labels.begin(), s1_labels.end(), s2_labels[i]) == s1_labels.end())
            removed_pos.push_back(i);
    RMatrix vr(R, static_cast<uint32_t>(removed_pos.size()), m2.gens());
    for (uint32_t i = 0; i < removed_pos.size(); ++i)
        for (uint32_t j = 0; j < m2.gens(); ++j) vr.set(i, j, v2.at(removed_pos[i], j));
    ModuleMap to_removed(m2, PresentedModule::free_module(R, vr.rows()), vr);
    KernelResult k = kernel_of_map(to_removed);
    DualPtr d1 = dual_of(k.module);
    return finish_square(m2, d2, v2, s2_labels, s1_labels, k.module, k.embedding, d1);
}

CartesianSquare make_square_with(const PresentedModule& m2, const DualPtr& d2, const RMatrix& v2,
                                 const std::vector<uint32_t>& s2_labels,
                                 const std::vector<uint32_t>& s1_labels,
                                 const PresentedModule& m1, const ModuleMap& emb,
                                 const DualPtr& d1) {
    // verify the supplied node is the kernel of the removed coordinates
    const RingPtr& R = m2.ring();
    std::vector<uint32_t> removed_pos;
    for (uint32_t i = 0; i < s2_labels.size(); ++i)
        if (std::find(s1_labels.begin(), s1_labels.end(), s2_labels[i]) == s1_labels.end())
            removed_pos.push_back(i);
    RMatrix vr(R, static_cast<uint32_t>(removed_pos.size()), m2.gens());
    for (uint32_t i = 0; i < removed_pos.size(); ++i)
        for (uint32_t j = 0; j < m2.gens(); ++j) vr.set(i, j, v2.at(removed_pos[i], j));
    ModuleMap to_removed(m2, PresentedModule::free_module(R, vr.rows()), vr);
    KernelResult k = kernel_of_map(to_removed);
    // same submodule of m2: compare R-span lattices of the embedded images
    const uint32_t width = m2.gens() * R->dim();
    std::vector<std::vector<uint32_t>> a, b;
    for (uint32_t j = 0; j < emb.mat().cols(); ++j) a.push_back(flatten(emb.mat().col(j)));
    for (uint32_t j = 0; j < k.embedding.mat().cols(); ++j)
        b.push_back(flatten(k.embedding.mat().col(j)));
    ZMatrix la = howell_form(rspan_lattice(R, a, width).vstack(m2.rel_lattice()));
    ZMatrix lb = howell_form(rspan_lattice(R, b, width).vstack(m2.rel_lattice()));
    if (!(la == lb)) throw std::invalid_argument("cartesian square: node is not the kernel");
    return finish_square(m2, d2, v2, s2_labels, s1_labels, m1, emb, d1);
}

BidualElement phi_map(const CartesianSquare& sq, const BidualElement& eps) {
    const uint32_t s = static_cast<uint32_t>(sq.removed.size());
    if (eps.degree() < s) throw std::invalid_argument("phi_map: degree below rank difference");
    const uint32_t rout = eps.degree() - s;
    const RingPtr& R = sq.m2.ring();
    const uint32_t h2 = sq.d2->mod.gens();
    WedgeBasis ob = WedgeBasis::make(sq.d1->mod.gens(), rout);
    std::vector<RingElem> values(ob.size(), RingElem::zero(R));
    for (uint32_t t = 0; t < ob.size(); ++t) {
        RMatrix U(R, h2, eps.degree());
        for (uint32_t c = 0; c < rout; ++c) {
            uint32_t gi = ob.tuples[t][c];
            for (uint32_t i = 0; i < h2; ++i) U.set(i, c, sq.lifts.at(i, gi));
        }
        for (uint32_t c = 0; c < s; ++c)
            for (uint32_t i = 0; i < h2; ++i) U.set(i, rout + c, sq.hfun.at(i, c));
        RingElem v = evaluate(eps, U);
        values[t] = sq.sign < 0 ? -v : v;
    }
    return BidualElement(sq.d1, rout, std::move(values));
}

WedgeElem mr_derivation(const ModuleMap& h, const KernelResult& ker, const WedgeElem& x) {
    const PresentedModule& M = h.source();
    const RingPtr& R = M.ring();
    if (R->nvars() != 0)
        throw std::invalid_argument("mr_derivation: base ring must be principal artinian");
    if (h.target().gens() != 1 || h.target().relations().cols() != 0)
        throw std::invalid_argument("mr_derivation: F must be free of rank one");
    const uint32_t s = x.degree;
    if (s == 0) throw std::invalid_argument("mr_derivation: degree must be positive");

    // contraction by h into wedge^{s-1} M (F trivialized by its generator)
    WedgeElem contracted = WedgeElem::zero(M, s - 1);
    WedgeBasis wb = WedgeBasis::make(M.gens(), s);
    WedgeBasis lb = WedgeBasis::make(M.gens(), s - 1);
    for (uint32_t t = 0; t < wb.size(); ++t) {
        if (x.coeffs[t].is_zero()) continue;
        const auto& tup = wb.tuples[t];
        for (uint32_t i = 0; i < s; ++i) {
            RingElem hv = h.mat().at(0, tup[i]);
            if (hv.is_zero()) continue;
            std::vector<uint8_t> rest;
            for (uint32_t j = 0; j < s; ++j)
                if (j != i) rest.push_back(tup[j]);
            RingElem term = mul(x.coeffs[t], hv);
            if (i % 2) term = -term;
            uint32_t idx = lb.index(rest);
            contracted.coeffs[idx] = contracted.coeffs[idx] + term;
        }
    }

    // rewrite in the generators of N = ker h: solve against the images of
    // N-generator wedges modulo the wedge relations of M
    const PresentedModule& N = ker.module;
    WedgeBasis nb = WedgeBasis::make(N.gens(), s - 1);
    WedgePower wpM = exterior_power(M, s - 1);
    const uint32_t E = R->dim();
    const uint32_t wM = wpM.basis.size();
    ZMatrix lhs(wM * E, nb.size() * E + wpM.power.rel_lattice().rows(), R->mod());
    for (uint32_t c = 0; c < nb.size(); ++c) {
        RMatrix cols(R, M.gens(), s - 1);
        for (uint32_t j = 0; j < s - 1; ++j)
            for (uint32_t i = 0; i < M.gens(); ++i)
                cols.set(i, j, ker.embedding.mat().at(i, nb.tuples[c][j]));
        auto img = flatten(wedge_of_columns(M, cols).coeffs);
        // blow the single column into E columns (monomial multiples) --
        // trivial here since d = 0 (E = 1), kept general for safety
        for (uint32_t beta = 0; beta < E; ++beta) {
            for (uint32_t w = 0; w < wM; ++w)
                for (uint32_t i = 0; i < E; ++i) {
                    uint32_t tt = R->mono_mul(i, beta);
                    if (tt != Ring::npos && img[w * E + i])
                        lhs.at(w * E + tt, c * E + beta) =
                            R->mod().add(lhs.at(w * E + tt, c * E + beta), img[w * E + i]);
                }
        }
    }
    const ZMatrix& L = wpM.power.rel_lattice();
    for (uint32_t j = 0; j < L.rows(); ++j)
        for (uint32_t i = 0; i < wM * E; ++i) lhs.at(i, nb.size() * E + j) = L.at(j, i);

    auto sol = solve(lhs, flatten(contracted.coeffs));
    if (!sol) throw std::domain_error("mr_derivation: contraction not expressible in ker h");
    WedgeElem out = WedgeElem::zero(N, s - 1);
    auto cc = unflatten(R, std::vector<uint32_t>(sol->begin(), sol->begin() + nb.size() * E));
    for (uint32_t c = 0; c < nb.size(); ++c) out.coeffs[c] = cc[c];
    return out;
}

} // namespace gstark
