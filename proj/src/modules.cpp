#include "gstark/modules.hpp"

#include <algorithm>

namespace gstark {

RMatrix::RMatrix(RingPtr ring, uint32_t rows, uint32_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      e_(static_cast<size_t>(rows) * cols * ring_->dim(), 0) {}

RMatrix RMatrix::identity(const RingPtr& ring, uint32_t n) {
    RMatrix out(ring, n, n);
    for (uint32_t i = 0; i < n; ++i) out.set(i, i, RingElem::one(ring));
    return out;
}

RingElem RMatrix::at(uint32_t i, uint32_t j) const {
    const uint32_t E = ring_->dim();
    size_t off = (static_cast<size_t>(i) * cols_ + j) * E;
    return RingElem(ring_, std::vector<uint32_t>(e_.begin() + off, e_.begin() + off + E));
}

void RMatrix::set(uint32_t i, uint32_t j, const RingElem& v) {
    const uint32_t E = ring_->dim();
    size_t off = (static_cast<size_t>(i) * cols_ + j) * E;
    std::copy(v.coeffs().begin(), v.coeffs().end(), e_.begin() + off);
}

std::vector<RingElem> RMatrix::col(uint32_t j) const {
    std::vector<RingElem> out;
    out.reserve(rows_);
    for (uint32_t i = 0; i < rows_; ++i) out.push_back(at(i, j));
    return out;
}

std::vector<RingElem> RMatrix::rowv(uint32_t i) const {
    std::vector<RingElem> out;
    out.reserve(cols_);
    for (uint32_t j = 0; j < cols_; ++j) out.push_back(at(i, j));
    return out;
}

RMatrix RMatrix::mul(const RMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("RMatrix::mul shape mismatch");
    RMatrix out(ring_, rows_, rhs.cols_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < rhs.cols_; ++j) {
            RingElem acc = RingElem::zero(ring_);
            for (uint32_t k = 0; k < cols_; ++k) acc = acc + gstark::mul(at(i, k), rhs.at(k, j));
            out.set(i, j, acc);
        }
    return out;
}

std::vector<RingElem> RMatrix::mul_col(const std::vector<RingElem>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("RMatrix::mul_col shape mismatch");
    std::vector<RingElem> out;
    out.reserve(rows_);
    for (uint32_t i = 0; i < rows_; ++i) {
        RingElem acc = RingElem::zero(ring_);
        for (uint32_t k = 0; k < cols_; ++k) acc = acc + gstark::mul(at(i, k), v[k]);
        out.push_back(std::move(acc));
    }
    return out;
}

RMatrix RMatrix::hstack(const RMatrix& right) const {
    if (rows_ != right.rows_) throw std::invalid_argument("RMatrix::hstack shape mismatch");
    RMatrix out(ring_, rows_, cols_ + right.cols_);
    for (uint32_t i = 0; i < rows_; ++i) {
        for (uint32_t j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
        for (uint32_t j = 0; j < right.cols_; ++j) out.set(i, cols_ + j, right.at(i, j));
    }
    return out;
}

RMatrix RMatrix::submatrix(const std::vector<uint32_t>& rows,
                           const std::vector<uint32_t>& cols) const {
    RMatrix out(ring_, static_cast<uint32_t>(rows.size()), static_cast<uint32_t>(cols.size()));
    for (uint32_t i = 0; i < rows.size(); ++i)
        for (uint32_t j = 0; j < cols.size(); ++j) out.set(i, j, at(rows[i], cols[j]));
    return out;
}

RMatrix RMatrix::transposed() const {
    RMatrix out(ring_, cols_, rows_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

RMatrix RMatrix::mapped(const QuotientMap& q) const {
    RMatrix out(q.dst(), rows_, cols_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < cols_; ++j) out.set(i, j, q.apply(at(i, j)));
    return out;
}

bool RMatrix::operator==(const RMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ring_->spec() == o.ring_->spec() && e_ == o.e_;
}

RingElem RMatrix::det() const {
    if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
    const uint32_t n = rows_;
    if (n == 0) return RingElem::one(ring_);
    // expand column by column over used-row masks
    std::vector<RingElem> dp(size_t(1) << n, RingElem::zero(ring_));
    dp[0] = RingElem::one(ring_);
    for (uint32_t j = 0; j < n; ++j) {
        std::vector<RingElem> next(size_t(1) << n, RingElem::zero(ring_));
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<uint32_t>(__builtin_popcount(mask)) != j) continue;
            if (dp[mask].is_zero()) continue;
            for (uint32_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) continue;
                RingElem a = at(i, j);
                if (a.is_zero()) continue;
                RingElem term = gstark::mul(dp[mask], a);
                // parity of inversions added: used rows above i
                if (__builtin_popcount(mask >> (i + 1)) & 1) term = -term;
                uint32_t m2 = mask | (1u << i);
                next[m2] = next[m2] + term;
            }
        }
        dp.swap(next);
    }
    return dp[(size_t(1) << n) - 1];
}

std::vector<uint32_t> flatten(const std::vector<RingElem>& v) {
    std::vector<uint32_t> out;
    if (v.empty()) return out;
    out.reserve(v.size() * v[0].coeffs().size());
    for (const auto& x : v) out.insert(out.end(), x.coeffs().begin(), x.coeffs().end());
    return out;
}

std::vector<RingElem> unflatten(const RingPtr& ring, const std::vector<uint32_t>& flat) {
    const uint32_t E = ring->dim();
    std::vector<RingElem> out;
    out.reserve(flat.size() / E);
    for (size_t off = 0; off < flat.size(); off += E)
        out.emplace_back(ring, std::vector<uint32_t>(flat.begin() + off, flat.begin() + off + E));
    return out;
}

ZMatrix blowup(const RMatrix& m) {
    const RingPtr& R = m.ring();
    const uint32_t E = R->dim();
    ZMatrix out(m.rows() * E, m.cols() * E, R->mod());
    for (uint32_t i = 0; i < m.rows(); ++i)
        for (uint32_t j = 0; j < m.cols(); ++j) {
            // block = multiplication matrix of entry (i,j)
            for (uint32_t src = 0; src < E; ++src) {
                uint32_t c = m.e_[(static_cast<size_t>(i) * m.cols() + j) * E + src];
                if (c == 0) continue;
                for (uint32_t beta = 0; beta < E; ++beta) {
                    uint32_t t = R->mono_mul(src, beta);
                    if (t != Ring::npos)
                        out.at(i * E + t, j * E + beta) =
                            R->mod().add(out.at(i * E + t, j * E + beta), c);
                }
            }
        }
    return out;
}

ZMatrix rspan_lattice(const RingPtr& ring, const std::vector<std::vector<uint32_t>>& vecs,
                      uint32_t width) {
    const uint32_t E = ring->dim();
    ZMatrix rows(static_cast<uint32_t>(vecs.size()) * E, width, ring->mod());
    uint32_t r = 0;
    for (const auto& v : vecs) {
        if (v.size() != width) throw std::invalid_argument("rspan_lattice: width mismatch");
        for (uint32_t alpha = 0; alpha < E; ++alpha, ++r) {
            // x^alpha * v, blockwise
            for (uint32_t b = 0; b * E < width; ++b)
                for (uint32_t i = 0; i < E; ++i) {
                    uint32_t c = v[b * E + i];
                    if (c == 0) continue;
                    uint32_t t = ring->mono_mul(i, alpha);
                    if (t != Ring::npos)
                        rows.at(r, b * E + t) = ring->mod().add(rows.at(r, b * E + t), c);
                }
        }
    }
    return rows;
}

PresentedModule::PresentedModule(RingPtr ring, uint32_t gens, RMatrix relations) {
    if (relations.rows() != gens) throw std::invalid_argument("relations must have gens rows");
    auto d = std::make_shared<Data>();
    d->ring = std::move(ring);
    d->gens = gens;
    d->relations = std::move(relations);
    const uint32_t E = d->ring->dim();
    std::vector<std::vector<uint32_t>> cols;
    for (uint32_t j = 0; j < d->relations.cols(); ++j) cols.push_back(flatten(d->relations.col(j)));
    d->lattice = howell_form(rspan_lattice(d->ring, cols, gens * E));
    d->conditions = kernel(d->lattice.rows() ? d->lattice
                                             : ZMatrix(0, gens * E, d->ring->mod()));
    d->length = static_cast<uint64_t>(d->ring->mod().a) * gens * E - span_length(d->lattice);
    d_ = std::move(d);
}

PresentedModule PresentedModule::free_module(RingPtr ring, uint32_t rank) {
    RMatrix rel(ring, rank, 0);
    return PresentedModule(std::move(ring), rank, std::move(rel));
}

PresentedModule PresentedModule::zero(RingPtr ring) { return free_module(std::move(ring), 0); }

bool PresentedModule::in_relations(const std::vector<RingElem>& v) const {
    return in_rowspan_howell(d_->lattice, flatten(v));
}

ModuleMap::ModuleMap(PresentedModule source, PresentedModule target, RMatrix mat)
    : source_(std::move(source)), target_(std::move(target)), mat_(std::move(mat)) {
    if (mat_.rows() != target_.gens() || mat_.cols() != source_.gens())
        throw std::invalid_argument("ModuleMap: matrix shape mismatch");
    for (uint32_t j = 0; j < source_.relations().cols(); ++j)
        if (!target_.in_relations(mat_.mul_col(source_.relations().col(j))))
            throw std::invalid_argument("ModuleMap: not well defined on relations");
}

ModuleMap ModuleMap::identity(const PresentedModule& m) {
    return ModuleMap(m, m, RMatrix::identity(m.ring(), m.gens()));
}

std::vector<RingElem> ModuleMap::apply(const std::vector<RingElem>& v) const {
    return mat_.mul_col(v);
}

ModuleMap ModuleMap::compose(const ModuleMap& inner) const {
    return ModuleMap(inner.source(), target_, mat_.mul(inner.mat()));
}

uint64_t length(const PresentedModule& m) { return m.length(); }

std::vector<uint32_t> prune_generators(const RingPtr& ring,
                                       const std::vector<std::vector<uint32_t>>& gens,
                                       const ZMatrix& base_lattice) {
    if (gens.empty()) return {};
    const uint32_t width = static_cast<uint32_t>(gens[0].size());
    std::vector<uint32_t> kept;

    auto span_of = [&](const std::vector<uint32_t>& idx) {
        std::vector<std::vector<uint32_t>> vs;
        for (uint32_t i : idx) vs.push_back(gens[i]);
        ZMatrix lat = rspan_lattice(ring, vs, width);
        if (base_lattice.rows()) lat = lat.vstack(base_lattice);
        return howell_form(lat);
    };

    // forward: accept what is not already spanned
    ZMatrix cur = base_lattice.rows() ? howell_form(base_lattice)
                                      : ZMatrix(0, width, ring->mod());
    for (uint32_t i = 0; i < gens.size(); ++i) {
        if (cur.rows() && in_rowspan_howell(cur, gens[i])) continue;
        if (!cur.rows() && std::all_of(gens[i].begin(), gens[i].end(),
                                       [](uint32_t x) { return x == 0; }))
            continue;
        kept.push_back(i);
        cur = span_of(kept);
    }
    // backward sweeps: drop anything in the span of the rest (irredundant =
    // minimal over a local ring)
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t k = kept.size(); k-- > 0;) {
            std::vector<uint32_t> rest;
            for (size_t j = 0; j < kept.size(); ++j)
                if (j != k) rest.push_back(kept[j]);
            ZMatrix lat = rest.empty() ? (base_lattice.rows() ? howell_form(base_lattice)
                                                              : ZMatrix(0, width, ring->mod()))
                                       : span_of(rest);
            bool member = lat.rows() ? in_rowspan_howell(lat, gens[kept[k]])
                                     : std::all_of(gens[kept[k]].begin(), gens[kept[k]].end(),
                                                   [](uint32_t x) { return x == 0; });
            if (member) {
                kept.erase(kept.begin() + static_cast<ptrdiff_t>(k));
                changed = true;
            }
        }
    }
    return kept;
}

HomModule hom_module(const PresentedModule& m, const PresentedModule& n) {
    if (m.ring()->spec() != n.ring()->spec()) throw std::invalid_argument("ring spec mismatch");
    const RingPtr& R = m.ring();
    const uint32_t E = R->dim();
    const uint32_t t = m.gens(), v = n.gens();
    const uint32_t unknowns = v * t * E; // phi_{ij} blocks, (i*t+j)*E + k

    // constraints: for each relation column a of M, D_N * vec(Phi a) = 0
    const ZMatrix& D = n.rel_conditions();
    std::vector<ZMatrix> stack;
    for (uint32_t rc = 0; rc < m.relations().cols(); ++rc) {
        auto a = m.relations().col(rc);
        // A: (v*E) x unknowns with block (i-rows, (i,j)-cols) = Mult(a_j)
        ZMatrix A(v * E, unknowns, R->mod());
        for (uint32_t j = 0; j < t; ++j) {
            ZMatrix Mj = mult_matrix(a[j]);
            for (uint32_t i = 0; i < v; ++i)
                for (uint32_t r = 0; r < E; ++r)
                    for (uint32_t c = 0; c < E; ++c)
                        if (Mj.at(r, c))
                            A.at(i * E + r, (i * t + j) * E + c) = Mj.at(r, c);
        }
        stack.push_back(D.mul(A));
    }
    ZMatrix constraints(0, unknowns, R->mod());
    for (auto& s : stack) constraints = constraints.vstack(s);

    ZMatrix sols = kernel(constraints.rows() ? constraints : ZMatrix(0, unknowns, R->mod()));

    std::vector<std::vector<uint32_t>> raw;
    for (uint32_t i = 0; i < sols.rows(); ++i)
        raw.emplace_back(sols.row(i), sols.row(i) + unknowns);
    auto kept = prune_generators(R, raw, ZMatrix(0, unknowns, R->mod()));

    HomModule out;
    std::vector<std::vector<uint32_t>> gen_vecs;
    for (uint32_t ki : kept) {
        RMatrix g(R, v, t);
        for (uint32_t i = 0; i < v; ++i)
            for (uint32_t j = 0; j < t; ++j) {
                size_t off = (static_cast<size_t>(i) * t + j) * E;
                g.set(i, j,
                      RingElem(R, std::vector<uint32_t>(raw[ki].begin() + off,
                                                        raw[ki].begin() + off + E)));
            }
        out.gens.push_back(std::move(g));
        gen_vecs.push_back(raw[ki]);
    }

    // syzygies: kernel of (c_1..c_h) -> sum c_i Phi_i
    const uint32_t h = static_cast<uint32_t>(out.gens.size());
    ZMatrix S(unknowns, h * E, R->mod());
    for (uint32_t g = 0; g < h; ++g)
        for (uint32_t beta = 0; beta < E; ++beta) {
            // column (g,beta) = vec(x^beta * Phi_g)
            for (uint32_t pos = 0; pos < v * t; ++pos)
                for (uint32_t i = 0; i < E; ++i) {
                    uint32_t c = gen_vecs[g][static_cast<size_t>(pos) * E + i];
                    if (c == 0) continue;
                    uint32_t tt = R->mono_mul(i, beta);
                    if (tt != Ring::npos)
                        S.at(pos * E + tt, g * E + beta) =
                            R->mod().add(S.at(pos * E + tt, g * E + beta), c);
                }
        }
    ZMatrix syz = kernel(S);
    RMatrix rels(R, h, syz.rows());
    for (uint32_t r = 0; r < syz.rows(); ++r) {
        auto col = unflatten(R, std::vector<uint32_t>(syz.row(r), syz.row(r) + h * E));
        for (uint32_t i = 0; i < h; ++i) rels.set(i, r, col[i]);
    }
    out.mod = PresentedModule(R, h, std::move(rels));
    return out;
}

DualPtr dual_of(const PresentedModule& m) {
    HomModule h = hom_module(m, PresentedModule::free_module(m.ring(), 1));
    auto d = std::make_shared<DualModule>();
    d->base = m;
    d->mod = h.mod;
    RMatrix F(m.ring(), static_cast<uint32_t>(h.gens.size()), m.gens());
    for (uint32_t i = 0; i < h.gens.size(); ++i)
        for (uint32_t j = 0; j < m.gens(); ++j) F.set(i, j, h.gens[i].at(0, j));
    d->functionals = std::move(F);
    return d;
}

RingElem eval_functional(const DualModule& d, const std::vector<RingElem>& func_coords,
                         const std::vector<RingElem>& elem) {
    const RingPtr& R = d.base.ring();
    RingElem acc = RingElem::zero(R);
    for (uint32_t i = 0; i < func_coords.size(); ++i) {
        if (func_coords[i].is_zero()) continue;
        RingElem inner = RingElem::zero(R);
        for (uint32_t j = 0; j < elem.size(); ++j)
            inner = inner + mul(d.functionals.at(i, j), elem[j]);
        acc = acc + mul(func_coords[i], inner);
    }
    return acc;
}

KernelResult kernel_of_map(const ModuleMap& f) {
    const RingPtr& R = f.source().ring();
    const uint32_t E = R->dim();
    const uint32_t t = f.source().gens();

    ZMatrix C = f.target().rel_conditions().mul(blowup(f.mat()));
    ZMatrix sols = kernel(C);

    std::vector<std::vector<uint32_t>> raw;
    for (uint32_t i = 0; i < sols.rows(); ++i) raw.emplace_back(sols.row(i), sols.row(i) + t * E);
    auto kept = prune_generators(R, raw, f.source().rel_lattice());

    const uint32_t k = static_cast<uint32_t>(kept.size());
    RMatrix Y(R, t, k);
    for (uint32_t c = 0; c < k; ++c) {
        auto colv = unflatten(R, raw[kept[c]]);
        for (uint32_t i = 0; i < t; ++i) Y.set(i, c, colv[i]);
    }

    // relations: combinations of kept generators landing in the source
    // relation span
    ZMatrix C2 = f.source().rel_conditions().mul(blowup(Y));
    ZMatrix syz = kernel(C2);
    RMatrix rels(R, k, syz.rows());
    for (uint32_t r = 0; r < syz.rows(); ++r) {
        auto col = unflatten(R, std::vector<uint32_t>(syz.row(r), syz.row(r) + k * E));
        for (uint32_t i = 0; i < k; ++i) rels.set(i, r, col[i]);
    }
    PresentedModule K(R, k, std::move(rels));
    ModuleMap emb(K, f.source(), std::move(Y));
    return {std::move(K), std::move(emb)};
}

PresentedModule cokernel(const ModuleMap& f) {
    return PresentedModule(f.target().ring(), f.target().gens(),
                           f.target().relations().hstack(f.mat()));
}

IdealRep fitting_ideal(const PresentedModule& m, uint32_t i) {
    const RingPtr& R = m.ring();
    const uint32_t t = m.gens();
    if (i >= t) return IdealRep::unit(R);
    const uint32_t k = t - i;
    const uint32_t s = m.relations().cols();
    if (k > s) return IdealRep::zero(R);

    std::vector<uint32_t> rsel(k), csel(k);
    for (uint32_t j = 0; j < k; ++j) rsel[j] = j, csel[j] = j;

    auto next_comb = [](std::vector<uint32_t>& c, uint32_t n) {
        uint32_t k2 = static_cast<uint32_t>(c.size());
        for (uint32_t idx = k2; idx-- > 0;) {
            if (c[idx] + (k2 - idx) < n + 0u) {
                ++c[idx];
                for (uint32_t j = idx + 1; j < k2; ++j) c[j] = c[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    IdealRep acc = IdealRep::zero(R);
    bool more_r = true;
    while (more_r) {
        std::vector<uint32_t> cs(k);
        for (uint32_t j = 0; j < k; ++j) cs[j] = j;
        bool more_c = true;
        while (more_c) {
            RingElem d = m.relations().submatrix(rsel, cs).det();
            if (!d.is_zero() && !acc.contains(d)) {
                acc = ideal_sum(acc, IdealRep::from_generators(R, {d}));
                if (acc.is_unit()) return acc; // cannot grow further
            }
            more_c = next_comb(cs, s);
        }
        more_r = next_comb(rsel, t);
    }
    return acc;
}

IdealRep annihilator(const PresentedModule& m) {
    const RingPtr& R = m.ring();
    const uint32_t E = R->dim();
    const ZMatrix& D = m.rel_conditions();
    if (D.rows() == 0) return IdealRep::unit(R); // zero module or no conditions
    ZMatrix C(D.rows() * m.gens(), E, R->mod());
    for (uint32_t g = 0; g < m.gens(); ++g)
        for (uint32_t r = 0; r < D.rows(); ++r)
            for (uint32_t c = 0; c < E; ++c) C.at(g * D.rows() + r, c) = D.at(r, g * E + c);
    ZMatrix sols = kernel(C);
    std::vector<RingElem> gens;
    for (uint32_t i = 0; i < sols.rows(); ++i)
        gens.emplace_back(R, std::vector<uint32_t>(sols.row(i), sols.row(i) + E));
    if (gens.empty()) return IdealRep::zero(R);
    return IdealRep::from_generators(R, gens);
}

PresentedModule tensor_quotient(const PresentedModule& m, const QuotientMap& q) {
    if (m.ring()->spec() != q.src()->spec()) throw std::invalid_argument("ring spec mismatch");
    return PresentedModule(q.dst(), m.gens(), m.relations().mapped(q));
}

uint32_t min_gens(const PresentedModule& m) {
    const uint32_t E = m.ring()->dim();
    std::vector<std::vector<uint32_t>> gens;
    for (uint32_t i = 0; i < m.gens(); ++i) {
        std::vector<uint32_t> v(m.gens() * E, 0);
        v[static_cast<size_t>(i) * E] = 1;
        gens.push_back(std::move(v));
    }
    return static_cast<uint32_t>(prune_generators(m.ring(), gens, m.rel_lattice()).size());
}

bool is_free_of_rank(const PresentedModule& m, uint32_t k) {
    if (m.length() != static_cast<uint64_t>(k) * m.ring()->spec().length()) return false;
    return min_gens(m) == k;
}

bool is_isomorphism(const ModuleMap& f) {
    if (f.source().length() != f.target().length()) return false;
    return cokernel(f).is_zero();
}

ModuleMap double_dual_map(const PresentedModule& m, const DualPtr& d, const DualPtr& dd) {
    const RingPtr& R = m.ring();
    const uint32_t h = d->mod.gens();
    const uint32_t h2 = dd->mod.gens();
    // solve: sum_k c_k Psi_k agrees with evaluation-at-g_j on every dual
    // generator: (F'')^T c = column_j(F)
    ZMatrix lhs = blowup(dd->functionals.transposed()); // (h*E) x (h2*E)
    RMatrix C(R, h2, m.gens());
    for (uint32_t j = 0; j < m.gens(); ++j) {
        std::vector<RingElem> target;
        for (uint32_t i = 0; i < h; ++i) target.push_back(d->functionals.at(i, j));
        auto sol = solve(lhs, flatten(target));
        if (!sol) throw std::logic_error("double dual: evaluation not in span (impossible)");
        auto cc = unflatten(R, *sol);
        for (uint32_t k = 0; k < h2; ++k) C.set(k, j, cc[k]);
    }
    return ModuleMap(m, dd->mod, std::move(C));
}

} // namespace gstark
