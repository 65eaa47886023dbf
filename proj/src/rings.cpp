#include "gstark/rings.hpp"

#include <algorithm>
#include <sstream>

namespace gstark {

bool RingSpec::admits_quotient(const RingSpec& target) const {
    if (target.p != p || target.a > a) return false;
    if (target.exponents.size() != exponents.size()) return false;
    for (size_t i = 0; i < exponents.size(); ++i)
        if (target.exponents[i] > exponents[i] || target.exponents[i] == 0) return false;
    return true;
}

std::string RingSpec::str() const {
    std::ostringstream os;
    os << "Z/" << p << "^" << a;
    if (!exponents.empty()) {
        os << "[";
        for (size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << "x" << i + 1;
        os << "]/(";
        for (size_t i = 0; i < exponents.size(); ++i)
            os << (i ? "," : "") << "x" << i + 1 << "^" << exponents[i];
        os << ")";
    }
    return os.str();
}

Ring::Ring(RingSpec spec) : spec_(std::move(spec)), mod_(spec_.p, spec_.a) {
    for (uint32_t e : spec_.exponents)
        if (e == 0) throw std::invalid_argument("ring exponents must be positive");
    dim_ = spec_.dim();
    if (static_cast<uint64_t>(dim_) * dim_ > (1u << 24))
        throw std::invalid_argument("ring monomial basis too large");

    // enumerate monomials in lexicographic order: first variable most
    // significant, matching index = sum alpha_i * stride_i
    const uint32_t d = nvars();
    std::vector<uint32_t> alpha(d, 0);
    monomials_.reserve(dim_);
    for (uint32_t i = 0; i < dim_; ++i) {
        monomials_.push_back(alpha);
        for (uint32_t k = d; k-- > 0;) {
            if (++alpha[k] < spec_.exponents[k]) break;
            alpha[k] = 0;
        }
    }

    prod_.assign(static_cast<size_t>(dim_) * dim_, npos);
    for (uint32_t i = 0; i < dim_; ++i)
        for (uint32_t j = 0; j < dim_; ++j) {
            std::vector<uint32_t> g(d);
            bool alive = true;
            for (uint32_t k = 0; k < d; ++k) {
                g[k] = monomials_[i][k] + monomials_[j][k];
                if (g[k] >= spec_.exponents[k]) {
                    alive = false;
                    break;
                }
            }
            if (alive) prod_[i * dim_ + j] = index_of(g);
        }

    var_idx_.assign(d, npos);
    for (uint32_t k = 0; k < d; ++k) {
        if (spec_.exponents[k] == 1) continue;
        std::vector<uint32_t> g(d, 0);
        g[k] = 1;
        var_idx_[k] = index_of(g);
    }
}

RingPtr Ring::make(RingSpec spec) { return RingPtr(new Ring(std::move(spec))); }

uint32_t Ring::index_of(const std::vector<uint32_t>& expo) const {
    uint32_t idx = 0;
    for (uint32_t k = 0; k < nvars(); ++k) idx = idx * spec_.exponents[k] + expo[k];
    return idx;
}

RingElem::RingElem(RingPtr ring, std::vector<uint32_t> coeffs)
    : ring_(std::move(ring)), c_(std::move(coeffs)) {
    if (c_.size() != ring_->dim()) throw std::invalid_argument("RingElem: wrong coefficient count");
    for (uint32_t& x : c_) x %= ring_->mod().m;
}

RingElem RingElem::zero(const RingPtr& ring) {
    return RingElem(ring, std::vector<uint32_t>(ring->dim(), 0));
}

RingElem RingElem::one(const RingPtr& ring) { return scalar(ring, 1); }

RingElem RingElem::scalar(const RingPtr& ring, uint32_t c) {
    std::vector<uint32_t> v(ring->dim(), 0);
    v[0] = c % ring->mod().m;
    return RingElem(ring, std::move(v));
}

RingElem RingElem::monomial(const RingPtr& ring, uint32_t idx, uint32_t c) {
    std::vector<uint32_t> v(ring->dim(), 0);
    v[idx] = c % ring->mod().m;
    return RingElem(ring, std::move(v));
}

bool RingElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](uint32_t x) { return x == 0; });
}

bool RingElem::is_unit() const { return ring_->mod().is_unit(c_[0]); }

static void require_same_ring(const RingElem& a, const RingElem& b) {
    if (a.ring()->spec() != b.ring()->spec())
        throw std::invalid_argument("ring spec mismatch");
}

RingElem RingElem::operator+(const RingElem& o) const {
    require_same_ring(*this, o);
    std::vector<uint32_t> v(c_.size());
    kernels::ops().addv(v.data(), c_.data(), o.c_.data(), c_.size(), ring_->mod().m);
    return RingElem(ring_, std::move(v));
}

RingElem RingElem::operator-(const RingElem& o) const {
    require_same_ring(*this, o);
    std::vector<uint32_t> v(c_.size());
    kernels::ops().subv(v.data(), c_.data(), o.c_.data(), c_.size(), ring_->mod().m);
    return RingElem(ring_, std::move(v));
}

RingElem RingElem::operator-() const {
    std::vector<uint32_t> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = ring_->mod().neg(c_[i]);
    return RingElem(ring_, std::move(v));
}

RingElem RingElem::scaled(uint32_t c) const {
    std::vector<uint32_t> v(c_);
    kernels::ops().scale(v.data(), c % ring_->mod().m, v.size(), ring_->mod().m);
    return RingElem(ring_, std::move(v));
}

RingElem mul(const RingElem& u, const RingElem& v) {
    require_same_ring(u, v);
    const Ring& R = *u.ring();
    const Modulus& mod = R.mod();
    std::vector<uint32_t> out(R.dim(), 0);
    for (uint32_t i = 0; i < R.dim(); ++i) {
        uint32_t ci = u.coeff(i);
        if (ci == 0) continue;
        for (uint32_t j = 0; j < R.dim(); ++j) {
            uint32_t cj = v.coeff(j);
            if (cj == 0) continue;
            uint32_t t = R.mono_mul(i, j);
            if (t == Ring::npos) continue;
            out[t] = mod.add(out[t], mod.mul(ci, cj));
        }
    }
    return RingElem(u.ring(), std::move(out));
}

RingElem RingElem::operator*(const RingElem& o) const { return mul(*this, o); }

ZMatrix mult_matrix(const RingElem& u) {
    const Ring& R = *u.ring();
    ZMatrix out(R.dim(), R.dim(), R.mod());
    for (uint32_t beta = 0; beta < R.dim(); ++beta)
        for (uint32_t i = 0; i < R.dim(); ++i) {
            uint32_t t = R.mono_mul(i, beta);
            if (t != Ring::npos && u.coeff(i) != 0) out.at(t, beta) = u.coeff(i);
        }
    return out;
}

RingElem RingElem::inverse() const {
    if (!is_unit()) throw std::domain_error("RingElem::inverse of a non-unit");
    std::vector<uint32_t> e0(ring_->dim(), 0);
    e0[0] = 1;
    auto x = solve(mult_matrix(*this), e0);
    if (!x) throw std::logic_error("unit has no inverse (impossible)");
    return RingElem(ring_, std::move(*x));
}

std::string RingElem::str() const {
    std::ostringstream os;
    bool first = true;
    for (uint32_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        const auto& al = ring_->expo(i);
        bool isconst = std::all_of(al.begin(), al.end(), [](uint32_t x) { return x == 0; });
        if (c_[i] != 1 || isconst) os << c_[i];
        for (size_t k = 0; k < al.size(); ++k) {
            if (al[k] == 0) continue;
            os << "x" << k + 1;
            if (al[k] > 1) os << "^" << al[k];
        }
    }
    if (first) os << "0";
    return os.str();
}

IdealRep::IdealRep(RingPtr ring, ZMatrix basis) : ring_(std::move(ring)), basis_(std::move(basis)) {}

IdealRep IdealRep::zero(const RingPtr& ring) {
    return IdealRep(ring, ZMatrix(0, ring->dim(), ring->mod()));
}

IdealRep IdealRep::unit(const RingPtr& ring) {
    return from_generators(ring, {RingElem::one(ring)});
}

IdealRep IdealRep::from_generators(const RingPtr& ring, const std::vector<RingElem>& gens) {
    const uint32_t E = ring->dim();
    ZMatrix rows(static_cast<uint32_t>(gens.size()) * E, E, ring->mod());
    uint32_t r = 0;
    for (const auto& g : gens) {
        if (g.ring()->spec() != ring->spec()) throw std::invalid_argument("ring spec mismatch");
        // all monomial multiples of g: the Z-span is the R-ideal
        for (uint32_t alpha = 0; alpha < E; ++alpha, ++r) {
            for (uint32_t i = 0; i < E; ++i) {
                uint32_t t = ring->mono_mul(i, alpha);
                if (t != Ring::npos) rows.at(r, t) = g.coeff(i);
            }
        }
    }
    return IdealRep(ring, howell_form(rows));
}

bool IdealRep::contains(const RingElem& g) const {
    return in_rowspan_howell(basis_, g.coeffs());
}

bool IdealRep::contains(const IdealRep& other) const {
    for (uint32_t i = 0; i < other.basis_.rows(); ++i) {
        std::vector<uint32_t> row(other.basis_.row(i), other.basis_.row(i) + other.basis_.cols());
        if (!in_rowspan_howell(basis_, row)) return false;
    }
    return true;
}

bool IdealRep::is_zero() const { return basis_.rows() == 0; }

bool IdealRep::is_unit() const { return contains(RingElem::one(ring_)); }

uint32_t IdealRep::length() const { return span_length(basis_); }

bool IdealRep::operator==(const IdealRep& o) const {
    return ring_->spec() == o.ring_->spec() && basis_ == o.basis_;
}

std::vector<RingElem> IdealRep::generators() const {
    std::vector<RingElem> out;
    out.reserve(basis_.rows());
    for (uint32_t i = 0; i < basis_.rows(); ++i)
        out.emplace_back(ring_, std::vector<uint32_t>(basis_.row(i), basis_.row(i) + basis_.cols()));
    return out;
}

std::string IdealRep::str() const {
    if (is_zero()) return "(0)";
    std::ostringstream os;
    os << "(";
    auto gens = generators();
    for (size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << gens[i].str();
    os << ")";
    return os.str();
}

IdealRep ideal_sum(const IdealRep& a, const IdealRep& b) {
    if (a.ring()->spec() != b.ring()->spec()) throw std::invalid_argument("ring spec mismatch");
    return IdealRep(a.ring(), howell_form(a.basis().vstack(b.basis())));
}

IdealRep ideal_mul(const IdealRep& a, const IdealRep& b) {
    if (a.ring()->spec() != b.ring()->spec()) throw std::invalid_argument("ring spec mismatch");
    std::vector<RingElem> prods;
    for (const auto& x : a.generators())
        for (const auto& y : b.generators()) prods.push_back(mul(x, y));
    if (prods.empty()) return IdealRep::zero(a.ring());
    return IdealRep::from_generators(a.ring(), prods);
}

IdealRep ideal_pow(const IdealRep& a, uint32_t k) {
    IdealRep out = IdealRep::unit(a.ring());
    for (uint32_t i = 0; i < k; ++i) out = ideal_mul(out, a);
    return out;
}

IdealRep socle(const RingPtr& ring) {
    const Modulus& mod = ring->mod();
    std::vector<uint32_t> alpha(ring->nvars());
    for (uint32_t k = 0; k < ring->nvars(); ++k) alpha[k] = ring->spec().exponents[k] - 1;
    uint32_t idx = ring->index_of(alpha);
    return IdealRep::from_generators(ring, {RingElem::monomial(ring, idx, mod.pow_p(mod.a - 1))});
}

IdealRep maximal_ideal(const RingPtr& ring) {
    std::vector<RingElem> gens{RingElem::scalar(ring, ring->mod().p)};
    for (uint32_t k = 0; k < ring->nvars(); ++k)
        if (ring->var_index(k) != Ring::npos)
            gens.push_back(RingElem::monomial(ring, ring->var_index(k)));
    return IdealRep::from_generators(ring, gens);
}

std::optional<uint32_t> m_adic_content(const IdealRep& i) {
    if (i.is_zero()) return std::nullopt;
    IdealRep m = maximal_ideal(i.ring());
    IdealRep mk = IdealRep::unit(i.ring());
    uint32_t n = 0;
    while (true) {
        mk = ideal_mul(mk, m);
        if (!mk.contains(i)) return n;
        ++n;
        if (mk.is_zero()) throw std::logic_error("nonzero ideal inside zero power");
    }
}

QuotientMap::QuotientMap(RingPtr src, RingPtr dst) : src_(std::move(src)), dst_(std::move(dst)) {
    if (!src_->spec().admits_quotient(dst_->spec()))
        throw std::invalid_argument("quotient map requires nested ring specs");
}

RingElem QuotientMap::apply(const RingElem& x) const {
    if (x.ring()->spec() != src_->spec()) throw std::invalid_argument("ring spec mismatch");
    std::vector<uint32_t> out(dst_->dim(), 0);
    for (uint32_t i = 0; i < src_->dim(); ++i) {
        if (x.coeff(i) == 0) continue;
        const auto& al = src_->expo(i);
        bool alive = true;
        for (uint32_t k = 0; k < dst_->nvars(); ++k)
            if (al[k] >= dst_->spec().exponents[k]) {
                alive = false;
                break;
            }
        if (alive) out[dst_->index_of(al)] = x.coeff(i) % dst_->mod().m;
    }
    return RingElem(dst_, std::move(out));
}

IdealRep QuotientMap::apply(const IdealRep& i) const {
    if (i.ring()->spec() != src_->spec()) throw std::invalid_argument("ring spec mismatch");
    std::vector<RingElem> gens;
    for (const auto& g : i.generators()) gens.push_back(apply(g));
    if (gens.empty()) return IdealRep::zero(dst_);
    return IdealRep::from_generators(dst_, gens);
}

} // namespace gstark
