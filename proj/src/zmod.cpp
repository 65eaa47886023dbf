#include "gstark/zmod.hpp"

#include <algorithm>

namespace gstark {

namespace {

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

Modulus::Modulus(uint32_t prime, uint32_t exponent) : p(prime), a(exponent) {
    if (!is_prime(prime)) throw std::invalid_argument("modulus base must be prime");
    if (exponent == 0) throw std::invalid_argument("modulus exponent must be positive");
    uint64_t v = 1;
    for (uint32_t i = 0; i < exponent; ++i) {
        v *= prime;
        if (v > (1u << 20)) throw std::invalid_argument("modulus p^a exceeds 2^20");
    }
    m = static_cast<uint32_t>(v);
}

uint32_t Modulus::inv(uint32_t x) const {
    if (!is_unit(x)) throw std::domain_error("inverse of a non-unit");
    // extended Euclid on (x, m)
    int64_t r0 = x, r1 = m, s0 = 1, s1 = 0;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    int64_t res = s0 % m;
    if (res < 0) res += m;
    return static_cast<uint32_t>(res);
}

ZMatrix ZMatrix::transposed() const {
    ZMatrix t(cols_, rows_, mod_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

ZMatrix ZMatrix::mul(const ZMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("ZMatrix::mul shape mismatch");
    ZMatrix out(rows_, rhs.cols_, mod_);
    ZMatrix rt = rhs.transposed();
    const auto& k = kernels::ops();
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < rhs.cols_; ++j)
            out.at(i, j) = k.dot(row(i), rt.row(j), cols_, mod_.m);
    return out;
}

std::vector<uint32_t> ZMatrix::mul_vec(const std::vector<uint32_t>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("ZMatrix::mul_vec shape mismatch");
    std::vector<uint32_t> out(rows_, 0);
    const auto& k = kernels::ops();
    for (uint32_t i = 0; i < rows_; ++i) out[i] = k.dot(row(i), v.data(), cols_, mod_.m);
    return out;
}

ZMatrix ZMatrix::vstack(const ZMatrix& below) const {
    if (below.rows_ == 0) return *this;
    if (rows_ == 0) return below;
    if (cols_ != below.cols_) throw std::invalid_argument("ZMatrix::vstack shape mismatch");
    ZMatrix out(rows_ + below.rows_, cols_, mod_);
    std::copy(e_.begin(), e_.end(), out.e_.begin());
    std::copy(below.e_.begin(), below.e_.end(), out.e_.begin() + e_.size());
    return out;
}

bool ZMatrix::is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](uint32_t x) { return x == 0; });
}

namespace {

// Shared Howell elimination.  Pivoting is restricted to the first
// `pivot_cols` columns; rows whose pivot-column part is exhausted stay in
// `rest` (their tails generate everything in the row span supported beyond
// the pivot block).  Output rows are fully reduced: pivot entries are p^v,
// entries above a pivot are < p^v.
struct HowellResult {
    std::vector<std::vector<uint32_t>> out;  // echelon rows with pivots
    std::vector<uint32_t> pivot_col;
    std::vector<uint32_t> pivot_val;
    std::vector<std::vector<uint32_t>> rest; // rows with zero pivot-block part
};

HowellResult howell_engine(const ZMatrix& m, uint32_t pivot_cols) {
    const Modulus& mod = m.mod();
    const auto& k = kernels::ops();
    const uint32_t w = m.cols();
    HowellResult res;

    std::vector<std::vector<uint32_t>> work;
    work.reserve(m.rows());
    for (uint32_t i = 0; i < m.rows(); ++i)
        work.emplace_back(m.row(i), m.row(i) + w);

    for (uint32_t c = 0; c < pivot_cols; ++c) {
        // pick the surviving row with minimal valuation at column c
        size_t sel = work.size();
        uint32_t best = mod.a;
        for (size_t i = 0; i < work.size(); ++i) {
            if (work[i][c] == 0) continue;
            uint32_t v = mod.val(work[i][c]);
            if (v < best) {
                best = v;
                sel = i;
            }
        }
        if (sel == work.size()) continue;

        std::vector<uint32_t> piv = std::move(work[sel]);
        work.erase(work.begin() + static_cast<ptrdiff_t>(sel));
        const uint32_t v = best;
        const uint32_t pv = mod.pow_p(v);
        // normalize pivot entry to p^v
        uint32_t unit = piv[c] / pv;
        if (unit != 1) k.scale(piv.data(), mod.inv(unit), w, mod.m);

        for (auto& r : work) {
            if (r[c] == 0) continue;
            uint32_t f = r[c] / pv; // exact: val(r[c]) >= v by minimality
            k.axpy(r.data(), piv.data(), mod.neg(f), w, mod.m);
        }
        if (v > 0) {
            // closure row: (m/p^v) * pivot row has zero entry at c and keeps
            // the span property testable column by column
            std::vector<uint32_t> cl(piv);
            k.scale(cl.data(), mod.pow_p(mod.a - v), w, mod.m);
            bool nz = std::any_of(cl.begin(), cl.end(), [](uint32_t x) { return x != 0; });
            if (nz) work.push_back(std::move(cl));
        }
        res.out.push_back(std::move(piv));
        res.pivot_col.push_back(c);
        res.pivot_val.push_back(v);
        // drop zero rows
        work.erase(std::remove_if(work.begin(), work.end(),
                                  [](const std::vector<uint32_t>& r) {
                                      return std::all_of(r.begin(), r.end(),
                                                         [](uint32_t x) { return x == 0; });
                                  }),
                   work.end());
    }

    // reduce entries above each pivot modulo the pivot
    for (size_t i = 0; i < res.out.size(); ++i) {
        const uint32_t c = res.pivot_col[i];
        const uint32_t pv = mod.pow_p(res.pivot_val[i]);
        for (size_t j = 0; j < i; ++j) {
            uint32_t f = res.out[j][c] / pv;
            if (f != 0) k.axpy(res.out[j].data(), res.out[i].data(), mod.neg(f), w, mod.m);
        }
    }

    res.rest = std::move(work);
    return res;
}

ZMatrix rows_to_matrix(const std::vector<std::vector<uint32_t>>& rows, uint32_t cols,
                       Modulus mod) {
    ZMatrix out(static_cast<uint32_t>(rows.size()), cols, mod);
    for (uint32_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), out.row(i));
    return out;
}

} // namespace

ZMatrix howell_form(const ZMatrix& m) {
    HowellResult r = howell_engine(m, m.cols());
    return rows_to_matrix(r.out, m.cols(), m.mod());
}

uint32_t span_length(const ZMatrix& m) {
    HowellResult r = howell_engine(m, m.cols());
    uint32_t len = 0;
    for (uint32_t v : r.pivot_val) len += m.mod().a - v;
    return len;
}

ZMatrix kernel(const ZMatrix& m) {
    // left kernel of m^T: eliminate [m^T | I]; rows whose left part dies
    // carry kernel generators on the right
    const Modulus mod = m.mod();
    ZMatrix t = m.transposed();
    const uint32_t n = t.rows(); // = m.cols()
    ZMatrix aug(n, t.cols() + n, mod);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < t.cols(); ++j) aug.at(i, j) = t.at(i, j);
        aug.at(i, t.cols() + i) = 1;
    }
    HowellResult r = howell_engine(aug, t.cols());
    ZMatrix gens(static_cast<uint32_t>(r.rest.size()), n, mod);
    for (uint32_t i = 0; i < r.rest.size(); ++i)
        for (uint32_t j = 0; j < n; ++j) gens.at(i, j) = r.rest[i][t.cols() + j];
    return howell_form(gens);
}

std::optional<std::vector<uint32_t>> solve(const ZMatrix& m, const std::vector<uint32_t>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: length of b != rows");
    const Modulus mod = m.mod();
    ZMatrix t = m.transposed();
    const uint32_t n = t.rows();
    ZMatrix aug(n, t.cols() + n, mod);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < t.cols(); ++j) aug.at(i, j) = t.at(i, j);
        aug.at(i, t.cols() + i) = 1;
    }
    HowellResult r = howell_engine(aug, t.cols());

    const auto& k = kernels::ops();
    std::vector<uint32_t> residual(b);
    std::vector<uint32_t> x(n, 0);
    for (size_t i = 0; i < r.out.size(); ++i) {
        uint32_t e = residual[r.pivot_col[i]];
        if (e == 0) continue;
        uint32_t pv = mod.pow_p(r.pivot_val[i]);
        if (e % pv != 0) return std::nullopt;
        uint32_t f = e / pv;
        // residual -= f * left part; x += f * right part
        k.axpy(residual.data(), r.out[i].data(), mod.neg(f), t.cols(), mod.m);
        k.axpy(x.data(), r.out[i].data() + t.cols(), f, n, mod.m);
    }
    for (uint32_t v : residual)
        if (v != 0) return std::nullopt;
    return x;
}

bool in_rowspan_howell(const ZMatrix& h, const std::vector<uint32_t>& v) {
    if (v.size() != h.cols()) throw std::invalid_argument("in_rowspan_howell: shape mismatch");
    const Modulus mod = h.mod();
    const auto& k = kernels::ops();
    std::vector<uint32_t> residual(v);
    for (uint32_t i = 0; i < h.rows(); ++i) {
        // locate pivot of row i
        uint32_t c = 0;
        while (c < h.cols() && h.at(i, c) == 0) ++c;
        if (c == h.cols()) continue;
        uint32_t e = residual[c];
        if (e == 0) continue;
        uint32_t pv = h.at(i, c); // normalized p^v
        if (e % pv != 0) return false;
        k.axpy(residual.data(), h.row(i), mod.neg(e / pv), h.cols(), mod.m);
    }
    return std::all_of(residual.begin(), residual.end(), [](uint32_t x) { return x == 0; });
}

} // namespace gstark
