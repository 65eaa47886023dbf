#include "gstark/serialize.hpp"

namespace gstark {

json to_json(const RingSpec& s) {
    return json{{"p", s.p}, {"a", s.a}, {"exponents", s.exponents}};
}

RingSpec ring_spec_from_json(const json& j) {
    RingSpec s;
    s.p = j.at("p").get<uint32_t>();
    s.a = j.at("a").get<uint32_t>();
    s.exponents = j.at("exponents").get<std::vector<uint32_t>>();
    return s;
}

json to_json(const RingElem& e) { return json(e.coeffs()); }

RingElem ring_elem_from_json(const RingPtr& ring, const json& j) {
    return RingElem(ring, j.get<std::vector<uint32_t>>());
}

json to_json(const RMatrix& m) {
    json rows = json::array();
    for (uint32_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (uint32_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

RMatrix rmatrix_from_json(const RingPtr& ring, const json& j) {
    uint32_t rows = static_cast<uint32_t>(j.size());
    uint32_t cols = rows ? static_cast<uint32_t>(j.at(0).size()) : 0;
    RMatrix m(ring, rows, cols);
    for (uint32_t i = 0; i < rows; ++i)
        for (uint32_t c = 0; c < cols; ++c) m.set(i, c, ring_elem_from_json(ring, j.at(i).at(c)));
    return m;
}

json to_json(const IdealRep& i) {
    json rows = json::array();
    for (const auto& g : i.generators()) rows.push_back(to_json(g));
    return json{{"basis", rows}};
}

json to_json(const SelmerInstance& inst) {
    return json{{"ring", to_json(inst.ring->spec())},
                {"rank_r", inst.rank_r},
                {"primes", inst.primes},
                {"loc", to_json(inst.loc)}};
}

SelmerInstance instance_from_json(const json& j) {
    SelmerInstance inst;
    inst.ring = Ring::make(ring_spec_from_json(j.at("ring")));
    inst.rank_r = j.at("rank_r").get<uint32_t>();
    inst.primes = j.at("primes").get<std::vector<std::string>>();
    inst.loc = rmatrix_from_json(inst.ring, j.at("loc"));
    if (inst.loc.rows() != inst.n_primes() || inst.loc.cols() != inst.top_rank())
        throw std::invalid_argument("instance: loc shape must be N x (r+N)");
    return inst;
}

json subset_to_json(Subset s, const SelmerInstance& inst) {
    json labels = json::array();
    for (uint32_t q = 0; q < inst.n_primes(); ++q)
        if (s & (1u << q)) labels.push_back(inst.primes[q]);
    return labels;
}

} // namespace gstark
