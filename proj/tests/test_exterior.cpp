#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gstark/exterior.hpp"
#include "gstark/rng.hpp"

using namespace gstark;

namespace {

RMatrix rmat(const RingPtr& R, uint32_t rows, uint32_t cols,
             std::vector<std::vector<uint32_t>> flat_entries) {
    RMatrix m(R, rows, cols);
    for (uint32_t i = 0; i < rows; ++i)
        for (uint32_t j = 0; j < cols; ++j) m.set(i, j, RingElem(R, flat_entries[i * cols + j]));
    return m;
}

RingElem random_elem(Rng& rng, const RingPtr& R) {
    std::vector<uint32_t> c(R->dim());
    for (auto& x : c) x = rng.below32(R->mod().m);
    return RingElem(R, std::move(c));
}

PresentedModule random_module(Rng& rng, const RingPtr& R, uint32_t max_gens = 3,
                              uint32_t max_rels = 3) {
    uint32_t t = 1 + rng.below32(max_gens);
    uint32_t s = rng.below32(max_rels + 1);
    RMatrix rel(R, t, s);
    for (uint32_t i = 0; i < t; ++i)
        for (uint32_t j = 0; j < s; ++j) rel.set(i, j, random_elem(rng, R));
    return PresentedModule(R, t, rel);
}

// a random relation-consistent bidual element: an R-combination of the
// generators of the presentation of bidual^r M
BidualElement random_bidual(Rng& rng, const DualPtr& d, uint32_t r) {
    WedgePower wp = exterior_power(d->mod, r);
    DualPtr dw = dual_of(wp.power); // generators = value tables on wedges
    BidualElement acc = BidualElement::zero(d, r);
    for (uint32_t g = 0; g < dw->mod.gens(); ++g) {
        std::vector<RingElem> vals;
        for (uint32_t w = 0; w < wp.basis.size(); ++w) vals.push_back(dw->functionals.at(g, w));
        acc = acc + BidualElement(d, r, vals).scaled(random_elem(rng, d->base.ring()));
    }
    return acc;
}

const std::vector<RingSpec> test_rings = {{2, 2, {}}, {3, 2, {}}, {2, 1, {2}}, {2, 2, {2}}};

} // namespace

TEST_CASE("exterior power shapes") {
    auto z4 = Ring::make({2, 2, {}});
    auto F2 = PresentedModule::free_module(z4, 2);
    auto w2 = exterior_power(F2, 2);
    CHECK(w2.power.gens() == 1);
    CHECK(w2.power.length() == z4->spec().length()); // wedge^2 R^2 = R

    auto M = random_module(*(new Rng(1)), z4, 2, 2);
    CHECK(exterior_power(M, 3).power.is_zero()); // degree above generator count

    // wedge^2 of (R/p)^2 over Z/p^2 has length 1
    RMatrix d(z4, 2, 2);
    d.set(0, 0, RingElem::scalar(z4, 2));
    d.set(1, 1, RingElem::scalar(z4, 2));
    auto N = PresentedModule(z4, 2, d);
    CHECK(exterior_power(N, 2).power.length() == 1);
}

TEST_CASE("canonical_l on free modules") {
    auto z4 = Ring::make({2, 2, {}});
    auto F2 = PresentedModule::free_module(z4, 2);
    auto d = dual_of(F2);
    // l(e1 ^ e2)(e1* ^ e2*) = 1
    auto w = wedge_of_columns(F2, RMatrix::identity(z4, 2));
    auto l = canonical_l(d, w);
    CHECK(l.values().size() == 1);
    CHECK(l.values()[0] == RingElem::one(z4));
    CHECK(l.relation_consistent());

    // l(e1 ^ (e1 + 2 e2))(e1* ^ e2*) = det [[1,1],[0,2]] = 2
    auto w2 = wedge_of_columns(F2, rmat(z4, 2, 2, {{1}, {1}, {0}, {2}}));
    auto l2 = canonical_l(d, w2);
    CHECK(l2.values()[0] == RingElem::scalar(z4, 2));

    // l(x) = 0 for x = 0
    auto lz = canonical_l(d, WedgeElem::zero(F2, 2));
    CHECK(lz.is_zero());
}

TEST_CASE("bidual of free modules and the degree-one isomorphism") {
    auto R = Ring::make({2, 2, {2}});
    auto F3 = PresentedModule::free_module(R, 3);
    auto b2 = bidual_presentation(F3, 2);
    CHECK(b2.length() == 3 * R->spec().length()); // free of rank C(3,2)=3
    CHECK(is_free_of_rank(b2, 3));

    // bidual^1 M = M for every M (double duality)
    Rng rng(5);
    for (const auto& spec : test_rings) {
        auto A = Ring::make(spec);
        for (int rep = 0; rep < 6; ++rep) {
            auto M = random_module(rng, A);
            auto d = dual_of(M);
            auto dd = dual_of(d->mod); // = bidual^1
            CHECK(is_isomorphism(double_dual_map(M, d, dd)));
        }
    }

    // length of bidual^2 of (R/p)^2 over Z/p^2 is 1 (dual-of-wedge oracle)
    auto z4 = Ring::make({2, 2, {}});
    RMatrix dm(z4, 2, 2);
    dm.set(0, 0, RingElem::scalar(z4, 2));
    dm.set(1, 1, RingElem::scalar(z4, 2));
    auto N = PresentedModule(z4, 2, dm);
    CHECK(bidual_presentation(N, 2).length() == 1);
}

TEST_CASE("lemma_base_map: degenerate shapes") {
    auto z4 = Ring::make({2, 2, {}});
    auto F0 = PresentedModule::free_module(z4, 0);
    auto M = PresentedModule::free_module(z4, 2);

    // s = 0: the map is the identity on wedge^r M (with N = M)
    ModuleMap h0(F0, M, RMatrix(z4, 2, 0));
    ModuleMap gid = ModuleMap::identity(M);
    Rng rng(3);
    auto input = wedge_of_columns(M, rmat(z4, 2, 2, {{1}, {3}, {2}, {1}}));
    auto out = lemma_base_map(h0, gid, 2, input);
    CHECK(wedge_equal(out, input));

    // r = s: phi(1 (x) b) = wedge^s h(b)
    auto F2 = PresentedModule::free_module(z4, 2);
    RMatrix hm = rmat(z4, 2, 2, {{1}, {2}, {0}, {3}});
    ModuleMap h(F2, M, hm);
    auto N0 = cokernel(h);
    ModuleMap g(M, N0, RMatrix::identity(z4, 2));
    WedgeElem one = WedgeElem::zero(N0, 0);
    one.coeffs[0] = RingElem::one(z4);
    auto out2 = lemma_base_map(h, g, 2, one);
    CHECK(wedge_equal(out2, wedge_of_columns(M, hm)));
}

TEST_CASE("lemma_base_map: lift independence") {
    Rng rng(27);
    for (const auto& spec : test_rings) {
        auto R = Ring::make(spec);
        for (int rep = 0; rep < 8; ++rep) {
            // random M, a free F mapping in, N = coker(h)
            auto M = random_module(rng, R, 3, 2);
            uint32_t s = 1;
            RMatrix hm(R, M.gens(), s);
            for (uint32_t i = 0; i < M.gens(); ++i) hm.set(i, 0, random_elem(rng, R));
            ModuleMap h(PresentedModule::free_module(R, s), M, hm);
            auto N = cokernel(h);
            ModuleMap g(M, N, RMatrix::identity(R, M.gens()));
            uint32_t r = s + 1;
            if (M.gens() < r) continue;

            // input: wedge of random N-generator combinations
            RMatrix cols(R, N.gens(), r - s);
            for (uint32_t i = 0; i < N.gens(); ++i)
                for (uint32_t j = 0; j < r - s; ++j) cols.set(i, j, random_elem(rng, R));
            auto input = wedge_of_columns(N, cols);

            auto out1 = lemma_base_map(h, g, r, input);
            auto out2 = lemma_base_map(h, g, r, input);
            CHECK(wedge_equal(out1, out2)); // deterministic

            // perturb the input by a wedge relation of N: output class equal
            WedgePower wpN = exterior_power(N, r - s);
            if (wpN.power.relations().cols() > 0) {
                auto pert = input;
                uint32_t rc = rng.below32(wpN.power.relations().cols());
                for (uint32_t w = 0; w < pert.coeffs.size(); ++w)
                    pert.coeffs[w] = pert.coeffs[w] + wpN.power.relations().at(w, rc);
                auto out3 = lemma_base_map(h, g, r, pert);
                CHECK(wedge_equal(out1, out3));
            }
        }
    }
}

TEST_CASE("phi_map: trivial and one step examples") {
    auto z4 = Ring::make({2, 2, {}});
    auto F2 = PresentedModule::free_module(z4, 2);
    auto d2 = dual_of(F2);

    // v : R^2 -> R^2 with a unit row and a non-unit row
    RMatrix v = rmat(z4, 2, 2, {{1}, {0}, {0}, {2}});

    // one-step removal of coordinate 0 (unit row): kernel is free rank 1
    auto sq = make_square(F2, d2, v, {0, 1}, {1});
    CHECK(sq.m1.length() == z4->spec().length());

    Rng rng(8);
    auto eps = random_bidual(rng, d2, 2);
    auto out = phi_map(sq, eps);
    CHECK(out.degree() == 1);
    CHECK(out.relation_consistent());

    // removing nothing keeps all values (on a free module the duals match)
    auto sq0 = make_square(F2, d2, v, {0, 1}, {0, 1});
    auto out0 = phi_map(sq0, eps);
    CHECK(out0.degree() == 2);
    // identify via the lifts: on free modules the pruned dual generators are
    // a permutation of coordinates, so value multisets agree up to sign
    CHECK(out0.value_ideal() == eps.value_ideal());
}

TEST_CASE("prop 2.5 sign law on random triple chains") {
    Rng rng(404);
    const std::vector<std::array<uint32_t, 3>> profiles = {{0, 1, 2}, {0, 2, 3}, {1, 2, 4}};
    int tested = 0;
    for (int rep = 0; rep < 40 && tested < 25; ++rep) {
        const auto& spec = test_rings[rng.below(test_rings.size())];
        auto R = Ring::make(spec);
        auto prof = profiles[rng.below(profiles.size())];
        uint32_t s3 = prof[2];
        auto M3 = random_module(rng, R, 3, 2);
        auto d3 = dual_of(M3);
        // v : M3 -> R^{s3} built from random functionals (always well defined)
        RMatrix v(R, s3, M3.gens());
        for (uint32_t i = 0; i < s3; ++i) {
            RMatrix comb(R, 1, d3->mod.gens());
            for (uint32_t k = 0; k < d3->mod.gens(); ++k) comb.set(0, k, random_elem(rng, R));
            RMatrix row = comb.mul(d3->functionals);
            for (uint32_t j = 0; j < M3.gens(); ++j) v.set(i, j, row.at(0, j));
        }
        std::vector<uint32_t> S3(s3);
        for (uint32_t i = 0; i < s3; ++i) S3[i] = i;
        std::vector<uint32_t> S2(S3.begin(), S3.begin() + prof[1]);
        std::vector<uint32_t> S1(S3.begin(), S3.begin() + prof[0]);

        uint32_t r = s3 - prof[0] + rng.below32(2); // r >= s3 - s1
        if (r > M3.gens() + 2) continue;

        auto sq32 = make_square(M3, d3, v, S3, S2);
        // restriction of v to M2 for the lower square
        RMatrix v2(R, prof[1], sq32.m1.gens());
        {
            RMatrix vcomp = v.mul(sq32.emb.mat());
            for (uint32_t i = 0; i < prof[1]; ++i)
                for (uint32_t j = 0; j < sq32.m1.gens(); ++j) v2.set(i, j, vcomp.at(i, j));
        }
        auto sq21 = make_square(sq32.m1, sq32.d1, v2, S2, S1);
        auto sq31 = make_square_with(M3, d3, v, S3, S1, sq21.m1, sq32.emb.compose(sq21.emb),
                                     sq21.d1);

        auto eps = random_bidual(rng, d3, r);
        auto two_step = phi_map(sq21, phi_map(sq32, eps));
        auto one_shot = phi_map(sq31, eps);

        uint32_t exponent = (prof[1] - prof[0]) * (prof[2] - prof[1]);
        BidualElement expected =
            (exponent % 2) ? one_shot.scaled(-RingElem::one(R)) : one_shot;
        CHECK(two_step == expected);
        ++tested;
    }
    CHECK(tested >= 25);
}

TEST_CASE("prop 2.6 naturality: phi commutes with maps of exact rows") {
    // rows 0 -> N -> M -> F and 0 -> N' -> M' -> F' with the projection
    // family: M = M' + torsion, mu the projection, F = F', phi = id
    Rng rng(505);
    int tested = 0;
    for (int rep = 0; rep < 60 && tested < 25; ++rep) {
        const auto& spec = test_rings[rng.below(test_rings.size())];
        auto R = Ring::make(spec);
        auto Mp = random_module(rng, R, 2, 1); // M'
        auto dMp = dual_of(Mp);
        uint32_t s = 1;
        RMatrix vp(R, s, Mp.gens());
        {
            RMatrix comb(R, 1, dMp->mod.gens());
            for (uint32_t k = 0; k < dMp->mod.gens(); ++k) comb.set(0, k, random_elem(rng, R));
            RMatrix row = comb.mul(dMp->functionals);
            for (uint32_t j = 0; j < Mp.gens(); ++j) vp.set(0, j, row.at(0, j));
        }

        // M = M' (+) T with T = R/(p): extra generator with relation p
        uint32_t t = Mp.gens() + 1;
        RMatrix rel(R, t, Mp.relations().cols() + 1);
        for (uint32_t i = 0; i < Mp.gens(); ++i)
            for (uint32_t j = 0; j < Mp.relations().cols(); ++j)
                rel.set(i, j, Mp.relations().at(i, j));
        rel.set(t - 1, Mp.relations().cols(), RingElem::scalar(R, R->mod().p));
        auto M = PresentedModule(R, t, rel);
        auto dM = dual_of(M);

        // mu: projection killing the torsion generator; v = v' o mu
        RMatrix mu_mat(R, Mp.gens(), t);
        for (uint32_t i = 0; i < Mp.gens(); ++i) mu_mat.set(i, i, RingElem::one(R));
        ModuleMap mu(M, Mp, mu_mat);
        RMatrix v = vp.mul(mu_mat);

        std::vector<uint32_t> S = {0}, S0 = {};
        auto sq = make_square(M, dM, v, S, S0);    // N = ker(v)
        auto sqp = make_square(Mp, dMp, vp, S, S0); // N' = ker(v')

        // nu: N -> N', the restriction of mu (solved in N' coordinates)
        RMatrix proj_emb = mu_mat.mul(sq.emb.mat()); // N -> M'
        const uint32_t E = R->dim();
        ZMatrix lhs(Mp.gens() * E,
                    sqp.emb.mat().cols() * E + Mp.rel_lattice().rows(), R->mod());
        {
            ZMatrix B = blowup(sqp.emb.mat());
            for (uint32_t i = 0; i < B.rows(); ++i)
                for (uint32_t j = 0; j < B.cols(); ++j) lhs.at(i, j) = B.at(i, j);
            const ZMatrix& L = Mp.rel_lattice();
            for (uint32_t j = 0; j < L.rows(); ++j)
                for (uint32_t i = 0; i < Mp.gens() * E; ++i)
                    lhs.at(i, B.cols() + j) = L.at(j, i);
        }
        RMatrix nu_mat(R, sqp.m1.gens(), sq.m1.gens());
        bool ok = true;
        for (uint32_t c = 0; c < sq.m1.gens() && ok; ++c) {
            auto sol = solve(lhs, flatten(proj_emb.col(c)));
            if (!sol) {
                ok = false;
                break;
            }
            auto cc = unflatten(R, std::vector<uint32_t>(
                                       sol->begin(), sol->begin() + sqp.m1.gens() * E));
            for (uint32_t i = 0; i < sqp.m1.gens(); ++i) nu_mat.set(i, c, cc[i]);
        }
        REQUIRE(ok);
        ModuleMap nu(sq.m1, sqp.m1, nu_mat);

        uint32_t r = 1 + rng.below32(2);
        auto eps = random_bidual(rng, dM, r);

        // path 1: push along mu, then phi on the primed row
        auto path1 = phi_map(sqp, bidual_push(eps, mu, dMp));
        // path 2: phi on the unprimed row, then push along nu
        auto path2 = bidual_push(phi_map(sq, eps), nu, sqp.d1);
        CHECK(path1 == path2);
        ++tested;
    }
    CHECK(tested >= 25);
}

TEST_CASE("mr_derivation examples") {
    auto z4 = Ring::make({2, 2, {}});
    auto M = PresentedModule::free_module(z4, 2);
    RMatrix hm(z4, 1, 2);
    hm.set(0, 0, RingElem::scalar(z4, 2));
    hm.set(0, 1, RingElem::one(z4));
    ModuleMap h(M, PresentedModule::free_module(z4, 1), hm);
    auto ker = kernel_of_map(h);

    // s = 1: hhat = h
    WedgeElem x = WedgeElem::zero(M, 1);
    x.coeffs[0] = RingElem::one(z4); // e1
    auto out = mr_derivation(h, ker, x);
    // h(e1) = 2: output should be the constant 2 in wedge^0 N = R
    CHECK(out.degree == 0);
    CHECK(out.coeffs[0] == RingElem::scalar(z4, 2));

    // all factors in N: hhat = 0
    WedgeElem y = WedgeElem::zero(M, 2);
    // N = ker(h) has e1 - 2e2 style generators; wedge of two kernel elements
    RMatrix two_cols(z4, 2, 2);
    for (uint32_t j = 0; j < 2 && j < ker.embedding.mat().cols(); ++j)
        for (uint32_t i = 0; i < 2; ++i) two_cols.set(i, j, ker.embedding.mat().at(i, j % ker.embedding.mat().cols()));
    auto w = wedge_of_columns(M, two_cols);
    if (!std::all_of(w.coeffs.begin(), w.coeffs.end(),
                     [](const RingElem& c) { return c.is_zero(); })) {
        auto out2 = mr_derivation(h, ker, w);
        CHECK(std::all_of(out2.coeffs.begin(), out2.coeffs.end(),
                          [](const RingElem& c) { return c.is_zero(); }));
    }

    // non-principal base is rejected
    auto Rx = Ring::make({2, 2, {2}});
    auto Mx = PresentedModule::free_module(Rx, 2);
    RMatrix hx(Rx, 1, 2);
    hx.set(0, 0, RingElem::one(Rx));
    ModuleMap hmap(Mx, PresentedModule::free_module(Rx, 1), hx);
    auto kx = kernel_of_map(hmap);
    WedgeElem xx = WedgeElem::zero(Mx, 1);
    xx.coeffs[0] = RingElem::one(Rx);
    CHECK_THROWS(mr_derivation(hmap, kx, xx));
}

TEST_CASE("takebasis: basis factors in the kernel") {
    // 0 -> N -> M -h-> R with y_1,...,y_{s-1} in N:
    // hhat(y_1 ^ ... ^ y_s) = (-1)^{s-1} y_1 ^ ... ^ y_{s-1} (x) h(y_s)
    auto z8 = Ring::make({2, 3, {}});
    auto M = PresentedModule::free_module(z8, 3);
    RMatrix hm(z8, 1, 3);
    hm.set(0, 2, RingElem::one(z8)); // h = e3*
    ModuleMap h(M, PresentedModule::free_module(z8, 1), hm);
    auto ker = kernel_of_map(h); // N = span(e1, e2)

    auto x = wedge_of_columns(M, RMatrix::identity(z8, 3)); // e1 ^ e2 ^ e3, s = 3
    auto out = mr_derivation(h, ker, x);
    // expected: (+1) e1 ^ e2 in N's generators ((-1)^{s-1} with s = 3)
    RMatrix cols(z8, 2, 2); // N has generators e1, e2 -> identity columns
    // locate e1, e2 in the kernel embedding
    auto emb = ker.embedding.mat();
    REQUIRE(ker.module.gens() == 2);
    auto expected_in_M = wedge_of_columns(M, emb); // wedge of N-gens inside M
    // push out back into M and compare against (+1) * expected
    auto out_in_M = wedge_push(out, ker.embedding);
    CHECK(wedge_equal(out_in_M, expected_in_M));
}

TEST_CASE("compalem: value ideal of l and ideal multiples") {
    Rng rng(606);
    const std::vector<RingSpec> principal = {{2, 2, {}}, {2, 3, {}}, {3, 2, {}}};
    for (const auto& spec : principal) {
        auto R = Ring::make(spec);
        for (int rep = 0; rep < 10; ++rep) {
            auto M = random_module(rng, R, 3, 2);
            auto d = dual_of(M);
            uint32_t s = 1 + rng.below32(2);
            if (M.gens() < s) continue;

            // (1) x in J wedge^s M implies im(l(x)) inside J
            RingElem j = random_elem(rng, R);
            IdealRep J = IdealRep::from_generators(R, {j});
            RMatrix cols(R, M.gens(), s);
            for (uint32_t i = 0; i < M.gens(); ++i)
                for (uint32_t c = 0; c < s; ++c) cols.set(i, c, random_elem(rng, R));
            auto x = scale(wedge_of_columns(M, cols), j);
            CHECK(J.contains(canonical_l(d, x).value_ideal()));
        }

        // (2) planted free summand: x in im(l(x)) wedge^s M
        for (int rep = 0; rep < 10; ++rep) {
            uint32_t s = 1 + rng.below32(2);
            uint32_t extra = 1 + rng.below32(2);
            // M = R^s + cyclic torsion parts: generators 0..s-1 free
            uint32_t t = s + extra;
            RMatrix rel(R, t, extra);
            for (uint32_t e = 0; e < extra; ++e)
                rel.set(s + e, e, RingElem::scalar(R, R->mod().p));
            auto M = PresentedModule(R, t, rel);
            auto d = dual_of(M);
            RMatrix cols(R, t, s);
            for (uint32_t c = 0; c < s; ++c) cols.set(c, c, random_elem(rng, R));
            auto x = wedge_of_columns(M, cols);
            auto I = canonical_l(d, x).value_ideal();
            CHECK(wedge_in_ideal_multiple(x, I));
        }
    }
}
