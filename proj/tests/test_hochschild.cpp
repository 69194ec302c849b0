#include <doctest.h>

#include "dgtannaka/examples.hpp"
#include "dgtannaka/hochschild.hpp"

using namespace dgt;
using namespace dgt::examples;

namespace {
RationalField Q;
PrimeField F109(109);

template <class F>
HochschildSystem<F> coeff_system(const Instance<F>& inst, int L, bool normalized) {
    return cc_levels(inst.A, coefficient_bimodule(inst.A, *inst.omega), L, normalized);
}

}  // namespace

TEST_SUITE("hochschild") {

TEST_CASE("levels of the one-object trivial category") {
    auto inst = one_object_k(Q);
    auto sys = coeff_system(inst, 2, false);
    for (int n = 0; n <= 2; ++n) {
        CHECK(sys.levels[n].cx->dim(0) == 1);
        CHECK(sys.levels[n].cx->space.total_dim() == 1);
    }
    // all faces are the identity
    for (int n = 1; n <= 2; ++n)
        for (int j = 0; j <= n; ++j) {
            auto m = face_matrix(sys, n, j, 0);
            CHECK(m == Matrix<RationalField>::identity(Q, 1));
        }
    CHECK(simplicial_report(sys).ok);
}

TEST_CASE("keller levels: dimension 2^n, eps.eps face vanishes") {
    auto inst = keller(Q);
    auto sys = coeff_system(inst, 3, false);
    for (int n = 0; n <= 3; ++n)
        CHECK(sys.levels[n].cx->dim(0) == (1 << n));
    CHECK(simplicial_report(sys).ok);

    // level-2 tuple (e^ | eps, eps | e): the middle face composes eps.eps = 0
    HTuple t;
    t.objs = {0, 0, 0};
    t.l = 0;
    t.arrows = {1, 1};
    t.r = 0;
    auto ref = sys.find(2, t);
    REQUIRE(ref);
    CHECK(face_of_tuple(sys, 2, t, 1).empty());
    // the outer faces act through omega(eps) = 0
    CHECK(face_of_tuple(sys, 2, t, 0).empty());
    CHECK(face_of_tuple(sys, 2, t, 2).empty());
}

TEST_CASE("normalized keller levels are one-dimensional") {
    auto inst = keller(Q);
    auto sys = coeff_system(inst, 4, true);
    for (int n = 0; n <= 4; ++n) {
        CHECK(sys.levels[n].cx->space.total_dim() == 1);
        CHECK(sys.levels[n].cx->dim(0) == 1);
    }
    auto tot = total_complex(sys);
    // C = k<xi>: one class in each degree -n, all differentials zero
    for (int n = 0; n <= 4; ++n) CHECK(tot.cx->dim(-n) == 1);
    CHECK(validate_complex(tot.cx).ok);
    CHECK(tot.cx->exact == DegRange::at_least(-4));
    for (int n = -3; n <= 0; ++n) CHECK(homology_dim(*tot.cx, n) == 1);
}

TEST_CASE("normalized levels of the trivial category vanish above 0") {
    auto inst = one_object_k(Q);
    auto sys = coeff_system(inst, 3, true);
    CHECK(sys.levels[0].cx->space.total_dim() == 1);
    for (int n = 1; n <= 3; ++n) CHECK(sys.levels[n].cx->space.total_dim() == 0);
    auto tot = total_complex(sys);
    CHECK(homology_dim(*tot.cx, 0) == 1);
    for (int n = -2; n < 0; ++n) CHECK(homology_dim(*tot.cx, n) == 0);
}

TEST_CASE("unnormalized total of the trivial category has H = k in degree 0") {
    auto inst = one_object_k(Q);
    auto sys = coeff_system(inst, 5, false);
    auto tot = total_complex(sys);
    CHECK(validate_complex(tot.cx).ok);
    CHECK(tot.cx->exact == DegRange::at_least(-5));
    CHECK(homology_dim(*tot.cx, 0) == 1);
    for (int n = -4; n < 0; ++n) CHECK(homology_dim(*tot.cx, n) == 0);
}

TEST_CASE("keller unnormalized total: H^{-n} = 1 on the window") {
    auto inst = keller(Q);
    auto sys = coeff_system(inst, 5, false);
    auto tot = total_complex(sys);
    CHECK(validate_complex(tot.cx).ok);
    for (int n = -4; n <= 0; ++n) CHECK(homology_dim(*tot.cx, n) == 1);
}

TEST_CASE("total differential squares to zero on sign-heavy instances") {
    auto gk = graded_keller(Q);
    auto sys = coeff_system(gk, 4, false);
    CHECK(simplicial_report(sys).ok);
    auto tot = total_complex(sys);
    CHECK(validate_complex(tot.cx).ok);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 3; ++t) {
        auto inst = random_directed_category(Q, rng, 3, 2, 2, -2);
        auto s2 = coeff_system(inst, 3, false);
        CHECK(simplicial_report(s2).ok);
        CHECK(validate_complex(total_complex(s2).cx).ok);
        auto inst2 = random_square_zero_category(F109, rng, 2, 2, 2);
        auto s3 = coeff_system(inst2, 3, false);
        CHECK(simplicial_report(s3).ok);
        CHECK(validate_complex(total_complex(s3).cx).ok);
    }
}

TEST_CASE("tannakian dual certificates") {
    for (bool normalized : {false, true}) {
        auto td = tannakian_dual_certified(keller(Q).A, keller(Q).omega, normalized, 4);
        CHECK(coalgebra_report(td).ok);
        auto td2 = tannakian_dual_certified(graded_keller(Q).A, graded_keller(Q).omega,
                                            normalized, 3);
        CHECK(coalgebra_report(td2).ok);
    }
    auto m2 = matrix2(F109);
    auto td3 = tannakian_dual(m2.A, m2.omega, true, 3);
    CHECK(coalgebra_report(td3).ok);

    std::mt19937_64 rng(31);
    for (int t = 0; t < 3; ++t) {
        auto inst = random_directed_category(F109, rng, 3, 2, 2, -2);
        auto td4 = tannakian_dual(inst.A, inst.omega, t % 2 == 0, 3);
        CHECK(coalgebra_report(td4).ok);
    }
}

TEST_CASE("keller Delta is full deconcatenation") {
    auto kel = keller(Q);
    auto td = tannakian_dual(kel.A, kel.omega, true, 6);
    for (int n = 0; n <= 6; ++n) {
        REQUIRE(td.carrier()->dim(-n) == 1);
        TupleRef ref = td.total.locate(-n, 0, td.sys);
        auto dt = delta_of_tuple(td.sys, ref);
        CHECK(int(dt.size()) == n + 1);
        // terms are exactly (xi^i, xi^j) with i + j = n, coefficient 1
        std::set<std::pair<int, int>> seen;
        for (const auto& [a, b, c] : dt) {
            CHECK(Q.eq(c, Q.one()));
            seen.insert({a.level, b.level});
            CHECK(a.level + b.level == n);
        }
        CHECK(int(seen.size()) == n + 1);
    }
}

TEST_CASE("matrix algebra is Morita-trivial") {
    auto m2 = matrix2(F109);
    auto td = tannakian_dual(m2.A, m2.omega, true, 4);
    CHECK(td.carrier()->exact == DegRange::at_least(-4));
    CHECK(homology_dim(*td.carrier(), 0) == 1);
    for (int n = -3; n < 0; ++n) CHECK(homology_dim(*td.carrier(), n) == 0);
}

TEST_CASE("normalized and unnormalized homology agree on the shared window") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 3; ++t) {
        auto inst = random_square_zero_category(F109, rng, 2, 2, 2);
        auto tdn = tannakian_dual(inst.A, inst.omega, true, 3);
        auto tdu = tannakian_dual(inst.A, inst.omega, false, 3);
        DegRange shared = tdn.carrier()->exact.intersect(tdu.carrier()->exact).shrunk(1);
        for (int n = shared.lo; n <= std::min(shared.hi, 0); ++n)
            CHECK(homology_dim(*tdn.carrier(), n) == homology_dim(*tdu.carrier(), n));
    }
}

TEST_CASE("functoriality along the identity is the identity") {
    auto kel = keller(Q);
    auto td = tannakian_dual(kel.A, kel.omega, true, 4);
    auto idf = identity_functor(kel.A);
    auto mor = functoriality_map(td, idf, td);
    CHECK(mor.cert.ok);
    for (const auto& [n, ls] : td.carrier()->space.basis)
        CHECK(mor.map.block(n) ==
              Matrix<RationalField>::identity(Q, int(ls.size())));
}

TEST_CASE("collapsing eps kills the higher classes") {
    // B = keller, A = one-object k, F sends eps to 0
    auto kel = keller(Q);
    auto triv = one_object_k(Q);
    DgFunctor<RationalField> Fn{kel.A, triv.A, {0}, {}};
    Fn.on_morphisms[{0, 0}] = {{{0, Q.one()}}, {}};  // id -> id, eps -> 0
    CHECK(validate_functor(Fn).ok);

    auto wB = pullback_fibre(Fn, *triv.omega);
    CHECK(validate_fibre_functor(*wB).ok);
    auto src = tannakian_dual(kel.A, wB, true, 4);
    auto tgt = tannakian_dual(triv.A, triv.omega, true, 4);
    auto mor = functoriality_map(src, Fn, tgt);
    CHECK(mor.cert.ok);
    CHECK(mor.map.block(0).rank() == 1);   // level 0 survives
    for (int n = -4; n < 0; ++n) CHECK(mor.map.block(n).is_zero_matrix());
}

TEST_CASE("full subcategory inclusion gives an injective coalgebra morphism") {
    std::mt19937_64 rng(13);
    auto big = random_square_zero_category(Q, rng, 2, 2, 2);
    // inclusion of object 0
    PresentationBuilder<RationalField> b(Q);
    b.add_object(big.A->objects[0]);
    b.set_hom(0, 0, big.A->hom(0, 0));
    b.set_identity(0, big.A->hom(0, 0)->space.label(0, 0));
    for (int g = 0; g < big.A->hom_dim(0, 0); ++g)
        for (int f = 0; f < big.A->hom_dim(0, 0); ++f) {
            auto r = big.A->compose(0, 0, 0, g, f);
            if (!r.empty()) b.set_compose(0, 0, 0, g, f, r);
        }
    auto sub = b.finish();
    REQUIRE(validate_category(*sub).ok);
    DgFunctor<RationalField> incl{sub, big.A, {0}, {}};
    {
        std::vector<SparseVec<RationalField>> im;
        for (int a = 0; a < sub->hom_dim(0, 0); ++a) im.push_back({{a, Q.one()}});
        incl.on_morphisms[{0, 0}] = std::move(im);
    }
    REQUIRE(validate_functor(incl).ok);
    auto wSub = pullback_fibre(incl, *big.omega);
    auto src = tannakian_dual(sub, wSub, true, 2);
    auto tgt = tannakian_dual(big.A, big.omega, true, 2);
    auto mor = functoriality_map(src, incl, tgt);
    CHECK(mor.cert.ok);
    for (const auto& [n, ls] : src.carrier()->space.basis)
        CHECK(mor.map.block(n).rank() == int(ls.size()));  // levelwise injection
}

}  // TEST_SUITE
