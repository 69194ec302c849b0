#include <doctest.h>

#include "dgtannaka/examples.hpp"

using namespace dgt;
using namespace dgt::examples;

namespace {
RationalField Q;
PrimeField F7(7);
}  // namespace

TEST_SUITE("dgcat") {

TEST_CASE("validate_category accepts the standard instances") {
    CHECK(validate_category(*one_object_k(Q).A).ok);
    CHECK(validate_category(*keller(Q).A).ok);
    CHECK(validate_category(*graded_keller(Q).A).ok);
    CHECK(validate_category(*matrix2(Q).A).ok);
    CHECK(validate_category(*matrix2(F7).A).ok);
    CHECK(validate_category(*cyclic_group_category(Q, 2).inst.A).ok);
}

TEST_CASE("validate_category rejects a broken unit law") {
    PresentationBuilder<RationalField> b2(Q);
    int x = b2.add_object("X");
    int y = b2.add_object("Y");
    b2.set_hom(x, x, basis_complex(Q, {{"idX", 0}}));
    b2.set_hom(y, y, basis_complex(Q, {{"idY", 0}}));
    b2.set_hom(x, y, basis_complex(Q, {{"f", 0}, {"g", 0}}));
    b2.set_identity(x, "idX");
    b2.set_identity(y, "idY");
    b2.set_compose(x, y, y, 0, 0, {{1, Q.one()}});  // idY . f = g
    auto A2 = b2.finish();
    CHECK_FALSE(validate_category(*A2).ok);
}

TEST_CASE("validate_category catches a non-associative table") {
    // basis id, a, b with a.a = b, a.b = id, b.a = 0:
    // (a.a).a = b.a = 0 but a.(a.a) = a.b = id
    PresentationBuilder<RationalField> b(Q);
    int s = b.add_object("*");
    b.set_hom(s, s, basis_complex(Q, {{"id", 0}, {"a", 0}, {"b", 0}}));
    b.set_identity(s, "id");
    b.set_compose(s, s, s, 1, 1, {{2, Q.one()}});
    b.set_compose(s, s, s, 1, 2, {{0, Q.one()}});
    auto A = b.finish();
    auto rep = validate_category(*A);
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (const auto& f : rep.failures)
        if (f.find("associativity") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("fibre functor validation") {
    CHECK(validate_fibre_functor(*keller(Q).omega).ok);
    CHECK(validate_fibre_functor(*graded_keller(Q).omega).ok);
    CHECK(validate_fibre_functor(*matrix2(Q).omega).ok);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 5; ++t) {
        auto inst = random_directed_category(Q, rng, 3, 2, 2, -2);
        CHECK(validate_category(*inst.A).ok);
        CHECK(validate_fibre_functor(*inst.omega).ok);
        auto inst2 = random_square_zero_category(F7, rng, 2, 2, 2);
        CHECK(validate_category(*inst2.A).ok);
        CHECK(validate_fibre_functor(*inst2.omega).ok);
    }
}

TEST_CASE("opposite is an involution and preserves validity") {
    auto inst = graded_keller(Q);
    auto op = opposite(*inst.A);
    CHECK(validate_category(*op).ok);
    auto opop = opposite(*op);
    CHECK(validate_category(*opop).ok);
    for (int g = 0; g < inst.A->hom_dim(0, 0); ++g)
        for (int f = 0; f < inst.A->hom_dim(0, 0); ++f)
            CHECK(detail::sparse_eq(Q, opop->compose(0, 0, 0, g, f),
                                    inst.A->compose(0, 0, 0, g, f)));

    std::mt19937_64 rng(7);
    auto rnd = random_square_zero_category(Q, rng, 2, 2, 2);
    CHECK(validate_category(*opposite(*rnd.A)).ok);
    // keller is commutative, so A^op has the same table
    auto kel = keller(Q);
    auto kop = opposite(*kel.A);
    CHECK(detail::sparse_eq(Q, kop->compose(0, 0, 0, 1, 1), {}));
    CHECK(detail::sparse_eq(Q, kop->compose(0, 0, 0, 0, 1), {{1, Q.one()}}));
}

TEST_CASE("tensor_categories") {
    auto kel = keller(Q);
    auto unitc = one_object_k(Q);
    auto t = tensor_categories(*kel.A, *unitc.A);
    CHECK(validate_category(*t).ok);
    CHECK(t->hom_dim(0, 0) == 2);  // A (x) k = A

    auto tt = tensor_categories(*kel.A, *kel.A);
    CHECK(validate_category(*tt).ok);
    CHECK(tt->n_objects() == 1);
    CHECK(tt->hom_dim(0, 0) == 4);

    std::mt19937_64 rng(3);
    auto a = random_square_zero_category(Q, rng, 2, 2, 1);
    auto bb = random_directed_category(Q, rng, 2, 2, 2, -1);
    CHECK(validate_category(*tensor_categories(*a.A, *bb.A)).ok);
}

TEST_CASE("coefficient and yoneda bimodules satisfy the axioms") {
    auto kel = keller(Q);
    auto cb = coefficient_bimodule(kel.A, *kel.omega);
    CHECK(validate_bimodule(cb).ok);
    CHECK(cb.R[0]->dim(0) == 1);
    CHECK(cb.L[0]->dim(0) == 1);

    auto yb = yoneda_bimodule_at(kel.A, 0, 0);
    CHECK(validate_bimodule(yb).ok);
    CHECK(yb.R[0]->dim(0) == 2);  // each free end is a copy of A
    CHECK(yb.L[0]->dim(0) == 2);

    auto gk = graded_keller(Q);
    CHECK(validate_bimodule(coefficient_bimodule(gk.A, *gk.omega)).ok);
    CHECK(validate_bimodule(yoneda_bimodule_at(gk.A, 0, 0)).ok);
    auto m2 = matrix2(F7);
    CHECK(validate_bimodule(coefficient_bimodule(m2.A, *m2.omega)).ok);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 4; ++t) {
        auto inst = random_directed_category(Q, rng, 3, 2, 2, -2);
        CHECK(validate_bimodule(coefficient_bimodule(inst.A, *inst.omega)).ok);
        CHECK(validate_bimodule(yoneda_bimodule_at(inst.A, 1, 0)).ok);
        CHECK(validate_bimodule(tilting_bimodule_at(inst.A, *inst.omega, 2)).ok);
        CHECK(validate_bimodule(predual_bimodule_at(inst.A, *inst.omega, 0)).ok);
    }
}

TEST_CASE("monoidal validation on the group category") {
    auto g2 = cyclic_group_category(Q, 2);
    CHECK(validate_monoidal(g2.monoidal).ok);
    auto g3 = cyclic_group_category(F7, 3);
    CHECK(validate_monoidal(g3.monoidal).ok);
}

TEST_CASE("interval extension") {
    auto kel = keller(Q);
    NatTransformation<RationalField> eta;
    eta.from = kel.omega.get();
    eta.to = kel.omega.get();
    eta.comp.resize(1);
    eta.comp[0].degree = 0;
    eta.comp[0].blocks[0] = Matrix<RationalField>::identity(Q, 1);
    CHECK(validate_natural(eta).ok);

    auto ext = interval_extension(kel.A, *kel.omega, *kel.omega, eta);
    CHECK(ext.axi->n_objects() == 2);
    CHECK(validate_category(*ext.axi).ok);
    CHECK(validate_fibre_functor(*ext.glued).ok);
    CHECK(validate_functor(ext.incl0).ok);
    CHECK(validate_functor(ext.incl1).ok);
    for (int i = 0; i < 2; ++i) CHECK(ext.glued->value(i)->dim(0) == 1);
    CHECK(ext.axi->hom_dim(1, 0) == 0);  // no morphisms from @1 back to @0

    // a non-natural transformation is rejected on a category where
    // naturality constrains (graded keller has omega(eps) != 0)
    auto gk = graded_keller(Q);
    NatTransformation<RationalField> bad;
    bad.from = gk.omega.get();
    bad.to = gk.omega.get();
    bad.comp.resize(1);
    bad.comp[0].degree = 0;
    bad.comp[0].blocks[-1] = Matrix<RationalField>::identity(Q, 1);
    bad.comp[0].blocks[0] =
        Matrix<RationalField>::identity(Q, 1).scaled(Q.from_long(2));
    CHECK_FALSE(validate_natural(bad).ok);
    CHECK_THROWS_AS(interval_extension(gk.A, *gk.omega, *gk.omega, bad), DgtError);
}

}  // TEST_SUITE
