#pragma once

#include <random>

#include "dgtannaka/dgcat.hpp"

/* Canonical instances used by the test suites and the bundled corpus. */

namespace dgt::examples {

template <class F>
struct Instance {
    PresentationPtr<F> A;
    FibreFunctorPtr<F> omega;
};

template <class F>
FibreFunctorPtr<F> make_fibre(const PresentationPtr<F>& A,
                              std::vector<ComplexPtr<F>> values,
                              std::map<std::pair<int, int>, std::vector<GradedBlocks<F>>>
                                  images) {
    auto w = std::make_shared<FibreFunctor<F>>();
    w->base = A;
    w->on_objects = std::move(values);
    w->on_morphisms = std::move(images);
    // identity images and zero images are filled in when absent
    const F& k = A->field;
    for (int x = 0; x < A->n_objects(); ++x)
        for (int y = 0; y < A->n_objects(); ++y) {
            auto& v = w->on_morphisms[{x, y}];
            v.resize(A->hom_dim(x, y));
            for (int a = 0; a < A->hom_dim(x, y); ++a)
                v[a].degree = A->arrow_degree(x, y, a);
            if (x == y) {
                auto& idimg = v[A->identity[x]];
                idimg.degree = 0;
                if (idimg.blocks.empty())
                    for (const auto& [m, ls] : w->on_objects[x]->space.basis)
                        if (!ls.empty())
                            idimg.blocks[m] = Matrix<F>::identity(k, int(ls.size()));
            }
        }
    return w;
}

/* the one-object category with hom = k . id */
template <class F>
Instance<F> one_object_k(const F& k) {
    PresentationBuilder<F> b(k);
    int s = b.add_object("*");
    b.set_hom(s, s, basis_complex(k, {{"id", 0}}));
    b.set_identity(s, "id");
    auto A = b.finish();
    auto w = make_fibre(A, {unit_complex(k, "e")}, {});
    return {A, w};
}

/* dual numbers A = k[eps], eps^2 = 0, with omega = k = A/eps */
template <class F>
Instance<F> keller(const F& k) {
    PresentationBuilder<F> b(k);
    int s = b.add_object("*");
    b.set_hom(s, s, basis_complex(k, {{"id", 0}, {"eps", 0}}));
    b.set_identity(s, "id");
    b.set_compose(s, s, s, 1, 1, {});  // eps . eps = 0
    auto A = b.finish();
    auto w = make_fibre(A, {unit_complex(k, "e")}, {});  // omega(eps) = 0
    return {A, w};
}

/* graded dual numbers: |eps| = -1, omega(*) two-dimensional so that
 * omega(eps) can be nonzero; a sign-heavy exemplar */
template <class F>
Instance<F> graded_keller(const F& k) {
    PresentationBuilder<F> b(k);
    int s = b.add_object("*");
    b.set_hom(s, s, basis_complex(k, {{"id", 0}, {"eps", -1}}));
    b.set_identity(s, "id");
    b.set_compose(s, s, s, 0, 0, {});  // eps.eps = 0; eps sits at flat index 0
    auto A = b.finish();
    auto W = basis_complex(k, {{"u", -1}, {"v", 0}});
    GradedBlocks<F> geps;
    geps.degree = -1;
    {
        Matrix<F> m(k, 1, 1);  // v |-> u
        m.set(0, 0, k.one());
        geps.blocks[0] = std::move(m);
    }
    std::map<std::pair<int, int>, std::vector<GradedBlocks<F>>> images;
    images[{0, 0}].resize(2);
    // flat bases sort by degree, so eps (degree -1) is flat index 0
    images[{0, 0}][0] = std::move(geps);
    auto w = make_fibre(A, {W}, std::move(images));
    return {A, w};
}

/* one-object M_2(k) with omega the column module k^2 */
template <class F>
Instance<F> matrix2(const F& k) {
    PresentationBuilder<F> b(k);
    int s = b.add_object("*");
    // basis u = id, a = e11, bndl = e12, c = e21  (e22 = u - a)
    b.set_hom(s, s, basis_complex(k, {{"id", 0}, {"e11", 0}, {"e12", 0}, {"e21", 0}}));
    b.set_identity(s, "id");
    auto one = k.one();
    auto none = k.neg(one);
    // products of the non-identity basis (g . f = matrix product)
    b.set_compose(s, s, s, 1, 1, {{1, one}});            // e11 e11 = e11
    b.set_compose(s, s, s, 1, 2, {{2, one}});            // e11 e12 = e12
    b.set_compose(s, s, s, 1, 3, {});                    // e11 e21 = 0
    b.set_compose(s, s, s, 2, 1, {});                    // e12 e11 = 0
    b.set_compose(s, s, s, 2, 2, {});                    // e12 e12 = 0
    b.set_compose(s, s, s, 2, 3, {{1, one}});            // e12 e21 = e11
    b.set_compose(s, s, s, 3, 1, {{3, one}});            // e21 e11 = e21
    b.set_compose(s, s, s, 3, 2, {{0, one}, {1, none}});  // e21 e12 = e22 = id - e11
    b.set_compose(s, s, s, 3, 3, {});                    // e21 e21 = 0
    auto A = b.finish();

    auto W = basis_complex(k, {{"x1", 0}, {"x2", 0}});
    auto mat = [&](std::initializer_list<long> vals) {
        GradedBlocks<F> g;
        g.degree = 0;
        Matrix<F> m(k, 2, 2);
        int i = 0;
        for (long v : vals) {
            if (v != 0) m.set(i / 2, i % 2, k.from_long(v));
            ++i;
        }
        g.blocks[0] = std::move(m);
        return g;
    };
    std::map<std::pair<int, int>, std::vector<GradedBlocks<F>>> images;
    images[{0, 0}].resize(4);
    images[{0, 0}][1] = mat({1, 0, 0, 0});
    images[{0, 0}][2] = mat({0, 1, 0, 0});
    images[{0, 0}][3] = mat({0, 0, 1, 0});
    auto w = make_fibre(A, {W}, std::move(images));
    return {A, w};
}

/* the discrete monoidal category of a finite abelian group, omega(g) = k */
template <class F>
struct GroupInstance {
    Instance<F> inst;
    MonoidalData<F> monoidal;
    DualityData<F> duality;
};

template <class F>
GroupInstance<F> cyclic_group_category(const F& k, int order) {
    PresentationBuilder<F> b(k);
    for (int g = 0; g < order; ++g) b.add_object("g" + std::to_string(g));
    for (int g = 0; g < order; ++g) {
        b.set_hom(g, g, basis_complex(k, {{"id" + std::to_string(g), 0}}));
        b.set_identity(g, "id" + std::to_string(g));
    }
    auto A = b.finish();
    std::vector<ComplexPtr<F>> values;
    for (int g = 0; g < order; ++g) values.push_back(unit_complex(k, "e" + std::to_string(g)));
    auto w = make_fibre(A, std::move(values), {});

    GroupInstance<F> out;
    out.inst = {A, w};
    auto& M = out.monoidal;
    M.base = A;
    M.unit = 0;
    M.symmetric = true;
    M.prod_obj.assign(order, std::vector<int>(order));
    for (int g = 0; g < order; ++g)
        for (int h = 0; h < order; ++h) M.prod_obj[g][h] = (g + h) % order;
    for (int g = 0; g < order; ++g)
        for (int h = 0; h < order; ++h) {
            Bilinear<F> bl;
            bl.set(0, 0, {{0, k.one()}});  // id_g (x) id_h = id_{g+h}
            M.prod_mor[{g, g, h, h}] = std::move(bl);
        }
    auto& D = out.duality;
    D.dual_obj.resize(order);
    for (int g = 0; g < order; ++g) D.dual_obj[g] = (order - g) % order;
    for (int g = 0; g < order; ++g) D.dual_mor[{g, g}] = {{{0, k.one()}}};
    D.omega_iso.resize(order);
    for (int g = 0; g < order; ++g) {
        D.omega_iso[g].degree = 0;
        D.omega_iso[g].blocks[0] = Matrix<F>::identity(k, 1);
    }
    return out;
}

/* ---------------- pseudo-random corpus ---------------- */

/* A random bounded complex with dims <= maxdim per degree in [lo, hi]
 * and honest differential (built from a shifted identity pattern conjugated
 * by a random basis change, so d^2 = 0 exactly). */
template <class F>
ComplexPtr<F> random_bounded_complex(const F& k, std::mt19937_64& rng, int lo, int hi,
                                     int maxdim, const std::string& prefix) {
    Complex<F> c;
    c.field = k;
    c.exact = DegRange::all();
    std::map<int, int> dims;
    int total = 0;
    for (int n = lo; n <= hi; ++n) {
        dims[n] = int(rng() % (maxdim + 1));
        total += dims[n];
    }
    if (total == 0) dims[hi] = 1;
    for (int n = lo; n <= hi; ++n)
        for (int i = 0; i < dims[n]; ++i)
            c.space.basis[n].push_back(prefix + std::to_string(n) + "_" + std::to_string(i));
    c.window = DegRange::closed(lo, hi);
    // a strictly upper "staircase" differential d with d^2 = 0: send a random
    // subset of degree-n basis vectors to distinct degree-(n+1) vectors that
    // are themselves sent to zero
    std::map<int, std::vector<int>> killed;  // targets already used as images
    for (int n = hi - 1; n >= lo; --n) {
        int dn = c.space.dim(n), dn1 = c.space.dim(n + 1);
        if (dn == 0 || dn1 == 0) continue;
        Matrix<F> d(k, dn1, dn);
        std::vector<int> free_targets;
        for (int j = 0; j < dn1; ++j) {
            bool used = false;
            for (int u : killed[n + 1])
                if (u == j) used = true;
            // vectors of degree n+1 that map onward cannot be images
            if (!used) free_targets.push_back(j);
        }
        std::vector<int> sources(dn);
        for (int i = 0; i < dn; ++i) sources[i] = i;
        for (int i = 0; i < dn && !free_targets.empty(); ++i) {
            if (rng() % 2) continue;
            int t = free_targets.back();
            free_targets.pop_back();
            d.set(t, i, k.from_long(1 + long(rng() % 3)));
            killed[n].push_back(i);
        }
        if (!d.is_zero_matrix()) c.diff[n] = std::move(d);
    }
    return make_complex(std::move(c));
}

/* Directed categories: objects form a chain X_0 -> X_1 (-> X_2); the only
 * nontrivial homs run forward, hom(X_0, X_2) = hom(X_1, X_2) (x) hom(X_0, X_1)
 * with composition the canonical map.  Associativity is automatic and any
 * graded map data yields a strict fibre functor. */
template <class F>
Instance<F> random_directed_category(const F& k, std::mt19937_64& rng, int n_objects,
                                     int max_hom_dim, int max_fibre_dim, int min_deg) {
    PresentationBuilder<F> b(k);
    for (int i = 0; i < n_objects; ++i) b.add_object("X" + std::to_string(i));
    for (int i = 0; i < n_objects; ++i) {
        b.set_hom(i, i, basis_complex(k, {{"id" + std::to_string(i), 0}}));
        b.set_identity(i, "id" + std::to_string(i));
    }
    // zero-differential hom complexes so arbitrary graded fibre images work
    std::map<std::pair<int, int>, ComplexPtr<F>> homs;
    for (int i = 0; i + 1 < n_objects; ++i) {
        int dim = 1 + int(rng() % max_hom_dim);
        Complex<F> h;
        h.field = k;
        h.exact = DegRange::all();
        for (int t = 0; t < dim; ++t) {
            int deg = -int(rng() % (1 - min_deg));
            h.space.basis[deg].push_back("f" + std::to_string(i) + "_" + std::to_string(t));
        }
        h.window = DegRange::closed(min_deg, 0);
        homs[{i, i + 1}] = make_complex(std::move(h));
        b.set_hom(i, i + 1, homs[{i, i + 1}]);
    }
    if (n_objects >= 3) {
        auto t = tensor(homs[{1, 2}], homs[{0, 1}]);
        b.set_hom(0, 2, t);
        // compose(g, f) = g (x) f, by flat position in the tensor basis
        const auto& f12 = FlatBasis<F>::of(*homs[{1, 2}]);
        const auto& f01 = FlatBasis<F>::of(*homs[{0, 1}]);
        auto ft = FlatBasis<F>::of(*t);
        for (int g = 0; g < f12.size(); ++g)
            for (int f = 0; f < f01.size(); ++f) {
                auto [dg, ig] = f12.elems[g];
                auto [df, jf] = f01.elems[f];
                TensorIndex<F> ti(*homs[{1, 2}], *homs[{0, 1}], dg + df);
                b.set_compose(0, 1, 2, g, f,
                              {{ft.find(dg + df, ti.position(dg, ig, jf)), k.one()}});
            }
    }
    auto A = b.finish();

    // fibre functor: zero-differential values, arbitrary graded images
    std::vector<ComplexPtr<F>> values;
    for (int i = 0; i < n_objects; ++i) {
        Complex<F> W;
        W.field = k;
        W.exact = DegRange::all();
        int dim = 1 + int(rng() % max_fibre_dim);
        for (int t = 0; t < dim; ++t) {
            int deg = -int(rng() % 2);
            W.space.basis[deg].push_back("w" + std::to_string(i) + "_" + std::to_string(t));
        }
        W.window = DegRange::closed(-1, 0);
        values.push_back(make_complex(std::move(W)));
    }
    std::map<std::pair<int, int>, std::vector<GradedBlocks<F>>> images;
    auto random_graded_map = [&](const ComplexPtr<F>& src, const ComplexPtr<F>& tgt,
                                 int deg) {
        GradedBlocks<F> g;
        g.degree = deg;
        for (const auto& [m, ls] : src->space.basis) {
            int rows = tgt->dim(m + deg);
            if (rows == 0 || ls.empty()) continue;
            Matrix<F> blk(k, rows, int(ls.size()));
            for (int r = 0; r < rows; ++r)
                for (int cidx = 0; cidx < int(ls.size()); ++cidx)
                    if (rng() % 2) blk.set(r, cidx, k.from_long(1 + long(rng() % 3)));
            if (!blk.is_zero_matrix()) g.blocks[m] = std::move(blk);
        }
        return g;
    };
    for (int i = 0; i + 1 < n_objects; ++i) {
        auto& v = images[{i, i + 1}];
        v.resize(A->hom_dim(i, i + 1));
        for (int a = 0; a < A->hom_dim(i, i + 1); ++a)
            v[a] = random_graded_map(values[i], values[i + 1], A->arrow_degree(i, i + 1, a));
    }
    if (n_objects >= 3) {
        // forced by functoriality on the composite hom
        auto& v = images[{0, 2}];
        v.resize(A->hom_dim(0, 2));
        const auto& f12 = A->fb(1, 2);
        const auto& f01 = A->fb(0, 1);
        for (int g = 0; g < f12.size(); ++g)
            for (int f = 0; f < f01.size(); ++f) {
                auto comp = A->compose(0, 1, 2, g, f);
                if (comp.empty()) continue;
                int target = comp[0].first;
                GradedBlocks<F> gb;
                gb.degree = f12.degree(g) + f01.degree(f);
                const auto& gi = images[{1, 2}][g];
                const auto& fi = images[{0, 1}][f];
                for (const auto& [m, blk] : fi.blocks) {
                    Matrix<F> up = gi.block(*values[1], *values[2], m + fi.degree);
                    Matrix<F> prod = up.mul(blk);
                    if (!prod.is_zero_matrix()) gb.blocks[m] = std::move(prod);
                }
                v[target] = std::move(gb);
            }
        for (int a = 0; a < A->hom_dim(0, 2); ++a)
            v[a].degree = A->arrow_degree(0, 2, a);
    }
    auto w = make_fibre(A, std::move(values), std::move(images));
    return {A, w};
}

/* Square-zero categories: arbitrary hom complexes with every composition of
 * non-identity morphisms equal to zero, and the fibre functor zero on
 * non-identity morphisms. */
template <class F>
Instance<F> random_square_zero_category(const F& k, std::mt19937_64& rng, int n_objects,
                                        int max_hom_dim, int max_fibre_dim) {
    PresentationBuilder<F> b(k);
    for (int i = 0; i < n_objects; ++i) b.add_object("Z" + std::to_string(i));
    for (int i = 0; i < n_objects; ++i)
        for (int j = 0; j < n_objects; ++j) {
            if (i == j) {
                auto endo = random_bounded_complex(k, rng, -2, 0, max_hom_dim,
                                                   "s" + std::to_string(i) + "d");
                // adjoin the identity in degree 0 with zero differential
                Complex<F> h = *endo;
                h.space.basis[0].insert(h.space.basis[0].begin(),
                                        "id" + std::to_string(i));
                if (h.diff.count(-1)) {
                    Matrix<F> old = h.diff[-1];
                    Matrix<F> d(k, old.rows() + 1, old.cols());
                    for (int r = 0; r < old.rows(); ++r)
                        for (const auto& [c, v] : old.row(r)) d.add_to(r + 1, c, v);
                    h.diff[-1] = std::move(d);
                }
                if (h.diff.count(0)) {
                    Matrix<F> old = h.diff[0];
                    Matrix<F> d(k, old.rows(), old.cols() + 1);
                    for (int r = 0; r < old.rows(); ++r)
                        for (const auto& [c, v] : old.row(r)) d.add_to(r, c + 1, v);
                    h.diff[0] = std::move(d);
                }
                b.set_hom(i, i, make_complex(std::move(h)));
                b.set_identity(i, "id" + std::to_string(i));
            } else if (rng() % 2) {
                b.set_hom(i, j,
                          random_bounded_complex(k, rng, -2, 0, max_hom_dim,
                                                 "s" + std::to_string(i) + "_" +
                                                     std::to_string(j) + "d"));
            }
        }
    auto A = b.finish();
    std::vector<ComplexPtr<F>> values;
    for (int i = 0; i < n_objects; ++i)
        values.push_back(random_bounded_complex(k, rng, -1, 0, max_fibre_dim,
                                                "w" + std::to_string(i) + "d"));
    auto w = make_fibre(A, std::move(values), {});
    return {A, w};
}

}  // namespace dgt::examples
