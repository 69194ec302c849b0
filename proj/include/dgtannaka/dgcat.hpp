#pragma once

#include <functional>
#include <tuple>

#include "dgtannaka/complex.hpp"

namespace dgt {

/* Flat enumeration of a complex's basis: degree ascending, then index.
 * Structure constants and Hochschild tuples refer to these flat indices. */
template <class F>
struct FlatBasis {
    std::vector<std::pair<int, int>> elems;  // (degree, index within degree)
    std::map<std::pair<int, int>, int> pos;

    static FlatBasis of(const Complex<F>& c) {
        FlatBasis fb;
        for (const auto& [n, ls] : c.space.basis)
            for (int i = 0; i < int(ls.size()); ++i) {
                fb.pos[{n, i}] = int(fb.elems.size());
                fb.elems.push_back({n, i});
            }
        return fb;
    }
    int size() const { return int(elems.size()); }
    int degree(int flat) const { return elems[flat].first; }
    int index(int flat) const { return elems[flat].second; }
    int find(int deg, int idx) const {
        auto it = pos.find({deg, idx});
        return it == pos.end() ? -1 : it->second;
    }
};

template <class F>
using SparseVec = std::vector<std::pair<int, typename F::Elt>>;  // (flat index, coeff)

template <class F>
void sparse_add(const F& k, SparseVec<F>& dst, int idx, const typename F::Elt& v) {
    for (auto& [i, c] : dst)
        if (i == idx) {
            c = k.add(c, v);
            return;
        }
    if (!k.is_zero(v)) dst.push_back({idx, v});
}

template <class F>
void sparse_prune(const F& k, SparseVec<F>& v) {
    std::erase_if(v, [&](const auto& e) { return k.is_zero(e.second); });
}

/* Bilinear structure constants on flat bases. Missing rows read as zero. */
template <class F>
struct Bilinear {
    std::vector<std::vector<SparseVec<F>>> table;  // [a][b] -> result

    SparseVec<F> eval(int a, int b) const {
        if (a < int(table.size()) && b < int(table[a].size())) return table[a][b];
        return {};
    }
    void set(int a, int b, SparseVec<F> v) {
        if (a >= int(table.size())) table.resize(a + 1);
        if (b >= int(table[a].size())) table[a].resize(b + 1);
        table[a][b] = std::move(v);
    }
};

/* Degree-homogeneous graded map between complexes, stored as blocks by
 * source degree.  The functor images omega(a) live here. */
template <class F>
struct GradedBlocks {
    int degree = 0;
    std::map<int, Matrix<F>> blocks;  // source degree -> matrix

    Matrix<F> block(const Complex<F>& src, const Complex<F>& tgt, int n) const {
        auto it = blocks.find(n);
        if (it != blocks.end()) return it->second;
        return Matrix<F>::zero(src.field, tgt.dim(n + degree), src.dim(n));
    }
};

template <class F>
ChainMap<F> as_chain_map(const GradedBlocks<F>& g, const ComplexPtr<F>& src,
                         const ComplexPtr<F>& tgt) {
    ChainMap<F> f{src, tgt, g.degree, {}};
    for (const auto& [n, m] : g.blocks) f.set_block(n, m);
    return f;
}

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
    std::string describe() const {
        if (ok) return "pass";
        std::string s = "FAIL";
        for (const auto& f : failures) s += "\n  - " + f;
        return s;
    }
};

/* ------------------------------------------------------------------ */
/* Finitely presented dg category                                      */
/* ------------------------------------------------------------------ */

/* hom(x, y) holds the morphisms x -> y.  The Hochschild builder reads the
 * paper's accessor A(x,y) as hom(y, x); that translation happens there, once. */
template <class F>
struct Presentation {
    F field;
    std::vector<std::string> objects;
    std::map<std::pair<int, int>, ComplexPtr<F>> homs;      // (from,to)
    std::map<std::pair<int, int>, FlatBasis<F>> flat;       // aligned with homs
    std::map<std::tuple<int, int, int>, Bilinear<F>> comp;  // (x,y,z): hom(y,z)(x)hom(x,y)->hom(x,z)
    std::vector<int> identity;                              // flat index in hom(x,x)

    int n_objects() const { return int(objects.size()); }
    int object_index(const std::string& name) const {
        for (int i = 0; i < n_objects(); ++i)
            if (objects[i] == name) return i;
        fail("UnknownObject", name);
    }
    const ComplexPtr<F>& hom(int x, int y) const { return homs.at({x, y}); }
    const FlatBasis<F>& fb(int x, int y) const { return flat.at({x, y}); }
    int hom_dim(int x, int y) const { return fb(x, y).size(); }

    SparseVec<F> compose(int x, int y, int z, int g, int f) const {
        auto it = comp.find({x, y, z});
        if (it == comp.end()) return {};
        return it->second.eval(g, f);
    }
    int arrow_degree(int x, int y, int a) const { return fb(x, y).degree(a); }
    std::string arrow_label(int x, int y, int a) const {
        auto [d, i] = fb(x, y).elems[a];
        return hom(x, y)->space.label(d, i);
    }
    /* locate a basis morphism by label anywhere in the category */
    std::optional<std::tuple<int, int, int>> find_arrow(const std::string& label) const {
        for (const auto& [key, cx] : homs) {
            const auto& f = flat.at(key);
            for (int a = 0; a < f.size(); ++a) {
                auto [d, i] = f.elems[a];
                if (cx->space.label(d, i) == label) return std::tuple{key.first, key.second, a};
            }
        }
        return std::nullopt;
    }
};

template <class F>
using PresentationPtr = std::shared_ptr<const Presentation<F>>;

template <class F>
class PresentationBuilder {
  public:
    explicit PresentationBuilder(F field) : p_(std::make_shared<Presentation<F>>()) {
        p_->field = std::move(field);
    }
    int add_object(const std::string& name) {
        p_->objects.push_back(name);
        return int(p_->objects.size()) - 1;
    }
    void set_hom(int x, int y, ComplexPtr<F> c) {
        p_->flat[{x, y}] = FlatBasis<F>::of(*c);
        p_->homs[{x, y}] = std::move(c);
    }
    void set_identity(int x, const std::string& label) {
        const auto& f = p_->flat.at({x, x});
        const auto& cx = p_->homs.at({x, x});
        for (int a = 0; a < f.size(); ++a) {
            auto [d, i] = f.elems[a];
            if (cx->space.label(d, i) == label) {
                if (d != 0) fail("BadIdentity", "identity must have degree 0");
                if (int(p_->identity.size()) <= x) p_->identity.resize(x + 1, -1);
                p_->identity[x] = a;
                return;
            }
        }
        fail("BadIdentity", "no basis vector '" + label + "' in hom(" +
                                p_->objects[x] + "," + p_->objects[x] + ")");
    }
    /* structure constant g . f for g: y->z, f: x->y */
    void set_compose(int x, int y, int z, int g, int f, SparseVec<F> result) {
        p_->comp[{x, y, z}].set(g, f, std::move(result));
    }

    /* fill hom complexes absent from the table with zero complexes, and the
     * compositions forced by identities */
    PresentationPtr<F> finish() {
        const F& k = p_->field;
        int n = p_->n_objects();
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (!p_->homs.count({x, y})) {
                    auto z = zero_complex(k);
                    p_->flat[{x, y}] = FlatBasis<F>::of(*z);
                    p_->homs[{x, y}] = z;
                }
        if (int(p_->identity.size()) < n) fail("BadIdentity", "missing identities");
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                int dxy = p_->hom_dim(x, y);
                for (int a = 0; a < dxy; ++a) {
                    // id_y . a = a    (g = id in hom(y,y))
                    auto& cy = p_->comp[{x, y, y}];
                    if (cy.eval(p_->identity[y], a).empty())
                        cy.set(p_->identity[y], a, {{a, k.one()}});
                    // a . id_x = a
                    auto& cx = p_->comp[{x, x, y}];
                    if (cx.eval(a, p_->identity[x]).empty())
                        cx.set(a, p_->identity[x], {{a, k.one()}});
                }
            }
        return p_;
    }

  private:
    std::shared_ptr<Presentation<F>> p_;
};

/* convenience: a complex concentrated in given degrees with given labels */
template <class F>
ComplexPtr<F> basis_complex(const F& k, const std::vector<std::pair<std::string, int>>& gens,
                            const std::vector<std::tuple<std::string, std::string, std::string>>&
                                diff = {}) {
    Complex<F> c;
    c.field = k;
    std::map<std::string, std::pair<int, int>> where;
    for (const auto& [name, deg] : gens) {
        where[name] = {deg, int(c.space.basis[deg].size())};
        c.space.basis[deg].push_back(name);
    }
    int lo = c.space.support_lo(), hi = c.space.support_hi();
    c.window = DegRange::closed(std::min(lo, 0), std::max(hi, 0));
    c.exact = DegRange::all();
    std::map<int, Matrix<F>> dm;
    for (const auto& [from, to, coeff] : diff) {
        auto [dfrom, ifrom] = where.at(from);
        auto [dto, ito] = where.at(to);
        if (dto != dfrom + 1) fail("BadDifferential", from + " -> " + to);
        auto it = dm.find(dfrom);
        if (it == dm.end())
            it = dm.emplace(dfrom, Matrix<F>(k, c.space.dim(dfrom + 1), c.space.dim(dfrom)))
                     .first;
        it->second.add_to(ito, ifrom, k.parse(coeff));
    }
    for (auto& [n, m] : dm)
        if (!m.is_zero_matrix()) c.diff[n] = m;
    return make_complex(std::move(c));
}

/* ------------------------------------------------------------------ */
/* Category axioms                                                     */
/* ------------------------------------------------------------------ */

namespace detail {

/* differential of a basis vector as a sparse vector on the flat basis */
template <class F>
SparseVec<F> flat_d(const Complex<F>& cx, const FlatBasis<F>& fb, int v) {
    auto [deg, idx] = fb.elems[v];
    SparseVec<F> out;
    Matrix<F> d = cx.dmat(deg);
    for (int r = 0; r < d.rows(); ++r) {
        auto c = d.get(r, idx);
        if (!cx.field.is_zero(c)) out.push_back({fb.find(deg + 1, r), c});
    }
    return out;
}

template <class F>
SparseVec<F> arrow_d(const Presentation<F>& A, int x, int y, int a) {
    return flat_d(*A.hom(x, y), A.fb(x, y), a);
}

template <class F>
SparseVec<F> sparse_compose(const Presentation<F>& A, int x, int y, int z,
                            const SparseVec<F>& g, const SparseVec<F>& f) {
    const auto& k = A.field;
    SparseVec<F> out;
    for (const auto& [ga, gc] : g)
        for (const auto& [fa, fc] : f)
            for (const auto& [r, rc] : A.compose(x, y, z, ga, fa))
                sparse_add(k, out, r, k.mul(k.mul(gc, fc), rc));
    sparse_prune(k, out);
    return out;
}

template <class F>
bool sparse_eq(const F& k, SparseVec<F> a, SparseVec<F> b) {
    sparse_prune(k, a);
    sparse_prune(k, b);
    auto cmp = [](const auto& u, const auto& v) { return u.first < v.first; };
    std::sort(a.begin(), a.end(), cmp);
    std::sort(b.begin(), b.end(), cmp);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || !k.eq(a[i].second, b[i].second)) return false;
    return true;
}

}  // namespace detail

template <class F>
ValidationReport validate_category(const Presentation<F>& A) {
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            auto cr = validate_complex(A.hom(x, y));
            rep.expect(cr.ok, "d^2 != 0 on hom(" + A.objects[x] + "," + A.objects[y] + ")");
        }

    // identities: degree-0 basis vectors, closed, two-sided units
    for (int x = 0; x < n; ++x) {
        int e = A.identity[x];
        rep.expect(A.arrow_degree(x, x, e) == 0, "id_" + A.objects[x] + " not in degree 0");
        rep.expect(detail::arrow_d(A, x, x, e).empty(), "d(id_" + A.objects[x] + ") != 0");
        for (int y = 0; y < n; ++y) {
            for (int a = 0; a < A.hom_dim(x, y); ++a) {
                rep.expect(detail::sparse_eq(k, A.compose(x, y, y, A.identity[y], a),
                                             {{a, k.one()}}),
                           "id . " + A.arrow_label(x, y, a) + " != it");
                rep.expect(detail::sparse_eq(k, A.compose(x, x, y, a, A.identity[x]),
                                             {{a, k.one()}}),
                           A.arrow_label(x, y, a) + " . id != it");
            }
        }
    }

    // composition lands in the right degree and satisfies the Leibniz rule
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                for (int g = 0; g < A.hom_dim(y, z); ++g)
                    for (int f = 0; f < A.hom_dim(x, y); ++f) {
                        int dg = A.arrow_degree(y, z, g), df = A.arrow_degree(x, y, f);
                        for (const auto& [r, c] : A.compose(x, y, z, g, f))
                            rep.expect(A.arrow_degree(x, z, r) == dg + df,
                                       "composition not degree-additive at " +
                                           A.arrow_label(y, z, g) + " . " +
                                           A.arrow_label(x, y, f));
                        // d(g.f) = dg.f + (-1)^{|g|} g.df
                        SparseVec<F> lhs;
                        for (const auto& [r, c] : A.compose(x, y, z, g, f))
                            for (const auto& [s, w] : detail::arrow_d(A, x, z, r))
                                sparse_add(k, lhs, s, k.mul(c, w));
                        SparseVec<F> rhs;
                        for (const auto& [gg, gc] : detail::arrow_d(A, y, z, g))
                            for (const auto& [r, c] : A.compose(x, y, z, gg, f))
                                sparse_add(k, rhs, r, k.mul(gc, c));
                        typename F::Elt s = dg % 2 == 0 ? k.one() : k.neg(k.one());
                        for (const auto& [ff, fc] : detail::arrow_d(A, x, y, f))
                            for (const auto& [r, c] : A.compose(x, y, z, g, ff))
                                sparse_add(k, rhs, r, k.mul(s, k.mul(fc, c)));
                        rep.expect(detail::sparse_eq(k, lhs, rhs),
                                   "Leibniz fails at " + A.arrow_label(y, z, g) + " . " +
                                       A.arrow_label(x, y, f));
                    }
            }

    // associativity on all basis triples
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w)
                    for (int h = 0; h < A.hom_dim(z, w); ++h)
                        for (int g = 0; g < A.hom_dim(y, z); ++g)
                            for (int f = 0; f < A.hom_dim(x, y); ++f) {
                                auto hg = A.compose(y, z, w, h, g);
                                auto lhs = detail::sparse_compose(A, x, y, w, hg,
                                                                  {{f, k.one()}});
                                auto gf = A.compose(x, y, z, g, f);
                                auto rhs = detail::sparse_compose(A, x, z, w, {{h, k.one()}},
                                                                  gf);
                                rep.expect(detail::sparse_eq(k, lhs, rhs),
                                           "associativity fails at (" +
                                               A.arrow_label(z, w, h) + ", " +
                                               A.arrow_label(y, z, g) + ", " +
                                               A.arrow_label(x, y, f) + ")");
                            }
    return rep;
}

/* ------------------------------------------------------------------ */
/* Opposite and tensor product of categories                           */
/* ------------------------------------------------------------------ */

/* hom_op(x,y) = hom(y,x), g .op f = (-1)^{|f||g|} f . g */
template <class F>
PresentationPtr<F> opposite(const Presentation<F>& A) {
    const F& k = A.field;
    auto op = std::make_shared<Presentation<F>>();
    op->field = k;
    op->objects = A.objects;
    int n = A.n_objects();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            op->homs[{x, y}] = A.hom(y, x);
            op->flat[{x, y}] = A.fb(y, x);
        }
    op->identity = A.identity;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                // comp_op(x,y,z): hom_op(y,z) (x) hom_op(x,y) -> hom_op(x,z)
                //               = hom(z,y)    (x) hom(y,x)    -> hom(z,x)
                Bilinear<F> bl;
                for (int g = 0; g < A.hom_dim(z, y); ++g)
                    for (int f = 0; f < A.hom_dim(y, x); ++f) {
                        auto r = A.compose(z, y, x, f, g);
                        if (r.empty()) continue;
                        int dg = A.arrow_degree(z, y, g), df = A.arrow_degree(y, x, f);
                        if (dg % 2 != 0 && df % 2 != 0) {
                            for (auto& [i, c] : r) c = k.neg(c);
                        }
                        bl.set(g, f, std::move(r));
                    }
                op->comp[{x, y, z}] = std::move(bl);
            }
    return op;
}

/* objects are pairs, hom((x,u),(y,v)) = hom(x,y) (x) hom(u,v), with the
 * Koszul interchange sign in composition. */
template <class F>
PresentationPtr<F> tensor_categories(const Presentation<F>& A, const Presentation<F>& B) {
    const F& k = A.field;
    if (!(k == B.field)) fail("FieldMismatch", "tensor of categories over different fields");
    auto t = std::make_shared<Presentation<F>>();
    t->field = k;
    int na = A.n_objects(), nb = B.n_objects();
    auto obj = [&](int x, int u) { return x * nb + u; };
    for (int x = 0; x < na; ++x)
        for (int u = 0; u < nb; ++u)
            t->objects.push_back("(" + A.objects[x] + "," + B.objects[u] + ")");

    for (int x = 0; x < na; ++x)
        for (int u = 0; u < nb; ++u)
            for (int y = 0; y < na; ++y)
                for (int v = 0; v < nb; ++v) {
                    auto h = tensor(A.hom(x, y), B.hom(u, v));
                    t->flat[{obj(x, u), obj(y, v)}] = FlatBasis<F>::of(*h);
                    t->homs[{obj(x, u), obj(y, v)}] = std::move(h);
                }

    t->identity.resize(na * nb, -1);
    auto pair_flat = [&](int x, int y, int u, int v, int a, int b) {
        // flat index of (a,b) inside hom(x,y) (x) hom(u,v)
        const auto& fa = A.fb(x, y);
        const auto& fub = B.fb(u, v);
        auto [da, ia] = fa.elems[a];
        auto [db, ib] = fub.elems[b];
        TensorIndex<F> ti(*A.hom(x, y), *B.hom(u, v), da + db);
        int p = ti.position(da, ia, ib);
        return t->flat.at({obj(x, u), obj(y, v)}).find(da + db, p);
    };
    for (int x = 0; x < na; ++x)
        for (int u = 0; u < nb; ++u)
            t->identity[obj(x, u)] = pair_flat(x, x, u, u, A.identity[x], B.identity[u]);

    for (int x = 0; x < na; ++x)
        for (int y = 0; y < na; ++y)
            for (int z = 0; z < na; ++z)
                for (int u = 0; u < nb; ++u)
                    for (int v = 0; v < nb; ++v)
                        for (int w = 0; w < nb; ++w) {
                            Bilinear<F> bl;
                            bool any = false;
                            for (int g = 0; g < A.hom_dim(y, z); ++g)
                                for (int h = 0; h < B.hom_dim(v, w); ++h)
                                    for (int f = 0; f < A.hom_dim(x, y); ++f)
                                        for (int e = 0; e < B.hom_dim(u, v); ++e) {
                                            auto gf = A.compose(x, y, z, g, f);
                                            auto he = B.compose(u, v, w, h, e);
                                            if (gf.empty() || he.empty()) continue;
                                            int dh = B.arrow_degree(v, w, h);
                                            int df = A.arrow_degree(x, y, f);
                                            typename F::Elt s =
                                                (dh % 2 != 0 && df % 2 != 0)
                                                    ? k.neg(k.one())
                                                    : k.one();
                                            SparseVec<F> out;
                                            for (const auto& [r1, c1] : gf)
                                                for (const auto& [r2, c2] : he)
                                                    sparse_add(
                                                        k, out,
                                                        pair_flat(x, z, u, w, r1, r2),
                                                        k.mul(s, k.mul(c1, c2)));
                                            sparse_prune(k, out);
                                            if (!out.empty()) {
                                                bl.set(pair_flat(y, z, v, w, g, h),
                                                       pair_flat(x, y, u, v, f, e),
                                                       std::move(out));
                                                any = true;
                                            }
                                        }
                            if (any)
                                t->comp[{obj(x, u), obj(y, v), obj(z, w)}] = std::move(bl);
                        }
    return t;
}

/* ------------------------------------------------------------------ */
/* Fibre functors                                                      */
/* ------------------------------------------------------------------ */

template <class F>
struct FibreFunctor {
    PresentationPtr<F> base;
    std::vector<ComplexPtr<F>> on_objects;                      // per object
    std::map<std::pair<int, int>, std::vector<GradedBlocks<F>>> on_morphisms;
    // per (x,y): images of the flat basis of hom(x,y), as graded maps w(x)->w(y)

    const ComplexPtr<F>& value(int x) const { return on_objects[x]; }
    const GradedBlocks<F>& image(int x, int y, int a) const {
        return on_morphisms.at({x, y})[a];
    }
};

template <class F>
using FibreFunctorPtr = std::shared_ptr<const FibreFunctor<F>>;

template <class F>
ValidationReport validate_fibre_functor(const FibreFunctor<F>& w) {
    const auto& A = *w.base;
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();

    for (int x = 0; x < n; ++x) {
        rep.expect(validate_complex(w.value(x)).ok, "d^2 != 0 on w(" + A.objects[x] + ")");
        rep.expect(w.value(x)->space.total_dim() >= 0 &&
                       w.value(x)->exact == DegRange::all(),
                   "w(" + A.objects[x] + ") must be a bounded, fully known complex");
    }

    // w(id) = id
    for (int x = 0; x < n; ++x) {
        const auto& g = w.image(x, x, A.identity[x]);
        bool ok = g.degree == 0;
        for (const auto& [m, ls] : w.value(x)->space.basis)
            ok = ok && g.block(*w.value(x), *w.value(x), m) ==
                           Matrix<F>::identity(k, int(ls.size()));
        rep.expect(ok, "w(id_" + A.objects[x] + ") != id");
    }

    // each w(a) has the degree of a, and w is a chain map hom(x,y) -> Hom(wx, wy):
    // w(da) = d . w(a) - (-1)^{|a|} w(a) . d
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const auto& wx = *w.value(x);
            const auto& wy = *w.value(y);
            for (int a = 0; a < A.hom_dim(x, y); ++a) {
                int da = A.arrow_degree(x, y, a);
                const auto& ga = w.image(x, y, a);
                rep.expect(ga.degree == da,
                           "w(" + A.arrow_label(x, y, a) + ") has wrong degree");
                for (int m = wx.window.lo - 1; m <= wx.window.hi + 1; ++m) {
                    Matrix<F> lhs(k, wy.dim(m + da + 1), wx.dim(m));
                    for (const auto& [b, c] : detail::arrow_d(A, x, y, a)) {
                        auto gb = w.image(x, y, b);
                        lhs = lhs.add(gb.block(wx, wy, m).scaled(c));
                    }
                    Matrix<F> rhs = wy.dmat(m + da).mul(ga.block(wx, wy, m));
                    Matrix<F> corr = ga.block(wx, wy, m + 1).mul(wx.dmat(m));
                    rhs = (da % 2 == 0) ? rhs.sub(corr) : rhs.add(corr);
                    rep.expect(lhs == rhs, "w not a chain map at " + A.arrow_label(x, y, a));
                }
            }
        }

    // functoriality on compositions: w(g.f) = w(g) . w(f)
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int g = 0; g < A.hom_dim(y, z); ++g)
                    for (int f = 0; f < A.hom_dim(x, y); ++f) {
                        const auto& wx = *w.value(x);
                        const auto& wy = *w.value(y);
                        const auto& wz = *w.value(z);
                        int dg = A.arrow_degree(y, z, g), df = A.arrow_degree(x, y, f);
                        for (int m = wx.window.lo; m <= wx.window.hi; ++m) {
                            Matrix<F> lhs(k, wz.dim(m + dg + df), wx.dim(m));
                            for (const auto& [r, c] : A.compose(x, y, z, g, f))
                                lhs = lhs.add(
                                    w.image(x, z, r).block(wx, wz, m).scaled(c));
                            Matrix<F> rhs = w.image(y, z, g)
                                                .block(wy, wz, m + df)
                                                .mul(w.image(x, y, f).block(wx, wy, m));
                            rep.expect(lhs == rhs,
                                       "w(g.f) != w(g)w(f) at " + A.arrow_label(y, z, g) +
                                           " . " + A.arrow_label(x, y, f));
                        }
                    }
    return rep;
}

/* ------------------------------------------------------------------ */
/* Outer-product bimodules  F(x,y) = R(x) (x) L(y)                     */
/* ------------------------------------------------------------------ */

/* Coefficients of every Hochschild complex in this artifact have this shape:
 * a covariant factor R and a contravariant factor L, acted on through the
 * two contraction tables.  All contractions are degree preserving in the
 * sense |result| = |a| + |operand|. */
template <class F>
struct OuterBimodule {
    PresentationPtr<F> base;
    std::vector<ComplexPtr<F>> R, L;               // per object
    std::vector<FlatBasis<F>> Rflat, Lflat;
    // r_act[(x,y)]: (a in hom(x,y), r in R(x)) -> R(y)
    std::map<std::pair<int, int>, Bilinear<F>> r_act;
    // l_act[(x,y)]: (l in L(y), a in hom(x,y)) -> L(x)
    std::map<std::pair<int, int>, Bilinear<F>> l_act;
    std::string name;

    SparseVec<F> act_r(int x, int y, int a, int r) const {
        auto it = r_act.find({x, y});
        return it == r_act.end() ? SparseVec<F>{} : it->second.eval(a, r);
    }
    SparseVec<F> act_l(int x, int y, int l, int a) const {
        auto it = l_act.find({x, y});
        return it == l_act.end() ? SparseVec<F>{} : it->second.eval(l, a);
    }
};

namespace detail {

template <class F>
Bilinear<F> action_from_blocks(const Presentation<F>& A, int x, int y,
                               const std::vector<GradedBlocks<F>>& images,
                               const Complex<F>& src, const Complex<F>& tgt,
                               const FlatBasis<F>& sf, const FlatBasis<F>& tf) {
    // (a, r) -> image of basis vector r under images[a]
    const F& k = A.field;
    Bilinear<F> bl;
    for (int a = 0; a < int(images.size()); ++a) {
        const auto& g = images[a];
        for (int r = 0; r < sf.size(); ++r) {
            auto [m, i] = sf.elems[r];
            Matrix<F> blk = g.block(src, tgt, m);
            SparseVec<F> out;
            for (int q = 0; q < blk.rows(); ++q) {
                auto v = blk.get(q, i);
                if (!k.is_zero(v)) out.push_back({tf.find(m + g.degree, q), v});
            }
            if (!out.empty()) bl.set(a, r, std::move(out));
        }
    }
    return bl;
}

}  // namespace detail

/* F(x,y) = w(x) (x) w(y)^v; the right contraction is phi |-> phi . w(a). */
template <class F>
OuterBimodule<F> coefficient_bimodule(const PresentationPtr<F>& A,
                                      const FibreFunctor<F>& w) {
    const F& k = A->field;
    OuterBimodule<F> bm;
    bm.base = A;
    bm.name = "w(x)w^v";
    int n = A->n_objects();
    bm.R.resize(n);
    bm.L.resize(n);
    bm.Rflat.resize(n);
    bm.Lflat.resize(n);
    for (int x = 0; x < n; ++x) {
        bm.R[x] = w.value(x);
        bm.L[x] = dual(w.value(x));
        bm.Rflat[x] = FlatBasis<F>::of(*bm.R[x]);
        bm.Lflat[x] = FlatBasis<F>::of(*bm.L[x]);
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            bm.r_act[{x, y}] = detail::action_from_blocks(
                *A, x, y, w.on_morphisms.at({x, y}), *bm.R[x], *bm.R[y], bm.Rflat[x],
                bm.Rflat[y]);
            // l_act: (phi in L(y) = w(y)^v, a in hom(x,y)) -> phi . w(a) in L(x)
            Bilinear<F> bl;
            for (int a = 0; a < A->hom_dim(x, y); ++a) {
                const auto& g = w.image(x, y, a);
                for (int l = 0; l < bm.Lflat[y].size(); ++l) {
                    auto [dl, q] = bm.Lflat[y].elems[l];  // phi_q on w(y)^{-dl}
                    int m = -dl - g.degree;               // source degree in w(x)
                    Matrix<F> blk = g.block(*w.value(x), *w.value(y), m);
                    SparseVec<F> out;
                    for (int p = 0; p < blk.cols(); ++p) {
                        auto v = blk.get(q, p);
                        if (!k.is_zero(v))
                            out.push_back({bm.Lflat[x].find(-m, p), v});
                    }
                    if (!out.empty()) bl.set(l, a, std::move(out));
                }
            }
            bm.l_act[{x, y}] = std::move(bl);
        }
    return bm;
}

/* F(x,y) for the Yoneda coefficient at target pair (U, V):
 * R(x) = hom(V, x), L(y) = hom(y, U); contractions are compositions. */
template <class F>
OuterBimodule<F> yoneda_bimodule_at(const PresentationPtr<F>& A, int U, int V) {
    const F& k = A->field;
    OuterBimodule<F> bm;
    bm.base = A;
    bm.name = "h(x)h at (" + A->objects[U] + "," + A->objects[V] + ")";
    int n = A->n_objects();
    bm.R.resize(n);
    bm.L.resize(n);
    bm.Rflat.resize(n);
    bm.Lflat.resize(n);
    for (int x = 0; x < n; ++x) {
        bm.R[x] = A->hom(V, x);
        bm.L[x] = A->hom(x, U);
        bm.Rflat[x] = A->fb(V, x);
        bm.Lflat[x] = A->fb(x, U);
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            // r_act: (a: x->y, r: V->x) -> a . r : V->y
            Bilinear<F> br;
            for (int a = 0; a < A->hom_dim(x, y); ++a)
                for (int r = 0; r < A->hom_dim(V, x); ++r) {
                    auto out = A->compose(V, x, y, a, r);
                    if (!out.empty()) br.set(a, r, std::move(out));
                }
            bm.r_act[{x, y}] = std::move(br);
            // l_act: (l: y->U, a: x->y) -> l . a : x->U
            Bilinear<F> blm;
            for (int l = 0; l < A->hom_dim(y, U); ++l)
                for (int a = 0; a < A->hom_dim(x, y); ++a) {
                    auto out = A->compose(x, y, U, l, a);
                    if (!out.empty()) blm.set(l, a, std::move(out));
                }
            bm.l_act[{x, y}] = std::move(blm);
        }
    return bm;
}

/* tilting coefficient: R = w, L(y) = hom(y, U) */
template <class F>
OuterBimodule<F> tilting_bimodule_at(const PresentationPtr<F>& A, const FibreFunctor<F>& w,
                                     int U) {
    OuterBimodule<F> ydl = yoneda_bimodule_at(A, U, 0);
    OuterBimodule<F> coef = coefficient_bimodule(A, w);
    OuterBimodule<F> bm;
    bm.base = A;
    bm.name = "h(x)w at " + A->objects[U];
    bm.R = coef.R;
    bm.Rflat = coef.Rflat;
    bm.r_act = coef.r_act;
    bm.L = ydl.L;
    bm.Lflat = ydl.Lflat;
    bm.l_act = ydl.l_act;
    return bm;
}

/* Q coefficient: R(x) = hom(V, x), L = w^v */
template <class F>
OuterBimodule<F> predual_bimodule_at(const PresentationPtr<F>& A, const FibreFunctor<F>& w,
                                     int V) {
    OuterBimodule<F> ydl = yoneda_bimodule_at(A, 0, V);
    OuterBimodule<F> coef = coefficient_bimodule(A, w);
    OuterBimodule<F> bm;
    bm.base = A;
    bm.name = "w^v(x)h at " + A->objects[V];
    bm.R = ydl.R;
    bm.Rflat = ydl.Rflat;
    bm.r_act = ydl.r_act;
    bm.L = coef.L;
    bm.Lflat = coef.Lflat;
    bm.l_act = coef.l_act;
    return bm;
}

/* bimodule axioms, checked through the contraction tables */
template <class F>
ValidationReport validate_bimodule(const OuterBimodule<F>& bm) {
    const auto& A = *bm.base;
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();

    // unit: id acts as identity on both sides
    for (int x = 0; x < n; ++x) {
        for (int r = 0; r < bm.Rflat[x].size(); ++r)
            rep.expect(detail::sparse_eq(k, bm.act_r(x, x, A.identity[x], r),
                                         {{r, k.one()}}),
                       bm.name + ": id . r != r");
        for (int l = 0; l < bm.Lflat[x].size(); ++l)
            rep.expect(detail::sparse_eq(k, bm.act_l(x, x, l, A.identity[x]),
                                         {{l, k.one()}}),
                       bm.name + ": l . id != l");
    }

    // associativity of the right action: b.(a.r) = (b.a).r
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int b = 0; b < A.hom_dim(y, z); ++b)
                    for (int a = 0; a < A.hom_dim(x, y); ++a)
                        for (int r = 0; r < bm.Rflat[x].size(); ++r) {
                            SparseVec<F> lhs;
                            for (const auto& [m, c] : bm.act_r(x, y, a, r))
                                for (const auto& [q, w2] : bm.act_r(y, z, b, m))
                                    sparse_add(k, lhs, q, k.mul(c, w2));
                            SparseVec<F> rhs;
                            for (const auto& [ba, c] : A.compose(x, y, z, b, a))
                                for (const auto& [q, w2] : bm.act_r(x, z, ba, r))
                                    sparse_add(k, rhs, q, k.mul(c, w2));
                            rep.expect(detail::sparse_eq(k, lhs, rhs),
                                       bm.name + ": right action not associative");
                        }

    // associativity of the left contraction: (l.b).a = l.(b.a)
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int l = 0; l < bm.Lflat[z].size(); ++l)
                    for (int b = 0; b < A.hom_dim(y, z); ++b)
                        for (int a = 0; a < A.hom_dim(x, y); ++a) {
                            SparseVec<F> lhs;
                            for (const auto& [m, c] : bm.act_l(y, z, l, b))
                                for (const auto& [q, w2] : bm.act_l(x, y, m, a))
                                    sparse_add(k, lhs, q, k.mul(c, w2));
                            SparseVec<F> rhs;
                            for (const auto& [ba, c] : A.compose(x, y, z, b, a))
                                for (const auto& [q, w2] : bm.act_l(x, z, l, ba))
                                    sparse_add(k, rhs, q, k.mul(c, w2));
                            rep.expect(detail::sparse_eq(k, lhs, rhs),
                                       bm.name + ": left contraction not associative");
                        }

    // both contractions are chain maps:
    //   d(a.r) = (da).r + (-1)^{|a|} a.(dr)    d(l.a) = (dl).a + (-1)^{|l|} l.(da)
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y) {
            for (int a = 0; a < A.hom_dim(x, y); ++a) {
                int da = A.arrow_degree(x, y, a);
                for (int r = 0; r < bm.Rflat[x].size(); ++r) {
                    SparseVec<F> lhs;
                    for (const auto& [m, c] : bm.act_r(x, y, a, r))
                        for (const auto& [q, w2] : detail::flat_d(*bm.R[y], bm.Rflat[y], m))
                            sparse_add(k, lhs, q, k.mul(c, w2));
                    SparseVec<F> rhs;
                    for (const auto& [aa, c] : detail::arrow_d(A, x, y, a))
                        for (const auto& [q, w2] : bm.act_r(x, y, aa, r))
                            sparse_add(k, rhs, q, k.mul(c, w2));
                    typename F::Elt s = da % 2 == 0 ? k.one() : k.neg(k.one());
                    for (const auto& [rr, c] : detail::flat_d(*bm.R[x], bm.Rflat[x], r))
                        for (const auto& [q, w2] : bm.act_r(x, y, a, rr))
                            sparse_add(k, rhs, q, k.mul(s, k.mul(c, w2)));
                    rep.expect(detail::sparse_eq(k, lhs, rhs),
                               bm.name + ": right action is not a chain map");
                }
                for (int l = 0; l < bm.Lflat[y].size(); ++l) {
                    int dl = bm.Lflat[y].degree(l);
                    SparseVec<F> lhs;
                    for (const auto& [m, c] : bm.act_l(x, y, l, a))
                        for (const auto& [q, w2] : detail::flat_d(*bm.L[x], bm.Lflat[x], m))
                            sparse_add(k, lhs, q, k.mul(c, w2));
                    SparseVec<F> rhs;
                    for (const auto& [ll, c] : detail::flat_d(*bm.L[y], bm.Lflat[y], l))
                        for (const auto& [q, w2] : bm.act_l(x, y, ll, a))
                            sparse_add(k, rhs, q, k.mul(c, w2));
                    typename F::Elt s = dl % 2 == 0 ? k.one() : k.neg(k.one());
                    for (const auto& [aa, c] : detail::arrow_d(A, x, y, a))
                        for (const auto& [q, w2] : bm.act_l(x, y, l, aa))
                            sparse_add(k, rhs, q, k.mul(s, k.mul(c, w2)));
                    rep.expect(detail::sparse_eq(k, lhs, rhs),
                               bm.name + ": left contraction is not a chain map");
                }
            }
        }
    return rep;
}

/* ------------------------------------------------------------------ */
/* Dg functors and natural transformations                             */
/* ------------------------------------------------------------------ */

template <class F>
struct DgFunctor {
    PresentationPtr<F> src, tgt;
    std::vector<int> on_objects;
    // per (x,y): images of the flat basis of hom_src(x,y) in hom_tgt(Fx,Fy)
    std::map<std::pair<int, int>, std::vector<SparseVec<F>>> on_morphisms;

    SparseVec<F> image(int x, int y, int a) const {
        auto it = on_morphisms.find({x, y});
        if (it == on_morphisms.end() || a >= int(it->second.size())) return {};
        return it->second[a];
    }
};

template <class F>
DgFunctor<F> identity_functor(const PresentationPtr<F>& A) {
    DgFunctor<F> f{A, A, {}, {}};
    const F& k = A->field;
    for (int x = 0; x < A->n_objects(); ++x) f.on_objects.push_back(x);
    for (int x = 0; x < A->n_objects(); ++x)
        for (int y = 0; y < A->n_objects(); ++y) {
            std::vector<SparseVec<F>> im;
            for (int a = 0; a < A->hom_dim(x, y); ++a) im.push_back({{a, k.one()}});
            f.on_morphisms[{x, y}] = std::move(im);
        }
    return f;
}

template <class F>
ValidationReport validate_functor(const DgFunctor<F>& Fn) {
    const auto& A = *Fn.src;
    const auto& B = *Fn.tgt;
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();
    for (int x = 0; x < n; ++x) {
        int fx = Fn.on_objects[x];
        rep.expect(detail::sparse_eq(k, Fn.image(x, x, A.identity[x]),
                                     {{B.identity[fx], k.one()}}),
                   "F(id) != id at " + A.objects[x]);
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int fx = Fn.on_objects[x], fy = Fn.on_objects[y];
            for (int a = 0; a < A.hom_dim(x, y); ++a) {
                // degree preservation
                for (const auto& [r, c] : Fn.image(x, y, a))
                    rep.expect(B.arrow_degree(fx, fy, r) == A.arrow_degree(x, y, a),
                               "F not degree-preserving at " + A.arrow_label(x, y, a));
                // chain map: F(da) = d F(a)
                SparseVec<F> lhs;
                for (const auto& [aa, c] : detail::arrow_d(A, x, y, a))
                    for (const auto& [r, w2] : Fn.image(x, y, aa))
                        sparse_add(k, lhs, r, k.mul(c, w2));
                SparseVec<F> rhs;
                for (const auto& [r, c] : Fn.image(x, y, a))
                    for (const auto& [s, w2] : detail::arrow_d(B, fx, fy, r))
                        sparse_add(k, rhs, s, k.mul(c, w2));
                rep.expect(detail::sparse_eq(k, lhs, rhs),
                           "F not a chain map at " + A.arrow_label(x, y, a));
            }
        }
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int g = 0; g < A.hom_dim(y, z); ++g)
                    for (int f = 0; f < A.hom_dim(x, y); ++f) {
                        int fx = Fn.on_objects[x], fy = Fn.on_objects[y],
                            fz = Fn.on_objects[z];
                        SparseVec<F> lhs;
                        for (const auto& [r, c] : A.compose(x, y, z, g, f))
                            for (const auto& [s, w2] : Fn.image(x, z, r))
                                sparse_add(k, lhs, s, k.mul(c, w2));
                        auto rhs = detail::sparse_compose(B, fx, fy, fz,
                                                          Fn.image(y, z, g),
                                                          Fn.image(x, y, f));
                        rep.expect(detail::sparse_eq(k, lhs, rhs),
                                   "F(g.f) != F(g)F(f) at " + A.arrow_label(y, z, g) +
                                       " . " + A.arrow_label(x, y, f));
                    }
    return rep;
}

template <class F>
struct NatTransformation {
    const FibreFunctor<F>*from = nullptr, *to = nullptr;
    std::vector<GradedBlocks<F>> comp;  // degree-0 components per object
};

template <class F>
ValidationReport validate_natural(const NatTransformation<F>& eta) {
    const auto& A = *eta.from->base;
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();
    for (int x = 0; x < n; ++x) {
        const auto& wx = *eta.from->value(x);
        const auto& wpx = *eta.to->value(x);
        rep.expect(eta.comp[x].degree == 0, "eta component must have degree 0");
        for (int m = wx.window.lo - 1; m <= wx.window.hi; ++m) {
            Matrix<F> lhs = wpx.dmat(m).mul(eta.comp[x].block(wx, wpx, m));
            Matrix<F> rhs = eta.comp[x].block(wx, wpx, m + 1).mul(wx.dmat(m));
            rep.expect(lhs == rhs, "eta_" + A.objects[x] + " is not a chain map");
        }
    }
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int a = 0; a < A.hom_dim(x, y); ++a) {
                const auto& wx = *eta.from->value(x);
                const auto& wy = *eta.from->value(y);
                const auto& wpx = *eta.to->value(x);
                const auto& wpy = *eta.to->value(y);
                int da = A.arrow_degree(x, y, a);
                for (int m = wx.window.lo; m <= wx.window.hi; ++m) {
                    Matrix<F> lhs = eta.comp[y]
                                        .block(wy, wpy, m + da)
                                        .mul(eta.from->image(x, y, a).block(wx, wy, m));
                    Matrix<F> rhs = eta.to->image(x, y, a)
                                        .block(wpx, wpy, m)
                                        .mul(eta.comp[x].block(wx, wpx, m));
                    rep.expect(lhs == rhs, "naturality fails at " + A.arrow_label(x, y, a));
                }
            }
    return rep;
}

/* is every component a quasi-isomorphism? */
template <class F>
bool natural_components_quasi_iso(const NatTransformation<F>& eta) {
    const auto& A = *eta.from->base;
    for (int x = 0; x < A.n_objects(); ++x) {
        auto wx = eta.from->value(x);
        auto wpx = eta.to->value(x);
        auto f = as_chain_map(eta.comp[x], wx, wpx);
        int lo = std::min(wx->window.lo, wpx->window.lo);
        int hi = std::max(wx->window.hi, wpx->window.hi);
        if (!is_quasi_iso(f, DegRange::closed(lo, hi)).ok) return false;
    }
    return true;
}

/* ------------------------------------------------------------------ */
/* The interval category A x I                                         */
/* ------------------------------------------------------------------ */

template <class F>
struct IntervalExtension {
    PresentationPtr<F> axi;
    FibreFunctorPtr<F> glued;    // eta-bar
    DgFunctor<F> incl0, incl1;   // A -> A x I
};

/* objects (x,0),(x,1); hom((x,i),(y,j)) = hom(x,y) for i <= j, else 0. */
template <class F>
IntervalExtension<F> interval_extension(const PresentationPtr<F>& A,
                                        const FibreFunctor<F>& w,
                                        const FibreFunctor<F>& wp,
                                        const NatTransformation<F>& eta,
                                        bool require_quasi_iso = true) {
    const F& k = A->field;
    auto nat = validate_natural(eta);
    if (!nat.ok) fail("NaturalityFailure", nat.describe());
    if (require_quasi_iso && !natural_components_quasi_iso(eta))
        fail("ComponentNotQuasiIso", "a component of eta is not a quasi-isomorphism");

    int n = A->n_objects();
    auto p = std::make_shared<Presentation<F>>();
    p->field = k;
    auto obj = [&](int x, int i) { return 2 * x + i; };
    for (int x = 0; x < n; ++x) {
        p->objects.push_back(A->objects[x] + "@0");
        p->objects.push_back(A->objects[x] + "@1");
    }
    for (int x = 0; x < n; ++x)
        for (int i = 0; i < 2; ++i)
            for (int y = 0; y < n; ++y)
                for (int j = 0; j < 2; ++j) {
                    ComplexPtr<F> h = (i <= j) ? A->hom(x, y) : zero_complex(k);
                    p->flat[{obj(x, i), obj(y, j)}] = FlatBasis<F>::of(*h);
                    p->homs[{obj(x, i), obj(y, j)}] = std::move(h);
                }
    p->identity.resize(2 * n);
    for (int x = 0; x < n; ++x)
        for (int i = 0; i < 2; ++i) p->identity[obj(x, i)] = A->identity[x];
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                auto it = A->comp.find({x, y, z});
                if (it == A->comp.end()) continue;
                for (int i = 0; i < 2; ++i)
                    for (int j = i; j < 2; ++j)
                        for (int l = j; l < 2; ++l)
                            p->comp[{obj(x, i), obj(y, j), obj(z, l)}] = it->second;
            }

    auto glued = std::make_shared<FibreFunctor<F>>();
    glued->base = p;
    glued->on_objects.resize(2 * n);
    for (int x = 0; x < n; ++x) {
        glued->on_objects[obj(x, 0)] = w.value(x);
        glued->on_objects[obj(x, 1)] = wp.value(x);
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int dxy = A->hom_dim(x, y);
            std::vector<GradedBlocks<F>> at00, at11, at01;
            for (int a = 0; a < dxy; ++a) {
                at00.push_back(w.on_morphisms.at({x, y})[a]);
                at11.push_back(wp.on_morphisms.at({x, y})[a]);
                // a |-> eta_y . w(a)
                const auto& wa = w.image(x, y, a);
                GradedBlocks<F> g;
                g.degree = wa.degree;
                const auto& wx = *w.value(x);
                const auto& wy = *w.value(y);
                const auto& wpy = *wp.value(y);
                for (int m = wx.window.lo; m <= wx.window.hi; ++m) {
                    Matrix<F> blk =
                        eta.comp[y].block(wy, wpy, m + wa.degree).mul(wa.block(wx, wy, m));
                    if (!blk.is_zero_matrix()) g.blocks[m] = std::move(blk);
                }
                at01.push_back(std::move(g));
            }
            glued->on_morphisms[{obj(x, 0), obj(y, 0)}] = std::move(at00);
            glued->on_morphisms[{obj(x, 1), obj(y, 1)}] = std::move(at11);
            glued->on_morphisms[{obj(x, 0), obj(y, 1)}] = std::move(at01);
            glued->on_morphisms[{obj(x, 1), obj(y, 0)}] = {};
        }

    IntervalExtension<F> out;
    out.axi = p;
    out.glued = glued;
    for (int i = 0; i < 2; ++i) {
        DgFunctor<F> incl{A, p, {}, {}};
        for (int x = 0; x < n; ++x) incl.on_objects.push_back(obj(x, i));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                std::vector<SparseVec<F>> im;
                for (int a = 0; a < A->hom_dim(x, y); ++a) im.push_back({{a, k.one()}});
                incl.on_morphisms[{x, y}] = std::move(im);
            }
        (i == 0 ? out.incl0 : out.incl1) = std::move(incl);
    }
    return out;
}

/* ------------------------------------------------------------------ */
/* Strict monoidal structure                                           */
/* ------------------------------------------------------------------ */

template <class F>
struct MonoidalData {
    PresentationPtr<F> base;
    int unit = -1;
    std::vector<std::vector<int>> prod_obj;
    // (x,y,u,v): hom(x,y) flat x hom(u,v) flat -> hom(x.u, y.v) flat
    std::map<std::tuple<int, int, int, int>, Bilinear<F>> prod_mor;
    bool symmetric = false;

    int pobj(int x, int u) const { return prod_obj[x][u]; }
    SparseVec<F> pmor(int x, int y, int u, int v, int a, int b) const {
        auto it = prod_mor.find({x, y, u, v});
        if (it == prod_mor.end()) return {};
        return it->second.eval(a, b);
    }
};

template <class F>
ValidationReport validate_monoidal(const MonoidalData<F>& M) {
    const auto& A = *M.base;
    const F& k = A.field;
    ValidationReport rep;
    int n = A.n_objects();
    rep.expect(M.unit >= 0 && M.unit < n, "missing unit object");

    for (int x = 0; x < n; ++x) {
        rep.expect(M.pobj(M.unit, x) == x && M.pobj(x, M.unit) == x,
                   "unit law fails on " + A.objects[x]);
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                rep.expect(M.pobj(M.pobj(x, y), z) == M.pobj(x, M.pobj(y, z)),
                           "product of objects not associative");
    }

    // id (.) id = id, degree additivity, chain map, interchange
    for (int x = 0; x < n && rep.ok; ++x)
        for (int u = 0; u < n; ++u)
            rep.expect(detail::sparse_eq(k, M.pmor(x, x, u, u, A.identity[x], A.identity[u]),
                                         {{A.identity[M.pobj(x, u)], k.one()}}),
                       "id (.) id != id");

    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v) {
                    int X = M.pobj(x, u), Y = M.pobj(y, v);
                    for (int a = 0; a < A.hom_dim(x, y); ++a)
                        for (int b = 0; b < A.hom_dim(u, v); ++b) {
                            int da = A.arrow_degree(x, y, a), db = A.arrow_degree(u, v, b);
                            for (const auto& [r, c] : M.pmor(x, y, u, v, a, b))
                                rep.expect(A.arrow_degree(X, Y, r) == da + db,
                                           "product not degree-additive");
                            // d(a (.) b) = da (.) b + (-1)^{|a|} a (.) db
                            SparseVec<F> lhs;
                            for (const auto& [r, c] : M.pmor(x, y, u, v, a, b))
                                for (const auto& [s, w2] : detail::arrow_d(A, X, Y, r))
                                    sparse_add(k, lhs, s, k.mul(c, w2));
                            SparseVec<F> rhs;
                            for (const auto& [aa, c] : detail::arrow_d(A, x, y, a))
                                for (const auto& [r, w2] : M.pmor(x, y, u, v, aa, b))
                                    sparse_add(k, rhs, r, k.mul(c, w2));
                            typename F::Elt s0 = da % 2 == 0 ? k.one() : k.neg(k.one());
                            for (const auto& [bb, c] : detail::arrow_d(A, u, v, b))
                                for (const auto& [r, w2] : M.pmor(x, y, u, v, a, bb))
                                    sparse_add(k, rhs, r, k.mul(s0, k.mul(c, w2)));
                            rep.expect(detail::sparse_eq(k, lhs, rhs),
                                       "(.) is not a chain map");
                        }
                }

    // interchange: (g (.) h) . (f (.) e) = (-1)^{|h||f|} (g.f) (.) (h.e)
    for (int x = 0; x < n && rep.ok; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v)
                        for (int t = 0; t < n; ++t)
                            for (int g = 0; g < A.hom_dim(y, z); ++g)
                                for (int h = 0; h < A.hom_dim(v, t); ++h)
                                    for (int f = 0; f < A.hom_dim(x, y); ++f)
                                        for (int e = 0; e < A.hom_dim(u, v); ++e) {
                                            auto gh = M.pmor(y, z, v, t, g, h);
                                            auto fe = M.pmor(x, y, u, v, f, e);
                                            auto lhs = detail::sparse_compose(
                                                A, M.pobj(x, u), M.pobj(y, v), M.pobj(z, t),
                                                gh, fe);
                                            SparseVec<F> rhs;
                                            int dh = A.arrow_degree(v, t, h);
                                            int df = A.arrow_degree(x, y, f);
                                            typename F::Elt s0 =
                                                (dh % 2 != 0 && df % 2 != 0)
                                                    ? k.neg(k.one())
                                                    : k.one();
                                            for (const auto& [gf, c1] :
                                                 A.compose(x, y, z, g, f))
                                                for (const auto& [he, c2] :
                                                     A.compose(u, v, t, h, e))
                                                    for (const auto& [r, c3] : M.pmor(
                                                             x, z, u, t, gf, he))
                                                        sparse_add(
                                                            k, rhs, r,
                                                            k.mul(s0,
                                                                  k.mul(k.mul(c1, c2), c3)));
                                            rep.expect(detail::sparse_eq(k, lhs, rhs),
                                                       "interchange law fails");
                                        }

    if (M.symmetric) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                for (int u = 0; u < n; ++u)
                    rep.expect(M.pobj(x, u) == M.pobj(u, x), "product not symmetric");
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v)
                        for (int a = 0; a < A.hom_dim(x, y); ++a)
                            for (int b = 0; b < A.hom_dim(u, v); ++b) {
                                auto lhs = M.pmor(x, y, u, v, a, b);
                                auto rhs = M.pmor(u, v, x, y, b, a);
                                int da = A.arrow_degree(x, y, a);
                                int db = A.arrow_degree(u, v, b);
                                if (da % 2 != 0 && db % 2 != 0)
                                    for (auto& [i, c] : rhs) c = k.neg(c);
                                rep.expect(detail::sparse_eq(k, lhs, rhs),
                                           "morphism product not graded symmetric");
                            }
            }
    }
    return rep;
}

/* Duality data for the antipode: a dg functor X -> X* from A^op to A,
 * with an identification omega(X*) ~ omega(X)^v. */
template <class F>
struct DualityData {
    std::vector<int> dual_obj;  // X -> X*
    // per (x,y): f in hom(x,y) |-> f* in hom(y*, x*)
    std::map<std::pair<int, int>, std::vector<SparseVec<F>>> dual_mor;
    std::vector<GradedBlocks<F>> omega_iso;  // omega(X*) -> dual(omega X), degree 0
};

}  // namespace dgt
