#pragma once

#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "dgtannaka/grading.hpp"
#include "dgtannaka/matrix.hpp"

namespace dgt {

/* A cochain complex carried on a finite degree window.
 *
 * Semantics: `space`/`diff` describe what has been computed; on degrees in
 * `exact` they agree with the complex being modelled, elsewhere contributions
 * may be missing.  Homology is refused outside `exact` rather than reported
 * wrong.  `window` is the finite storage interval; outside it nothing is
 * stored (dims read as 0, which is only meaningful inside `exact`). */
template <class F>
struct Complex {
    F field;
    GradedSpace space;
    std::map<int, Matrix<F>> diff;  // d^n : C^n -> C^{n+1}, nonzero blocks only
    DegRange window = DegRange::none();
    DegRange exact = DegRange::all();

    int dim(int n) const { return space.dim(n); }
    Matrix<F> dmat(int n) const {
        auto it = diff.find(n);
        if (it != diff.end()) return it->second;
        return Matrix<F>::zero(field, dim(n + 1), dim(n));
    }
    bool known_zero(int n) const { return exact.contains(n) && dim(n) == 0; }
};

template <class F>
using ComplexPtr = std::shared_ptr<const Complex<F>>;

template <class F>
ComplexPtr<F> make_complex(Complex<F> c) {
    // drop zero blocks, clip window to something sane
    for (auto it = c.diff.begin(); it != c.diff.end();) {
        if (it->second.is_zero_matrix()) it = c.diff.erase(it);
        else ++it;
    }
    return std::make_shared<const Complex<F>>(std::move(c));
}

template <class F>
ComplexPtr<F> unit_complex(const F& f, const std::string& label = "1") {
    Complex<F> c;
    c.field = f;
    c.space.basis[0] = {label};
    c.window = DegRange::closed(0, 0);
    c.exact = DegRange::all();
    return make_complex(std::move(c));
}

template <class F>
ComplexPtr<F> zero_complex(const F& f) {
    Complex<F> c;
    c.field = f;
    c.window = DegRange::closed(0, 0);
    c.exact = DegRange::all();
    return make_complex(std::move(c));
}

/* ---------------- chain maps ---------------- */

template <class F>
struct ChainMap {
    ComplexPtr<F> src, tgt;
    int degree = 0;
    std::map<int, Matrix<F>> blocks;  // at n: src^n -> tgt^{n+degree}

    Matrix<F> block(int n) const {
        auto it = blocks.find(n);
        if (it != blocks.end()) return it->second;
        return Matrix<F>::zero(src->field, tgt->dim(n + degree), src->dim(n));
    }
    void set_block(int n, Matrix<F> m) {
        if (!m.is_zero_matrix()) blocks[n] = std::move(m);
    }
};

template <class F>
ChainMap<F> identity_map(const ComplexPtr<F>& c) {
    ChainMap<F> f{c, c, 0, {}};
    for (const auto& [n, ls] : c->space.basis)
        if (!ls.empty()) f.blocks[n] = Matrix<F>::identity(c->field, int(ls.size()));
    return f;
}

template <class F>
ChainMap<F> zero_map(const ComplexPtr<F>& a, const ComplexPtr<F>& b, int degree = 0) {
    return ChainMap<F>{a, b, degree, {}};
}

template <class F>
ChainMap<F> compose(const ChainMap<F>& g, const ChainMap<F>& f) {
    ChainMap<F> h{f.src, g.tgt, f.degree + g.degree, {}};
    for (const auto& [n, m] : f.blocks) {
        Matrix<F> gm = g.block(n + f.degree);
        h.set_block(n, gm.mul(m));
    }
    return h;
}

template <class F>
ChainMap<F> map_sub(const ChainMap<F>& a, const ChainMap<F>& b) {
    ChainMap<F> h{a.src, a.tgt, a.degree, {}};
    std::set<int> degs;
    for (const auto& [n, m] : a.blocks) degs.insert(n);
    for (const auto& [n, m] : b.blocks) degs.insert(n);
    for (int n : degs) h.set_block(n, a.block(n).sub(b.block(n)));
    return h;
}

template <class F>
ChainMap<F> map_scaled(const ChainMap<F>& a, const typename F::Elt& c) {
    ChainMap<F> h{a.src, a.tgt, a.degree, {}};
    for (const auto& [n, m] : a.blocks) h.set_block(n, m.scaled(c));
    return h;
}

/* Chain-map law for degree-r maps: d_tgt . f = (-1)^r f . d_src,
 * checked on every degree where both sides are stored. */
template <class F>
bool is_chain_map(const ChainMap<F>& f, std::vector<int>* bad_degrees = nullptr) {
    const F& k = f.src->field;
    bool ok = true;
    DegRange w = f.src->window;
    for (int n = w.lo; n <= w.hi; ++n) {
        Matrix<F> lhs = f.tgt->dmat(n + f.degree).mul(f.block(n));
        Matrix<F> rhs = f.block(n + 1).mul(f.src->dmat(n));
        if (f.degree % 2 != 0) rhs = rhs.scaled(k.neg(k.one()));
        if (!(lhs == rhs)) {
            ok = false;
            if (bad_degrees) bad_degrees->push_back(n);
        }
    }
    return ok;
}

/* ---------------- d^2 = 0 validation ---------------- */

struct ComplexReport {
    bool ok = true;
    std::vector<int> violating_degrees;
    std::string describe() const {
        if (ok) return "d^2 = 0 on window: pass";
        std::string s = "d^2 != 0 at degrees:";
        for (int n : violating_degrees) s += " " + std::to_string(n);
        return s;
    }
};

template <class F>
ComplexReport validate_complex(const Complex<F>& c) {
    ComplexReport rep;
    for (int n = c.window.lo; n + 1 <= c.window.hi; ++n) {
        if (c.dim(n) == 0 || c.dim(n + 2) == 0) continue;
        if (!c.dmat(n + 1).mul(c.dmat(n)).is_zero_matrix()) {
            rep.ok = false;
            rep.violating_degrees.push_back(n);
        }
    }
    return rep;
}

template <class F>
ComplexReport validate_complex(const ComplexPtr<F>& c) { return validate_complex(*c); }

/* ---------------- tensor product ---------------- */

/* Enumerates the basis of (a (x) b)^n as (i, pa, pb), i ascending, then
 * pa-major.  Both tensor() and every map into a tensor use this order. */
template <class F>
struct TensorIndex {
    struct Part {
        int deg_a;
        int dim_a, dim_b;
        int offset;
    };
    std::vector<Part> parts;
    int total = 0;

    TensorIndex() = default;
    TensorIndex(const Complex<F>& a, const Complex<F>& b, int n) {
        for (const auto& [i, ls] : a.space.basis) {
            int da = int(ls.size());
            int db = b.dim(n - i);
            if (da == 0 || db == 0) continue;
            parts.push_back({i, da, db, total});
            total += da * db;
        }
    }
    int position(int deg_a, int pa, int pb) const {
        for (const auto& p : parts)
            if (p.deg_a == deg_a) return p.offset + pa * p.dim_b + pb;
        fail("InternalError", "tensor index lookup");
    }
};

namespace detail {

/* Exactness of a pairing construction: degree n of the result is exact when
 * every integer split (i, j) with i+j = n (tensor) or j-i = n (hom) is either
 * fully known or known to contribute zero. */
template <class F>
bool pair_known(const Complex<F>& a, int i, const Complex<F>& b, int j) {
    bool ka = a.exact.contains(i), kb = b.exact.contains(j);
    if (ka && kb) return true;
    if (ka && a.dim(i) == 0) return true;
    if (kb && b.dim(j) == 0) return true;
    return false;
}

/* Exactness of degree n of a pairing is a predicate over n with finitely many
 * breakpoints (sums/differences of window and exact bounds).  We evaluate the
 * per-degree quantifier at every breakpoint neighbourhood plus one tail
 * representative per side, then read off the maximal interval.  Intervals
 * reaching past the highest breakpoint extend to +inf, dually for -inf. */
template <class F>
bool pairing_degree_exact(const Complex<F>& a, const Complex<F>& b, int n, bool hom) {
    // quantifier over all integer splits; tails first
    bool lo_tail, hi_tail;
    if (!hom) {
        // i -> -inf (a side unknown?) paired with j -> +inf
        lo_tail = (a.exact.lo <= kNegInf) || (b.exact.hi >= kPosInf);
        hi_tail = (a.exact.hi >= kPosInf) || (b.exact.lo <= kNegInf);
    } else {
        // source degree m -> +-inf pairs with target degree m + n
        lo_tail = (a.exact.lo <= kNegInf) || (b.exact.lo <= kNegInf);
        hi_tail = (a.exact.hi >= kPosInf) || (b.exact.hi >= kPosInf);
    }
    if (!lo_tail || !hi_tail) return false;
    std::set<int> probes;
    auto add = [&](int v) {
        if (v > kNegInf / 2 && v < kPosInf / 2)
            for (int d = -2; d <= 2; ++d) probes.insert(v + d);
    };
    add(a.window.lo); add(a.window.hi); add(a.exact.lo); add(a.exact.hi);
    if (!hom) {
        add(n - b.window.lo); add(n - b.window.hi);
        add(n - b.exact.lo); add(n - b.exact.hi);
    } else {
        add(b.window.lo - n); add(b.window.hi - n);
        add(b.exact.lo - n); add(b.exact.hi - n);
    }
    for (int i : probes) {
        int j = hom ? i + n : n - i;
        if (!pair_known(a, i, b, j)) return false;
    }
    return true;
}

template <class F>
DegRange pairing_exact_range(const Complex<F>& a, const Complex<F>& b,
                             bool hom /* j - i = n instead of i + j = n */) {
    auto ok = [&](int n) { return pairing_degree_exact(a, b, n, hom); };

    std::set<int> bps;
    auto bounds_a = {a.window.lo, a.window.hi, a.exact.lo, a.exact.hi};
    auto bounds_b = {b.window.lo, b.window.hi, b.exact.lo, b.exact.hi};
    for (int u : bounds_a)
        for (int v : bounds_b) {
            if (u <= kNegInf || u >= kPosInf || v <= kNegInf || v >= kPosInf) continue;
            bps.insert(hom ? v - u : u + v);
        }
    bps.insert(0);
    int bp_lo = *bps.begin(), bp_hi = *bps.rbegin();

    std::set<int> scan;
    for (int bp : bps)
        for (int d = -2; d <= 2; ++d) scan.insert(bp + d);
    bool lo_inf = ok(bp_lo - 5);
    bool hi_inf = ok(bp_hi + 5);

    // merge scan points into maximal ok-intervals; gaps between scan points
    // contain no breakpoints, so edge values decide them
    std::vector<DegRange> runs;
    bool in_run = false;
    int run_lo = 0, prev = 0;
    for (int x : scan) {
        if (ok(x)) {
            if (!in_run) { run_lo = x; in_run = true; }
        } else if (in_run) {
            runs.push_back(DegRange::closed(run_lo, prev));
            in_run = false;
        }
        prev = x;
    }
    if (in_run) runs.push_back(DegRange::closed(run_lo, prev));
    if (runs.empty()) return DegRange::none();
    if (lo_inf && runs.front().lo == bp_lo - 2) runs.front().lo = kNegInf;
    if (hi_inf && runs.back().hi == bp_hi + 2) runs.back().hi = kPosInf;

    // prefer an interval reaching +inf (truncations hang from above), else widest
    for (auto it = runs.rbegin(); it != runs.rend(); ++it)
        if (it->hi >= kPosInf) return *it;
    DegRange best = runs.front();
    for (const auto& r : runs) {
        long wb = long(std::min(best.hi, kPosInf)) - long(std::max(best.lo, kNegInf));
        long wr = long(std::min(r.hi, kPosInf)) - long(std::max(r.lo, kNegInf));
        if (wr > wb) best = r;
    }
    return best;
}

inline std::string tensor_label(const std::string& a, const std::string& b) {
    return a + "(x)" + b;
}

}  // namespace detail

/* (a (x) b)^n = sum over i+j=n of a^i (x) b^j,
 * d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy. */
template <class F>
ComplexPtr<F> tensor(const ComplexPtr<F>& a, const ComplexPtr<F>& b) {
    const F& k = a->field;
    Complex<F> t;
    t.field = k;
    t.window = DegRange::closed(deg_add(a->window.lo, b->window.lo),
                                deg_add(a->window.hi, b->window.hi));
    t.exact = detail::pairing_exact_range(*a, *b, false);

    std::map<int, TensorIndex<F>> idx;
    for (int n = t.window.lo; n <= t.window.hi; ++n) {
        TensorIndex<F> ti(*a, *b, n);
        if (ti.total == 0) continue;
        std::vector<std::string> labels(ti.total);
        for (const auto& p : ti.parts)
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (int pb = 0; pb < p.dim_b; ++pb)
                    labels[p.offset + pa * p.dim_b + pb] = detail::tensor_label(
                        a->space.label(p.deg_a, pa), b->space.label(n - p.deg_a, pb));
        t.space.basis[n] = std::move(labels);
        idx.emplace(n, std::move(ti));
    }

    for (int n = t.window.lo; n < t.window.hi; ++n) {
        auto here = idx.find(n);
        auto up = idx.find(n + 1);
        if (here == idx.end() || up == idx.end()) continue;
        Matrix<F> d(k, up->second.total, here->second.total);
        for (const auto& p : here->second.parts) {
            int i = p.deg_a, j = n - i;
            Matrix<F> daT = a->dmat(i).transpose();
            Matrix<F> dbT = b->dmat(j).transpose();
            bool has_da = a->dim(i + 1) > 0 && b->dim(j) > 0;
            bool has_db = b->dim(j + 1) > 0;
            typename F::Elt s = (i % 2 == 0) ? k.one() : k.neg(k.one());
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (int pb = 0; pb < p.dim_b; ++pb) {
                    int col = p.offset + pa * p.dim_b + pb;
                    // dx (x) y
                    if (has_da)
                        for (const auto& [qa, v] : daT.row(pa))
                            d.add_to(up->second.position(i + 1, qa, pb), col, v);
                    // (-1)^i x (x) dy
                    if (has_db)
                        for (const auto& [qb, v] : dbT.row(pb))
                            d.add_to(up->second.position(i, pa, qb), col, k.mul(s, v));
                }
        }
        if (!d.is_zero_matrix()) t.diff[n] = std::move(d);
    }
    return make_complex(std::move(t));
}

/* f (x) g on tensor complexes; Koszul sign (-1)^{|g| * i} on the a^i block. */
template <class F>
ChainMap<F> tensor_map(const ChainMap<F>& f, const ChainMap<F>& g,
                       const ComplexPtr<F>& src, const ComplexPtr<F>& tgt) {
    const F& k = f.src->field;
    ChainMap<F> h{src, tgt, f.degree + g.degree, {}};
    for (const auto& [n, labels] : src->space.basis) {
        TensorIndex<F> si(*f.src, *g.src, n);
        if (si.total == 0) continue;
        int m = n + f.degree + g.degree;
        TensorIndex<F> ti(*f.tgt, *g.tgt, m);
        if (ti.total == 0) continue;
        Matrix<F> blk(k, ti.total, si.total);
        for (const auto& p : si.parts) {
            int i = p.deg_a, j = n - i;
            Matrix<F> fbT = f.block(i).transpose();
            Matrix<F> gbT = g.block(j).transpose();
            if (fbT.cols() == 0 || gbT.cols() == 0) continue;
            typename F::Elt s =
                ((g.degree % 2 != 0) && (i % 2 != 0)) ? k.neg(k.one()) : k.one();
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (const auto& [qa, va] : fbT.row(pa))
                    for (int pb = 0; pb < p.dim_b; ++pb)
                        for (const auto& [qb, vb] : gbT.row(pb))
                            blk.add_to(ti.position(i + f.degree, qa, qb),
                                       p.offset + pa * p.dim_b + pb,
                                       k.mul(s, k.mul(va, vb)));
        }
        h.set_block(n, std::move(blk));
    }
    return h;
}

/* swap: a (x) b -> b (x) a, x (x) y |-> (-1)^{|x||y|} y (x) x */
template <class F>
ChainMap<F> swap_map(const ComplexPtr<F>& a, const ComplexPtr<F>& b,
                     const ComplexPtr<F>& ab, const ComplexPtr<F>& ba) {
    const F& k = a->field;
    ChainMap<F> h{ab, ba, 0, {}};
    for (const auto& [n, labels] : ab->space.basis) {
        TensorIndex<F> si(*a, *b, n);
        TensorIndex<F> ti(*b, *a, n);
        if (si.total == 0) continue;
        Matrix<F> blk(k, ti.total, si.total);
        for (const auto& p : si.parts) {
            int i = p.deg_a, j = n - i;
            typename F::Elt s =
                ((i % 2 != 0) && (j % 2 != 0)) ? k.neg(k.one()) : k.one();
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (int pb = 0; pb < p.dim_b; ++pb)
                    blk.add_to(ti.position(j, pb, pa), p.offset + pa * p.dim_b + pb, s);
        }
        h.set_block(n, std::move(blk));
    }
    return h;
}

/* ---------------- dual ---------------- */

/* (c^v)^n = (c^{-n})^v with d(f) = -(-1)^{|f|} f . d; this is the convention
 * under which evaluation and coevaluation are chain maps. */
template <class F>
ComplexPtr<F> dual(const ComplexPtr<F>& c) {
    const F& k = c->field;
    Complex<F> d;
    d.field = k;
    d.window = c->window.negated();
    d.exact = c->exact.negated();
    for (const auto& [m, ls] : c->space.basis) {
        std::vector<std::string> labels;
        labels.reserve(ls.size());
        for (const auto& s : ls) labels.push_back(s + "^");
        d.space.basis[-m] = std::move(labels);
    }
    for (int n = d.window.lo; n < d.window.hi; ++n) {
        if (d.space.dim(n) == 0 || d.space.dim(n + 1) == 0) continue;
        Matrix<F> m = c->dmat(-n - 1).transpose();
        typename F::Elt s = (n % 2 == 0) ? k.neg(k.one()) : k.one();  // -(-1)^n
        m = m.scaled(s);
        if (!m.is_zero_matrix()) d.diff[n] = std::move(m);
    }
    return make_complex(std::move(d));
}

/* evaluation dual(c) (x) c -> k */
template <class F>
ChainMap<F> eval_map(const ComplexPtr<F>& c, const ComplexPtr<F>& dc,
                     const ComplexPtr<F>& dc_c, const ComplexPtr<F>& unit) {
    const F& k = c->field;
    ChainMap<F> h{dc_c, unit, 0, {}};
    TensorIndex<F> ti(*dc, *c, 0);
    if (ti.total > 0) {
        Matrix<F> blk(k, 1, ti.total);
        for (const auto& p : ti.parts) {
            int i = p.deg_a;  // dual degree; pairs with c^{-i} = c^{0-i}
            (void)i;
            for (int pa = 0; pa < p.dim_a && pa < p.dim_b; ++pa)
                blk.add_to(0, p.offset + pa * p.dim_b + pa, k.one());
        }
        h.set_block(0, std::move(blk));
    }
    return h;
}

/* coevaluation k -> c (x) dual(c) */
template <class F>
ChainMap<F> coev_map(const ComplexPtr<F>& c, const ComplexPtr<F>& dc,
                     const ComplexPtr<F>& c_dc, const ComplexPtr<F>& unit) {
    const F& k = c->field;
    ChainMap<F> h{unit, c_dc, 0, {}};
    TensorIndex<F> ti(*c, *dc, 0);
    if (ti.total > 0) {
        Matrix<F> blk(k, ti.total, 1);
        for (const auto& p : ti.parts)
            for (int pa = 0; pa < p.dim_a && pa < p.dim_b; ++pa)
                blk.add_to(p.offset + pa * p.dim_b + pa, 0, k.one());
        h.set_block(0, std::move(blk));
    }
    return h;
}

/* canonical iso c -> dual(dual(c)), (-1)^n at degree n */
template <class F>
ChainMap<F> double_dual_iso(const ComplexPtr<F>& c, const ComplexPtr<F>& ddc) {
    const F& k = c->field;
    ChainMap<F> h{c, ddc, 0, {}};
    for (const auto& [n, ls] : c->space.basis) {
        if (ls.empty()) continue;
        Matrix<F> m = Matrix<F>::identity(k, int(ls.size()));
        if (n % 2 != 0) m = m.scaled(k.neg(k.one()));
        h.set_block(n, std::move(m));
    }
    return h;
}

/* ---------------- hom complex ---------------- */

/* Hom(a,b)^i = prod_n Hom(a^n, b^{n+i}) on the windows,
 * d f = d_b . f - (-1)^{|f|} f . d_a.
 * Basis element (n, p, q) is the elementary map a^n_p |-> b^{n+i}_q. */
template <class F>
struct HomIndex {
    struct Part {
        int deg_a;
        int dim_a, dim_b;
        int offset;
    };
    std::vector<Part> parts;
    int total = 0;

    HomIndex() = default;
    HomIndex(const Complex<F>& a, const Complex<F>& b, int i) {
        for (const auto& [n, ls] : a.space.basis) {
            int da = int(ls.size());
            int db = b.dim(n + i);
            if (da == 0 || db == 0) continue;
            parts.push_back({n, da, db, total});
            total += da * db;
        }
    }
    // index of the elementary map at source degree n, source index p, target index q
    int position(int n, int p, int q) const {
        for (const auto& part : parts)
            if (part.deg_a == n) return part.offset + p * part.dim_b + q;
        fail("InternalError", "hom index lookup");
    }
};

template <class F>
ComplexPtr<F> hom_complex(const ComplexPtr<F>& a, const ComplexPtr<F>& b) {
    const F& k = a->field;
    Complex<F> h;
    h.field = k;
    h.window = DegRange::closed(deg_add(b->window.lo, -a->window.hi),
                                deg_add(b->window.hi, -a->window.lo));
    h.exact = detail::pairing_exact_range(*a, *b, true);

    std::map<int, HomIndex<F>> idx;
    for (int i = h.window.lo; i <= h.window.hi; ++i) {
        HomIndex<F> hi(*a, *b, i);
        if (hi.total == 0) continue;
        std::vector<std::string> labels(hi.total);
        for (const auto& p : hi.parts)
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (int q = 0; q < p.dim_b; ++q)
                    labels[p.offset + pa * p.dim_b + q] =
                        "[" + a->space.label(p.deg_a, pa) + "->" +
                        b->space.label(p.deg_a + i, q) + "]";
        h.space.basis[i] = std::move(labels);
        idx.emplace(i, std::move(hi));
    }

    for (int i = h.window.lo; i < h.window.hi; ++i) {
        auto here = idx.find(i);
        auto up = idx.find(i + 1);
        if (here == idx.end() || up == idx.end()) continue;
        Matrix<F> d(k, up->second.total, here->second.total);
        typename F::Elt sgn = (i % 2 == 0) ? k.neg(k.one()) : k.one();  // -(-1)^i
        for (const auto& p : here->second.parts) {
            int n = p.deg_a;
            Matrix<F> dbT = b->dmat(n + i).transpose();
            Matrix<F> da = a->dmat(n - 1);
            bool has_db = b->dim(n + i + 1) > 0 && a->dim(n) > 0;
            bool has_da = a->dim(n - 1) > 0 && b->dim(n + i) > 0;
            for (int pa = 0; pa < p.dim_a; ++pa)
                for (int q = 0; q < p.dim_b; ++q) {
                    int col = p.offset + pa * p.dim_b + q;
                    // d_b . f : elementary (n, pa, q) hits (n, pa, r)
                    if (has_db)
                        for (const auto& [r, v] : dbT.row(q))
                            d.add_to(up->second.position(n, pa, r), col, v);
                    // -(-1)^i f . d_a : hits (n-1, s, q) for d_a[pa][s] != 0
                    if (has_da)
                        for (const auto& [s, v] : da.row(pa))
                            d.add_to(up->second.position(n - 1, s, q), col, k.mul(sgn, v));
                }
        }
        if (!d.is_zero_matrix()) h.diff[i] = std::move(d);
    }
    return make_complex(std::move(h));
}

/* ---------------- shift and cone ---------------- */

template <class F>
ComplexPtr<F> shift(const ComplexPtr<F>& c, int m) {
    const F& k = c->field;
    Complex<F> s;
    s.field = k;
    s.window = c->window.shifted(-m);
    s.exact = c->exact.shifted(-m);
    for (const auto& [n, ls] : c->space.basis) {
        std::vector<std::string> labels;
        for (const auto& l : ls)
            labels.push_back(m == 0 ? l : l + "[" + std::to_string(m) + "]");
        s.space.basis[n - m] = std::move(labels);
    }
    for (const auto& [n, d] : c->diff) {
        Matrix<F> dm = d;
        if (m % 2 != 0) dm = dm.scaled(k.neg(k.one()));
        s.diff[n - m] = std::move(dm);
    }
    return make_complex(std::move(s));
}

/* cone(f)^n = a^{n+1} + b^n, d(x,y) = (-d_a x, f x + d_b y) */
template <class F>
ComplexPtr<F> cone(const ChainMap<F>& f) {
    if (f.degree != 0) fail("DimensionMismatch", "cone of a degree-0 map only");
    const F& k = f.src->field;
    const Complex<F>&a = *f.src, &b = *f.tgt;
    Complex<F> c;
    c.field = k;
    c.window = DegRange::closed(std::min(deg_add(a.window.lo, -1), b.window.lo),
                                std::max(deg_add(a.window.hi, -1), b.window.hi));
    c.exact = a.exact.shifted(-1).intersect(b.exact);
    for (int n = c.window.lo; n <= c.window.hi; ++n) {
        std::vector<std::string> labels;
        for (int p = 0; p < a.dim(n + 1); ++p)
            labels.push_back("cone:" + a.space.label(n + 1, p));
        for (int q = 0; q < b.dim(n); ++q) labels.push_back(b.space.label(n, q));
        if (!labels.empty()) c.space.basis[n] = std::move(labels);
    }
    for (int n = c.window.lo; n < c.window.hi; ++n) {
        int rows = c.dim(n + 1), cols = c.dim(n);
        if (rows == 0 || cols == 0) continue;
        Matrix<F> d(k, rows, cols);
        Matrix<F> daT = a.dmat(n + 1).transpose();
        Matrix<F> dbT = b.dmat(n).transpose();
        Matrix<F> fbT = f.block(n + 1).transpose();
        int acols = a.dim(n + 1), arows = a.dim(n + 2);
        for (int j = 0; j < acols; ++j) {
            for (const auto& [i, v] : daT.row(j)) d.add_to(i, j, k.neg(v));
            for (const auto& [i, v] : fbT.row(j)) d.add_to(arows + i, j, v);
        }
        for (int j = 0; j < b.dim(n); ++j)
            for (const auto& [i, v] : dbT.row(j))
                d.add_to(arows + i, acols + j, v);
        if (!d.is_zero_matrix()) c.diff[n] = std::move(d);
    }
    return make_complex(std::move(c));
}

/* ---------------- homology ---------------- */

template <class F>
struct Homology {
    int dim = 0;
    Matrix<F> reps;  // columns: representative cycles in C^n coordinates
};

template <class F>
int homology_dim(const Complex<F>& c, int n) {
    if (!c.exact.contains(n - 1) || !c.exact.contains(n) || !c.exact.contains(n + 1))
        fail("DegreeOutsideExactWindow",
             "homology at degree " + std::to_string(n) + " needs exactness on [" +
                 std::to_string(n - 1) + "," + std::to_string(n + 1) + "], have " +
                 c.exact.describe());
    if (c.dim(n) == 0) return 0;
    int ker = c.dim(n) - c.dmat(n).rank();
    int im = c.dmat(n - 1).rank();
    return ker - im;
}

template <class F>
Homology<F> homology(const Complex<F>& c, int n) {
    int hd = homology_dim(c, n);  // also performs the window check
    const F& k = c.field;
    Homology<F> h;
    h.dim = hd;
    if (c.dim(n) == 0) {
        h.reps = Matrix<F>::zero(k, 0, 0);
        return h;
    }
    Matrix<F> ker = c.dmat(n).kernel_basis();
    Matrix<F> im = c.dmat(n - 1);  // columns span the image
    // greedily keep kernel vectors that escape the image span
    Matrix<F> acc = im;
    std::vector<int> keep;
    int base_rank = acc.rank();
    for (int j = 0; j < ker.cols(); ++j) {
        Matrix<F> cand = acc.hstack(ker.columns({j}));
        int r = cand.rank();
        if (r > base_rank) {
            keep.push_back(j);
            acc = std::move(cand);
            base_rank = r;
        }
        if (int(keep.size()) == hd) break;
    }
    h.reps = ker.columns(keep);
    return h;
}

template <class F>
Homology<F> homology(const ComplexPtr<F>& c, int n) { return homology(*c, n); }

/* matrix of H^n(f): coordinates of f(reps_src) in the homology basis of tgt */
template <class F>
Matrix<F> induced_on_homology(const ChainMap<F>& f, int n) {
    const F& k = f.src->field;
    Homology<F> hs = homology(*f.src, n);
    Homology<F> ht = homology(*f.tgt, n + f.degree);
    if (hs.dim == 0 || f.src->dim(n) == 0)
        return Matrix<F>::zero(k, ht.dim, hs.dim);
    Matrix<F> w = f.block(n).mul(hs.reps);
    if (ht.dim == 0) {
        return Matrix<F>::zero(k, 0, hs.dim);
    }
    Matrix<F> im = f.tgt->dmat(n + f.degree - 1);
    Matrix<F> basis = im.hstack(ht.reps);
    auto sol = basis.solve_many(w);
    if (!sol) fail("InternalError", "image of a cycle is not a cycle mod boundaries");
    Matrix<F> out(k, ht.dim, hs.dim);
    for (int j = 0; j < hs.dim; ++j)
        for (int i = 0; i < ht.dim; ++i) {
            auto v = sol->get(im.cols() + i, j);
            if (!k.is_zero(v)) out.set(i, j, v);
        }
    return out;
}

struct QuasiIsoDegree {
    int degree;
    int dim_src, dim_tgt, rank;
    bool iso;
};

struct QuasiIsoReport {
    bool ok = true;
    DegRange range;
    std::vector<QuasiIsoDegree> table;
    std::string describe() const {
        std::string s;
        for (const auto& row : table) {
            s += "  H^" + std::to_string(row.degree) + ": dim src " +
                 std::to_string(row.dim_src) + ", dim tgt " + std::to_string(row.dim_tgt) +
                 ", induced rank " + std::to_string(row.rank) +
                 (row.iso ? "  iso" : "  NOT iso") + "\n";
        }
        return s;
    }
};

template <class F>
QuasiIsoReport is_quasi_iso(const ChainMap<F>& f, DegRange degrees) {
    DegRange s_ok = f.src->exact.shrunk(1);
    DegRange t_ok = f.tgt->exact.shrunk(1);
    if (!s_ok.contains(degrees) || !t_ok.contains(degrees))
        fail("DegreeOutsideExactWindow",
             "quasi-iso check on " + degrees.describe() + " exceeds honest windows " +
                 s_ok.describe() + " and " + t_ok.describe());
    QuasiIsoReport rep;
    rep.range = degrees;
    for (int n = degrees.lo; n <= degrees.hi; ++n) {
        Matrix<F> m = induced_on_homology(f, n);
        int ds = m.cols(), dt = m.rows();
        int r = m.rank();
        bool iso = (ds == dt) && (r == ds);
        rep.table.push_back({n, ds, dt, r, iso});
        if (!iso) rep.ok = false;
    }
    return rep;
}

/* adopt a truncation as a complete instance in its own right */
template <class F>
ComplexPtr<F> as_complete(const ComplexPtr<F>& c) {
    Complex<F> d = *c;
    d.exact = DegRange::all();
    return make_complex(std::move(d));
}

}  // namespace dgt
