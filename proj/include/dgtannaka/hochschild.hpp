#pragma once

#include <unordered_map>

#include "dgtannaka/dgcat.hpp"

namespace dgt {

/* ------------------------------------------------------------------ */
/* The simplicial Hochschild object of (A, F) for an outer bimodule F. */
/* ------------------------------------------------------------------ */

/* Level-n basis element, stored in the contraction-friendly order
 *   l (x) a_1 (x) ... (x) a_n (x) r
 * with l in L(X_0), a_j : X_j -> X_{j-1} in hom(X_j, X_{j-1}), r in R(X_n).
 * In this order every face map is an adjacent contraction and carries no
 * Koszul sign; all signs live in the internal differential and the total
 * differential.  (The paper's A(x,y) accessor means hom(y,x); the strings
 * here are exactly its composable strings read through that accessor.) */
struct HTuple {
    std::vector<int> objs;    // X_0 .. X_n
    int l = 0;                // flat index in L(X_0)
    std::vector<int> arrows;  // arrows[j] = a_{j+1} in hom(X_{j+1}, X_j)
    int r = 0;                // flat index in R(X_n)

    std::vector<int> key() const {
        std::vector<int> k;
        k.reserve(objs.size() + arrows.size() + 2);
        k.insert(k.end(), objs.begin(), objs.end());
        k.push_back(l);
        k.insert(k.end(), arrows.begin(), arrows.end());
        k.push_back(r);
        return k;
    }
};

struct TupleRef {
    int level = 0, degree = 0, index = 0;
    bool operator==(const TupleRef& o) const {
        return level == o.level && degree == o.degree && index == o.index;
    }
    bool operator<(const TupleRef& o) const {
        return std::tie(level, degree, index) < std::tie(o.level, o.degree, o.index);
    }
};

template <class F>
using RefVec = std::vector<std::pair<TupleRef, typename F::Elt>>;

template <class F>
struct HLevel {
    ComplexPtr<F> cx;  // internal differential only
    std::map<int, Matrix<F>> dT;  // transposed blocks of cx->diff, for column reads
    std::map<int, std::vector<HTuple>> tuples;          // per internal degree
    std::map<std::vector<int>, std::pair<int, int>> index;  // key -> (degree, idx)
};

template <class F>
struct HochschildSystem {
    PresentationPtr<F> A;
    OuterBimodule<F> bm;
    int L = 0;
    bool normalized = false;
    std::vector<HLevel<F>> levels;

    const F& field() const { return A->field; }
    int tuple_internal_degree(const HTuple& t) const {
        int d = bm.Lflat[t.objs.front()].degree(t.l) + bm.Rflat[t.objs.back()].degree(t.r);
        for (std::size_t j = 0; j < t.arrows.size(); ++j)
            d += A->fb(t.objs[j + 1], t.objs[j]).degree(t.arrows[j]);
        return d;
    }
    const HTuple& tuple_at(const TupleRef& ref) const {
        return levels[ref.level].tuples.at(ref.degree)[ref.index];
    }
    std::optional<TupleRef> find(int level, const HTuple& t) const {
        auto it = levels[level].index.find(t.key());
        if (it == levels[level].index.end()) return std::nullopt;
        return TupleRef{level, it->second.first, it->second.second};
    }
};

namespace detail {

template <class F>
std::string tuple_label(const Presentation<F>& A, const OuterBimodule<F>& bm,
                        const HTuple& t) {
    auto lab = [&](const ComplexPtr<F>& cx, const FlatBasis<F>& fb, int v) {
        auto [d, i] = fb.elems[v];
        return cx->space.label(d, i);
    };
    std::string s = "(" + lab(bm.L[t.objs.front()], bm.Lflat[t.objs.front()], t.l) + "|";
    for (std::size_t j = 0; j < t.arrows.size(); ++j) {
        if (j) s += ",";
        s += lab(A.hom(t.objs[j + 1], t.objs[j]), A.fb(t.objs[j + 1], t.objs[j]),
                 t.arrows[j]);
    }
    s += "|" + lab(bm.R[t.objs.back()], bm.Rflat[t.objs.back()], t.r) + ")";
    return s;
}

template <class F>
bool arrow_is_identity(const Presentation<F>& A, int from, int to, int a) {
    return from == to && A.identity[from] == a;
}

}  // namespace detail

/* Levels 0..L of the simplicial Hochschild object.
 * normalized = true keeps only strings with no identity arrow slot. */
template <class F>
HochschildSystem<F> cc_levels(const PresentationPtr<F>& A, OuterBimodule<F> bm, int L,
                              bool normalized) {
    HochschildSystem<F> sys;
    sys.A = A;
    sys.bm = std::move(bm);
    sys.L = L;
    sys.normalized = normalized;
    const F& k = A->field;
    int nobj = A->n_objects();

    for (int n = 0; n <= L; ++n) {
        HLevel<F> lvl;
        std::vector<int> objs(n + 1, 0);
        // odometer over object tuples
        while (true) {
            // slot sizes
            bool nonzero = sys.bm.Lflat[objs.front()].size() > 0 &&
                           sys.bm.Rflat[objs.back()].size() > 0;
            for (int j = 0; j < n && nonzero; ++j)
                nonzero = A->hom_dim(objs[j + 1], objs[j]) > 0;
            if (nonzero) {
                HTuple t;
                t.objs = objs;
                t.arrows.assign(n, 0);
                // odometer over slot indices: l, arrows..., r
                std::vector<int> sizes;
                sizes.push_back(sys.bm.Lflat[objs.front()].size());
                for (int j = 0; j < n; ++j) sizes.push_back(A->hom_dim(objs[j + 1], objs[j]));
                sizes.push_back(sys.bm.Rflat[objs.back()].size());
                std::vector<int> cur(sizes.size(), 0);
                while (true) {
                    t.l = cur.front();
                    for (int j = 0; j < n; ++j) t.arrows[j] = cur[j + 1];
                    t.r = cur.back();
                    bool degenerate = false;
                    if (normalized)
                        for (int j = 0; j < n && !degenerate; ++j)
                            degenerate = detail::arrow_is_identity(*A, objs[j + 1], objs[j],
                                                                   t.arrows[j]);
                    if (!degenerate) {
                        int d = sys.tuple_internal_degree(t);
                        auto& vec = lvl.tuples[d];
                        lvl.index[t.key()] = {d, int(vec.size())};
                        vec.push_back(t);
                    }
                    int c = 0;
                    while (c < int(cur.size()) && ++cur[c] == sizes[c]) cur[c++] = 0;
                    if (c == int(cur.size())) break;
                }
            }
            int c = 0;
            while (c <= n && ++objs[c] == nobj) objs[c++] = 0;
            if (c > n) break;
        }

        // the level complex: internal differential with Koszul signs over slots
        Complex<F> cx;
        cx.field = k;
        cx.exact = DegRange::all();
        for (const auto& [d, ts] : lvl.tuples) {
            std::vector<std::string> labels;
            labels.reserve(ts.size());
            for (const auto& t : ts) labels.push_back(detail::tuple_label(*A, sys.bm, t));
            cx.space.basis[d] = std::move(labels);
        }
        int lo = cx.space.support_lo(), hi = cx.space.support_hi();
        cx.window = lo <= hi ? DegRange::closed(lo, hi) : DegRange::closed(0, 0);
        sys.levels.push_back(std::move(lvl));
        auto& stored = sys.levels.back();

        for (const auto& [d, ts] : stored.tuples) {
            auto up = stored.tuples.find(d + 1);
            if (up == stored.tuples.end()) continue;
            Matrix<F> dm(k, int(up->second.size()), int(ts.size()));
            for (int col = 0; col < int(ts.size()); ++col) {
                const HTuple& t = ts[col];
                int prefix = 0;  // degree sum of slots before the active one
                auto emit = [&](const HTuple& nt, const typename F::Elt& c) {
                    auto it = stored.index.find(nt.key());
                    if (it == stored.index.end()) return;  // normalized projection
                    dm.add_to(it->second.second, col, c);
                };
                // d on l
                {
                    int x0 = t.objs.front();
                    for (const auto& [nl, c] :
                         detail::flat_d(*sys.bm.L[x0], sys.bm.Lflat[x0], t.l)) {
                        HTuple nt = t;
                        nt.l = nl;
                        emit(nt, c);
                    }
                    prefix += sys.bm.Lflat[x0].degree(t.l);
                }
                // d on arrows
                for (int j = 0; j < n; ++j) {
                    int from = t.objs[j + 1], to = t.objs[j];
                    typename F::Elt s = prefix % 2 == 0 ? k.one() : k.neg(k.one());
                    for (const auto& [na, c] : detail::arrow_d(*A, from, to, t.arrows[j])) {
                        HTuple nt = t;
                        nt.arrows[j] = na;
                        emit(nt, k.mul(s, c));
                    }
                    prefix += A->fb(from, to).degree(t.arrows[j]);
                }
                // d on r
                {
                    int xn = t.objs.back();
                    typename F::Elt s = prefix % 2 == 0 ? k.one() : k.neg(k.one());
                    for (const auto& [nr, c] :
                         detail::flat_d(*sys.bm.R[xn], sys.bm.Rflat[xn], t.r)) {
                        HTuple nt = t;
                        nt.r = nr;
                        emit(nt, k.mul(s, c));
                    }
                }
            }
            if (!dm.is_zero_matrix()) cx.diff[d] = std::move(dm);
        }
        for (const auto& [d, m] : cx.diff) stored.dT[d] = m.transpose();
        stored.cx = std::make_shared<Complex<F>>(std::move(cx));
    }
    return sys;
}

/* face maps as sparse vectors on tuples of the level below (no signs here;
 * the alternating sum happens in the total differential) */
template <class F>
RefVec<F> face_of_tuple(const HochschildSystem<F>& sys, int level, const HTuple& t, int j) {
    const auto& A = *sys.A;
    const F& k = sys.field();
    RefVec<F> out;
    int n = level;
    auto push = [&](const HTuple& nt, const typename F::Elt& c) {
        if (auto ref = sys.find(n - 1, nt)) out.push_back({*ref, c});
    };
    if (n == 0) return out;
    if (j == 0) {
        // contract (l, a_1) through the left table: key (X_1, X_0)
        int x1 = t.objs[1], x0 = t.objs[0];
        for (const auto& [nl, c] : sys.bm.act_l(x1, x0, t.l, t.arrows[0])) {
            HTuple nt;
            nt.objs.assign(t.objs.begin() + 1, t.objs.end());
            nt.l = nl;
            nt.arrows.assign(t.arrows.begin() + 1, t.arrows.end());
            nt.r = t.r;
            push(nt, c);
        }
    } else if (j < n) {
        // compose a_j . a_{j+1} : arrows j-1 and j
        int zf = t.objs[j + 1], zm = t.objs[j], zt = t.objs[j - 1];
        for (const auto& [na, c] : A.compose(zf, zm, zt, t.arrows[j - 1], t.arrows[j])) {
            HTuple nt;
            nt.objs = t.objs;
            nt.objs.erase(nt.objs.begin() + j);
            nt.l = t.l;
            nt.arrows = t.arrows;
            nt.arrows.erase(nt.arrows.begin() + j);
            nt.arrows[j - 1] = na;
            nt.r = t.r;
            push(nt, c);
        }
    } else {
        // contract (a_n, r) through the right table: key (X_n, X_{n-1})
        int xn = t.objs[n], xm = t.objs[n - 1];
        for (const auto& [nr, c] : sys.bm.act_r(xn, xm, t.arrows[n - 1], t.r)) {
            HTuple nt;
            nt.objs.assign(t.objs.begin(), t.objs.end() - 1);
            nt.l = t.l;
            nt.arrows.assign(t.arrows.begin(), t.arrows.end() - 1);
            nt.r = nr;
            push(nt, c);
        }
    }
    return out;
}

/* degeneracy: insert id_{X_j} as a new arrow at slot j */
template <class F>
std::optional<TupleRef> degeneracy_of_tuple(const HochschildSystem<F>& sys, int level,
                                            const HTuple& t, int j) {
    HTuple nt;
    nt.objs = t.objs;
    nt.objs.insert(nt.objs.begin() + j, t.objs[j]);
    nt.l = t.l;
    nt.arrows = t.arrows;
    nt.arrows.insert(nt.arrows.begin() + j, sys.A->identity[t.objs[j]]);
    nt.r = t.r;
    return sys.find(level + 1, nt);
}

template <class F>
Matrix<F> face_matrix(const HochschildSystem<F>& sys, int level, int j, int degree) {
    const F& k = sys.field();
    const auto& here = sys.levels[level].tuples;
    auto it = here.find(degree);
    int cols = it == here.end() ? 0 : int(it->second.size());
    const auto& below = sys.levels[level - 1].tuples;
    auto bt = below.find(degree);
    int rows = bt == below.end() ? 0 : int(bt->second.size());
    Matrix<F> m(k, rows, cols);
    if (it != here.end())
        for (int c = 0; c < cols; ++c)
            for (const auto& [ref, v] : face_of_tuple(sys, level, it->second[c], j))
                m.add_to(ref.index, c, v);
    return m;
}

/* simplicial identities plus chain-map property of every face/degeneracy */
template <class F>
ValidationReport simplicial_report(const HochschildSystem<F>& sys) {
    const F& k = sys.field();
    ValidationReport rep;
    std::map<std::tuple<int, int, int>, Matrix<F>> memo;
    auto face_cm = [&](int level, int j, int degree) -> const Matrix<F>& {
        auto key = std::tuple{level, j, degree};
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, face_matrix(sys, level, j, degree)).first;
        return it->second;
    };

    for (int n = 1; n <= sys.L; ++n) {
        const auto& lvl = sys.levels[n];
        // faces are chain maps: d_{n-1} . face = face . d_n
        for (int j = 0; j <= n; ++j)
            for (const auto& [d, ts] : lvl.tuples) {
                Matrix<F> lhs = sys.levels[n - 1].cx->dmat(d).mul(face_cm(n, j, d));
                Matrix<F> rhs = face_cm(n, j, d + 1).mul(lvl.cx->dmat(d));
                rep.expect(lhs == rhs, "face " + std::to_string(j) + " at level " +
                                           std::to_string(n) + " is not a chain map");
            }
        if (n < 2) continue;
        // d_i d_j = d_{j-1} d_i for i < j
        for (int i = 0; i <= n - 1; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (const auto& [d, ts] : lvl.tuples) {
                    Matrix<F> lhs = face_cm(n - 1, i, d).mul(face_cm(n, j, d));
                    Matrix<F> rhs = face_cm(n - 1, j - 1, d).mul(face_cm(n, i, d));
                    rep.expect(lhs == rhs, "simplicial identity d" + std::to_string(i) +
                                               " d" + std::to_string(j) + " fails at level " +
                                               std::to_string(n));
                }
    }

    if (!sys.normalized) {
        auto ref_eq = [&](RefVec<F> a, RefVec<F> b) {
            std::map<TupleRef, typename F::Elt> acc;
            for (const auto& [r, v] : a) {
                auto [it, fresh] = acc.try_emplace(r, v);
                if (!fresh) it->second = k.add(it->second, v);
            }
            for (const auto& [r, v] : b) {
                auto [it, fresh] = acc.try_emplace(r, k.neg(v));
                if (!fresh) it->second = k.sub(it->second, v);
            }
            for (const auto& [r, v] : acc)
                if (!k.is_zero(v)) return false;
            return true;
        };
        auto degen = [&](int level, const TupleRef& ref, int j) -> RefVec<F> {
            auto s = degeneracy_of_tuple(sys, level, sys.tuple_at(ref), j);
            if (!s) fail("InternalError", "degeneracy image missing");
            return {{*s, k.one()}};
        };
        auto degen_vec = [&](int level, const RefVec<F>& xs, int j) {
            RefVec<F> out;
            for (const auto& [r, v] : xs)
                for (const auto& [q, w] : degen(level, r, j))
                    out.push_back({q, k.mul(v, w)});
            return out;
        };
        auto face_vec = [&](int level, const RefVec<F>& xs, int i) {
            RefVec<F> out;
            for (const auto& [r, v] : xs)
                for (const auto& [q, w] : face_of_tuple(sys, level, sys.tuple_at(r), i))
                    out.push_back({q, k.mul(v, w)});
            return out;
        };

        for (int n = 0; n < sys.L; ++n)
            for (const auto& [d, ts] : sys.levels[n].tuples)
                for (int idx = 0; idx < int(ts.size()); ++idx) {
                    TupleRef ref{n, d, idx};
                    RefVec<F> self{{ref, k.one()}};
                    for (int j = 0; j <= n; ++j) {
                        auto sj = degen(n, ref, j);
                        // d_i s_j
                        for (int i = 0; i <= n + 1; ++i) {
                            RefVec<F> lhs = face_vec(n + 1, sj, i);
                            RefVec<F> rhs;
                            if (i == j || i == j + 1) rhs = self;
                            else if (i < j)
                                rhs = degen_vec(n - 1, face_vec(n, self, i), j - 1);
                            else
                                rhs = degen_vec(n - 1, face_vec(n, self, i - 1), j);
                            rep.expect(ref_eq(lhs, rhs),
                                       "face-degeneracy identity d" + std::to_string(i) +
                                           " s" + std::to_string(j) + " fails at level " +
                                           std::to_string(n));
                            if (!rep.ok) return rep;
                        }
                        // s_i s_j = s_{j+1} s_i for i <= j
                        if (n + 2 <= sys.L)
                            for (int i = 0; i <= j; ++i) {
                                auto lhs = degen_vec(n + 1, sj, i);
                                auto rhs = degen_vec(n + 1, degen(n, ref, i), j + 1);
                                rep.expect(ref_eq(lhs, rhs),
                                           "degeneracy identity s_i s_j fails at level " +
                                               std::to_string(n));
                            }
                    }
                }
    }
    return rep;
}

/* ------------------------------------------------------------------ */
/* Total complex                                                       */
/* ------------------------------------------------------------------ */

template <class F>
struct HochschildTotal {
    ComplexPtr<F> cx;
    std::map<std::pair<int, int>, int> offset;  // (total degree, level) -> offset
    int L = 0;
    bool floor_valid = false;  // the exactness floor rule applied
    int coeff_top = 0;         // f in the floor rule

    TupleRef locate(int total_degree, int pos, const HochschildSystem<F>& sys) const {
        for (int i = 0; i <= L; ++i) {
            auto it = offset.find({total_degree, i});
            if (it == offset.end()) continue;
            auto ts = sys.levels[i].tuples.find(total_degree + i);
            if (ts == sys.levels[i].tuples.end()) continue;
            if (pos < it->second + int(ts->second.size()))
                return TupleRef{i, total_degree + i, pos - it->second};
        }
        fail("InternalError", "total position out of range");
    }
    int position(const TupleRef& ref) const {
        return offset.at({ref.degree - ref.level, ref.level}) + ref.index;
    }
};

/* d_tot x = d_int x + (-1)^{internal degree} sum_j (-1)^j face_j x */
template <class F>
RefVec<F> total_d_of_tuple(const HochschildSystem<F>& sys, const TupleRef& ref) {
    const F& k = sys.field();
    RefVec<F> out;
    const HTuple& t = sys.tuple_at(ref);
    const auto& lvl = sys.levels[ref.level];
    auto dt = lvl.dT.find(ref.degree);
    if (dt != lvl.dT.end())
        for (const auto& [r, v] : dt->second.row(ref.index))
            out.push_back({TupleRef{ref.level, ref.degree + 1, r}, v});
    typename F::Elt sm = ref.degree % 2 == 0 ? k.one() : k.neg(k.one());
    for (int j = 0; j <= ref.level; ++j) {
        typename F::Elt s = j % 2 == 0 ? sm : k.neg(sm);
        for (const auto& [fr, c] : face_of_tuple(sys, ref.level, t, j))
            out.push_back({fr, k.mul(s, c)});
    }
    return out;
}

template <class F>
HochschildTotal<F> total_complex(const HochschildSystem<F>& sys) {
    const F& k = sys.field();
    HochschildTotal<F> tot;
    tot.L = sys.L;

    // exactness floor: all hom degrees <= 0 and coefficient bounded above
    bool hom_ok = true;
    const auto& A = *sys.A;
    for (int x = 0; x < A.n_objects(); ++x)
        for (int y = 0; y < A.n_objects(); ++y)
            if (A.hom_dim(x, y) > 0 && A.hom(x, y)->space.support_hi() > 0) hom_ok = false;
    int ltop = kNegInf, rtop = kNegInf;
    for (int x = 0; x < A.n_objects(); ++x) {
        if (!sys.bm.L[x]->space.is_zero())
            ltop = std::max(ltop, sys.bm.L[x]->space.support_hi());
        if (!sys.bm.R[x]->space.is_zero())
            rtop = std::max(rtop, sys.bm.R[x]->space.support_hi());
    }
    tot.floor_valid = hom_ok && ltop > kNegInf && rtop > kNegInf;
    tot.coeff_top = tot.floor_valid ? ltop + rtop : 0;

    Complex<F> cx;
    cx.field = k;
    int lo = kPosInf, hi = kNegInf;
    for (int i = 0; i <= sys.L; ++i)
        for (const auto& [d, ts] : sys.levels[i].tuples) {
            lo = std::min(lo, d - i);
            hi = std::max(hi, d - i);
        }
    if (lo > hi) { lo = 0; hi = 0; }
    cx.window = DegRange::closed(lo, hi);
    cx.exact = tot.floor_valid ? DegRange::at_least(tot.coeff_top - sys.L)
                               : DegRange::none();

    for (int t = lo; t <= hi; ++t) {
        std::vector<std::string> labels;
        for (int i = 0; i <= sys.L; ++i) {
            auto it = sys.levels[i].tuples.find(t + i);
            if (it == sys.levels[i].tuples.end()) continue;
            tot.offset[{t, i}] = int(labels.size());
            const auto& ls = sys.levels[i].cx->space.basis.at(t + i);
            for (const auto& s : ls) labels.push_back("L" + std::to_string(i) + s);
        }
        if (!labels.empty()) cx.space.basis[t] = std::move(labels);
    }

    for (int t = lo; t < hi; ++t) {
        int rows = cx.space.dim(t + 1), cols = cx.space.dim(t);
        if (rows == 0 || cols == 0) continue;
        Matrix<F> d(k, rows, cols);
        for (int i = 0; i <= sys.L; ++i) {
            auto it = sys.levels[i].tuples.find(t + i);
            if (it == sys.levels[i].tuples.end()) continue;
            int off = tot.offset.at({t, i});
            // internal block, copied wholesale
            auto iup = tot.offset.find({t + 1, i});
            if (iup != tot.offset.end()) {
                auto db = sys.levels[i].cx->diff.find(t + i);
                if (db != sys.levels[i].cx->diff.end())
                    for (int r = 0; r < db->second.rows(); ++r)
                        for (const auto& [c, v] : db->second.row(r))
                            d.add_to(iup->second + r, off + c, v);
            }
            // simplicial block, tuple by tuple
            auto fup = tot.offset.find({t + 1, i - 1});
            if (i > 0 && fup != tot.offset.end()) {
                typename F::Elt sm = (t + i) % 2 == 0 ? k.one() : k.neg(k.one());
                for (int c = 0; c < int(it->second.size()); ++c)
                    for (int j = 0; j <= i; ++j) {
                        typename F::Elt s = j % 2 == 0 ? sm : k.neg(sm);
                        for (const auto& [fr, v] :
                             face_of_tuple(sys, i, it->second[c], j))
                            d.add_to(fup->second + fr.index, off + c, k.mul(s, v));
                    }
            }
        }
        if (!d.is_zero_matrix()) cx.diff[t] = std::move(d);
    }
    tot.cx = make_complex(std::move(cx));
    return tot;
}

/* ------------------------------------------------------------------ */
/* The Tannakian dual coalgebra  C_w(A) = Tot CC(A, w (x) w^v)          */
/* ------------------------------------------------------------------ */

template <class F>
struct TannakianDual {
    PresentationPtr<F> A;
    FibreFunctorPtr<F> omega;
    HochschildSystem<F> sys;
    HochschildTotal<F> total;
    bool normalized = false;
    int L = 0;

    const ComplexPtr<F>& carrier() const { return total.cx; }
    int total_degree(const TupleRef& r) const { return r.degree - r.level; }
};

template <class F>
TannakianDual<F> tannakian_dual(const PresentationPtr<F>& A, const FibreFunctorPtr<F>& w,
                                bool normalized, int L) {
    if (L < 0) fail("BadTruncation", "level must be >= 0");
    TannakianDual<F> td;
    td.A = A;
    td.omega = w;
    td.normalized = normalized;
    td.L = L;
    td.sys = cc_levels(A, coefficient_bimodule(A, *w), L, normalized);
    td.total = total_complex(td.sys);
    return td;
}

template <class F>
using PairVec = std::vector<std::tuple<TupleRef, TupleRef, typename F::Elt>>;

/* Delta splits a level-(m+n) string at every position, inserting the
 * coevaluation pair of w(X_m).  The inserted block has degree 0, so no sign. */
template <class F>
PairVec<F> delta_of_tuple(const HochschildSystem<F>& sys, const TupleRef& ref) {
    const F& k = sys.field();
    PairVec<F> out;
    const HTuple& t = sys.tuple_at(ref);
    int n = ref.level;
    for (int m = 0; m <= n; ++m) {
        int X = t.objs[m];
        const auto& rf = sys.bm.Rflat[X];
        const auto& lf = sys.bm.Lflat[X];
        for (int rb = 0; rb < rf.size(); ++rb) {
            auto [d, i] = rf.elems[rb];
            int lb = lf.find(-d, i);
            if (lb < 0) fail("InternalError", "coevaluation partner missing");
            HTuple left;
            left.objs.assign(t.objs.begin(), t.objs.begin() + m + 1);
            left.l = t.l;
            left.arrows.assign(t.arrows.begin(), t.arrows.begin() + m);
            left.r = rb;
            HTuple right;
            right.objs.assign(t.objs.begin() + m, t.objs.end());
            right.l = lb;
            right.arrows.assign(t.arrows.begin() + m, t.arrows.end());
            right.r = t.r;
            auto lr = sys.find(m, left);
            auto rr = sys.find(n - m, right);
            if (!lr || !rr) fail("InternalError", "split of a stored tuple missing");
            out.push_back({*lr, *rr, k.one()});
        }
    }
    return out;
}

/* counit: the evaluation pairing on level 0, zero elsewhere */
template <class F>
typename F::Elt eps_of_tuple(const HochschildSystem<F>& sys, const TupleRef& ref) {
    const F& k = sys.field();
    if (ref.level != 0) return k.zero();
    const HTuple& t = sys.tuple_at(ref);
    int X = t.objs[0];
    auto [dl, q] = sys.bm.Lflat[X].elems[t.l];
    auto [dr, p] = sys.bm.Rflat[X].elems[t.r];
    if (dl == -dr && p == q) return k.one();
    return k.zero();
}

namespace detail {

struct RefPairKey {
    TupleRef a, b;
    bool operator<(const RefPairKey& o) const {
        return std::tie(a, b) < std::tie(o.a, o.b);
    }
};

template <class F, class Key>
class Accumulator {
  public:
    explicit Accumulator(const F& k) : k_(k) {}
    void add(const Key& key, const typename F::Elt& v) {
        auto [it, fresh] = acc_.try_emplace(key, v);
        if (!fresh) it->second = k_.add(it->second, v);
    }
    void sub(const Key& key, const typename F::Elt& v) { add(key, k_.neg(v)); }
    bool all_zero() const {
        for (const auto& [key, v] : acc_)
            if (!k_.is_zero(v)) return false;
        return true;
    }

  private:
    const F& k_;
    std::map<Key, typename F::Elt> acc_;
};

}  // namespace detail

/* Exact coalgebra certificates, evaluated tuple by tuple so that no tensor
 * square of the carrier is ever materialised. */
template <class F>
ValidationReport coalgebra_report(const TannakianDual<F>& td) {
    const F& k = td.sys.field();
    const auto& sys = td.sys;
    ValidationReport rep;

    for (int lvl = 0; lvl <= sys.L && rep.ok; ++lvl)
        for (const auto& [deg, ts] : sys.levels[lvl].tuples)
            for (int idx = 0; idx < int(ts.size()); ++idx) {
                TupleRef ref{lvl, deg, idx};
                auto dt = delta_of_tuple(sys, ref);

                // counit: (eps (x) id) Delta = id = (id (x) eps) Delta
                detail::Accumulator<F, TupleRef> lc(k), rc(k);
                for (const auto& [a, b, c] : dt) {
                    auto ea = eps_of_tuple(sys, a);
                    if (!k.is_zero(ea)) lc.add(b, k.mul(ea, c));
                    auto eb = eps_of_tuple(sys, b);
                    if (!k.is_zero(eb)) rc.add(a, k.mul(eb, c));
                }
                lc.sub(ref, k.one());
                rc.sub(ref, k.one());
                rep.expect(lc.all_zero(), "left counit law fails");
                rep.expect(rc.all_zero(), "right counit law fails");

                // coassociativity
                detail::Accumulator<F, std::tuple<TupleRef, TupleRef, TupleRef>> co(k);
                for (const auto& [a, b, c] : dt) {
                    for (const auto& [a1, a2, c2] : delta_of_tuple(sys, a))
                        co.add({a1, a2, b}, k.mul(c, c2));
                    for (const auto& [b1, b2, c2] : delta_of_tuple(sys, b))
                        co.sub({a, b1, b2}, k.mul(c, c2));
                }
                rep.expect(co.all_zero(), "coassociativity fails");

                // Delta is a chain map for the tensor-square differential
                detail::Accumulator<F, detail::RefPairKey> cm(k);
                for (const auto& [dref, dc] : total_d_of_tuple(sys, ref))
                    for (const auto& [a, b, c] : delta_of_tuple(sys, dref))
                        cm.add({a, b}, k.mul(dc, c));
                for (const auto& [a, b, c] : dt) {
                    for (const auto& [da, dc] : total_d_of_tuple(sys, a))
                        cm.sub({da, b}, k.mul(c, dc));
                    typename F::Elt s = td.total_degree(a) % 2 == 0 ? k.one()
                                                                    : k.neg(k.one());
                    for (const auto& [db, dc] : total_d_of_tuple(sys, b))
                        cm.sub({a, db}, k.mul(k.mul(s, c), dc));
                }
                rep.expect(cm.all_zero(), "Delta is not a chain map");

                // eps is a chain map: eps . d_tot = 0
                if (td.total_degree(ref) == -1) {
                    typename F::Elt acc = k.zero();
                    for (const auto& [dref, dc] : total_d_of_tuple(sys, ref))
                        acc = k.add(acc, k.mul(dc, eps_of_tuple(sys, dref)));
                    rep.expect(k.is_zero(acc), "eps is not a chain map");
                }
                if (!rep.ok) {
                    rep.failures.back() += " at " +
                        detail::tuple_label(*sys.A, sys.bm, sys.tuple_at(ref));
                    return rep;
                }
            }
    return rep;
}

/* the constructor-with-certification entry point; the certificates can only
 * fire if the sign ledger has been corrupted */
template <class F>
TannakianDual<F> tannakian_dual_certified(const PresentationPtr<F>& A,
                                          const FibreFunctorPtr<F>& w, bool normalized,
                                          int L) {
    TannakianDual<F> td = tannakian_dual(A, w, normalized, L);
    auto rep = coalgebra_report(td);
    if (!rep.ok) fail("CoalgebraAxiomFailure", rep.describe());
    return td;
}

/* materialised comultiplication for downstream comodule work; only sensible
 * on desk-size carriers */
template <class F>
ChainMap<F> materialize_delta(const TannakianDual<F>& td, const ComplexPtr<F>& carrier_sq) {
    const auto& sys = td.sys;
    const F& k = sys.field();
    ChainMap<F> Delta{td.carrier(), carrier_sq, 0, {}};
    for (const auto& [tdeg, labels] : td.carrier()->space.basis) {
        TensorIndex<F> ti(*td.carrier(), *td.carrier(), tdeg);
        if (ti.total == 0) continue;
        Matrix<F> blk(k, ti.total, int(labels.size()));
        for (int pos = 0; pos < int(labels.size()); ++pos) {
            TupleRef ref = td.total.locate(tdeg, pos, sys);
            for (const auto& [a, b, c] : delta_of_tuple(sys, ref)) {
                int ta = td.total_degree(a);
                blk.add_to(ti.position(ta, td.total.position(a), td.total.position(b)),
                           pos, c);
            }
        }
        Delta.set_block(tdeg, std::move(blk));
    }
    return Delta;
}

template <class F>
ChainMap<F> materialize_eps(const TannakianDual<F>& td, const ComplexPtr<F>& unit) {
    const auto& sys = td.sys;
    const F& k = sys.field();
    ChainMap<F> eps{td.carrier(), unit, 0, {}};
    int dim0 = td.carrier()->dim(0);
    if (dim0 > 0) {
        Matrix<F> blk(k, 1, dim0);
        for (int pos = 0; pos < dim0; ++pos) {
            TupleRef ref = td.total.locate(0, pos, sys);
            auto v = eps_of_tuple(sys, ref);
            if (!k.is_zero(v)) blk.add_to(0, pos, v);
        }
        eps.set_block(0, std::move(blk));
    }
    return eps;
}

/* ------------------------------------------------------------------ */
/* Functoriality along a dg functor                                    */
/* ------------------------------------------------------------------ */

/* fibre functor w . Fn on the source of Fn, sharing the value complexes */
template <class F>
FibreFunctorPtr<F> pullback_fibre(const DgFunctor<F>& Fn, const FibreFunctor<F>& w) {
    const F& k = Fn.src->field;
    auto out = std::make_shared<FibreFunctor<F>>();
    out->base = Fn.src;
    int n = Fn.src->n_objects();
    out->on_objects.resize(n);
    for (int x = 0; x < n; ++x) out->on_objects[x] = w.value(Fn.on_objects[x]);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int fx = Fn.on_objects[x], fy = Fn.on_objects[y];
            std::vector<GradedBlocks<F>> images;
            for (int a = 0; a < Fn.src->hom_dim(x, y); ++a) {
                GradedBlocks<F> g;
                g.degree = Fn.src->arrow_degree(x, y, a);
                const auto& wx = *w.value(fx);
                const auto& wy = *w.value(fy);
                for (int m = wx.window.lo; m <= wx.window.hi; ++m) {
                    Matrix<F> acc(k, wy.dim(m + g.degree), wx.dim(m));
                    for (const auto& [r, c] : Fn.image(x, y, a))
                        acc = acc.add(w.image(fx, fy, r).block(wx, wy, m).scaled(c));
                    if (!acc.is_zero_matrix()) g.blocks[m] = std::move(acc);
                }
                images.push_back(std::move(g));
            }
            out->on_morphisms[{x, y}] = std::move(images);
        }
    return out;
}

template <class F>
struct CoalgebraMorphism {
    ChainMap<F> map;         // between the carriers
    ValidationReport cert;   // chain map + compatibility with (Delta, eps)
};

namespace detail {

/* image of a tuple under "apply Fn to every arrow slot"; ends carry over
 * because the source system was built with the pulled-back fibre functor */
template <class F>
RefVec<F> functor_image_of_tuple(const HochschildSystem<F>& src,
                                 const HochschildSystem<F>& tgt, const DgFunctor<F>& Fn,
                                 const TupleRef& ref) {
    const F& k = src.field();
    const HTuple& t = src.tuple_at(ref);
    int n = ref.level;
    RefVec<F> out;
    HTuple base;
    base.objs.resize(n + 1);
    for (int i = 0; i <= n; ++i) base.objs[i] = Fn.on_objects[t.objs[i]];
    base.l = t.l;
    base.r = t.r;
    base.arrows.assign(n, 0);
    // expand the product of sparse images over arrow slots
    std::vector<SparseVec<F>> images(n);
    for (int j = 0; j < n; ++j) {
        images[j] = Fn.image(t.objs[j + 1], t.objs[j], t.arrows[j]);
        if (images[j].empty()) return out;
    }
    std::vector<int> cur(n, 0);
    while (true) {
        typename F::Elt c = k.one();
        for (int j = 0; j < n; ++j) {
            base.arrows[j] = images[j][cur[j]].first;
            c = k.mul(c, images[j][cur[j]].second);
        }
        if (auto r = tgt.find(n, base)) out.push_back({*r, c});
        int j = 0;
        while (j < n && ++cur[j] == int(images[j].size())) cur[j++] = 0;
        if (j == n || n == 0) break;
    }
    return out;
}

}  // namespace detail

/* The induced morphism C_{w.Fn}(B) -> C_w(A) of dg coalgebras. */
template <class F>
CoalgebraMorphism<F> functoriality_map(const TannakianDual<F>& src, const DgFunctor<F>& Fn,
                                       const TannakianDual<F>& tgt) {
    const F& k = src.sys.field();
    CoalgebraMorphism<F> out;
    out.map = ChainMap<F>{src.carrier(), tgt.carrier(), 0, {}};

    std::map<TupleRef, RefVec<F>> images;
    for (int lvl = 0; lvl <= src.sys.L; ++lvl)
        for (const auto& [deg, ts] : src.sys.levels[lvl].tuples)
            for (int idx = 0; idx < int(ts.size()); ++idx) {
                TupleRef ref{lvl, deg, idx};
                images[ref] = detail::functor_image_of_tuple(src.sys, tgt.sys, Fn, ref);
            }

    for (const auto& [tdeg, labels] : src.carrier()->space.basis) {
        Matrix<F> blk(k, tgt.carrier()->dim(tdeg), int(labels.size()));
        for (int pos = 0; pos < int(labels.size()); ++pos) {
            TupleRef ref = src.total.locate(tdeg, pos, src.sys);
            for (const auto& [r, c] : images.at(ref))
                blk.add_to(tgt.total.position(r), pos, c);
        }
        out.map.set_block(tdeg, std::move(blk));
    }

    // certificates, tuple by tuple
    auto img = [&](const TupleRef& r) -> const RefVec<F>& { return images.at(r); };
    for (int lvl = 0; lvl <= src.sys.L && out.cert.ok; ++lvl)
        for (const auto& [deg, ts] : src.sys.levels[lvl].tuples)
            for (int idx = 0; idx < int(ts.size()); ++idx) {
                TupleRef ref{lvl, deg, idx};
                // chain map: f(d x) = d(f x)
                detail::Accumulator<F, TupleRef> cm(k);
                for (const auto& [dref, dc] : total_d_of_tuple(src.sys, ref))
                    for (const auto& [r, c] : img(dref)) cm.add(r, k.mul(dc, c));
                for (const auto& [r, c] : img(ref))
                    for (const auto& [dr, dc] : total_d_of_tuple(tgt.sys, r))
                        cm.sub(dr, k.mul(c, dc));
                out.cert.expect(cm.all_zero(), "induced map is not a chain map");

                // (f (x) f) Delta = Delta f
                detail::Accumulator<F, detail::RefPairKey> dm(k);
                for (const auto& [a, b, c] : delta_of_tuple(src.sys, ref))
                    for (const auto& [ra, ca] : img(a))
                        for (const auto& [rb, cb] : img(b))
                            dm.add({ra, rb}, k.mul(c, k.mul(ca, cb)));
                for (const auto& [r, c] : img(ref))
                    for (const auto& [a, b, c2] : delta_of_tuple(tgt.sys, r))
                        dm.sub({a, b}, k.mul(c, c2));
                out.cert.expect(dm.all_zero(), "induced map does not respect Delta");

                // eps f = eps
                typename F::Elt acc = eps_of_tuple(src.sys, ref);
                for (const auto& [r, c] : img(ref))
                    acc = k.sub(acc, k.mul(c, eps_of_tuple(tgt.sys, r)));
                out.cert.expect(k.is_zero(acc), "induced map does not respect eps");
                if (!out.cert.ok) return out;
            }
    return out;
}

}  // namespace dgt
