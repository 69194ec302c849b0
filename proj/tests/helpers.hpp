#pragma once

#include <map>
#include <random>

#include "dgtannaka/complex.hpp"

namespace dgt::testing {

/* A complex with known homology: direct sum of spheres (one class each) and
 * discs (acyclic two-term pieces), conjugated by random unit-triangular
 * changes of basis so the matrices are not block diagonal. */
template <class F>
struct KnownComplex {
    ComplexPtr<F> cx;
    std::map<int, int> hdims;
};

template <class F>
Matrix<F> random_invertible(const F& f, std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> val(-2, 2);
    Matrix<F> l = Matrix<F>::identity(f, n), u = Matrix<F>::identity(f, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            if (rng() % 2) l.set(i, j, f.from_long(val(rng)));
            if (rng() % 2) u.set(j, i, f.from_long(val(rng)));
        }
    return l.mul(u);
}

template <class F>
KnownComplex<F> random_complex(const F& f, std::mt19937_64& rng, int lo, int hi,
                               int max_spheres = 2, int max_discs = 2) {
    std::map<int, int> spheres, discs;
    for (int n = lo; n <= hi; ++n) spheres[n] = int(rng() % (max_spheres + 1));
    for (int n = lo; n < hi; ++n) discs[n] = int(rng() % (max_discs + 1));

    Complex<F> c;
    c.field = f;
    c.window = DegRange::closed(lo, hi);
    c.exact = DegRange::all();
    std::map<int, int> dim;
    // layout per degree: [spheres | disc starts at n | disc ends from n-1]
    for (int n = lo; n <= hi; ++n) {
        int d = spheres[n] + (n < hi ? discs[n] : 0) + (n > lo ? discs[n - 1] : 0);
        dim[n] = d;
        std::vector<std::string> labels;
        for (int i = 0; i < d; ++i)
            labels.push_back("e" + std::to_string(n) + "_" + std::to_string(i));
        if (d > 0) c.space.basis[n] = std::move(labels);
    }
    for (int n = lo; n < hi; ++n) {
        if (dim[n] == 0 || dim[n + 1] == 0 || discs[n] == 0) continue;
        Matrix<F> d(f, dim[n + 1], dim[n]);
        int src_off = spheres[n];                               // disc starts
        int tgt_off = spheres[n + 1] + (n + 1 < hi ? discs[n + 1] : 0);  // disc ends
        for (int i = 0; i < discs[n]; ++i) d.set(tgt_off + i, src_off + i, f.one());
        c.diff[n] = std::move(d);
    }
    // conjugate by random changes of basis
    std::map<int, Matrix<F>> p, pinv;
    for (int n = lo; n <= hi; ++n) {
        if (dim[n] == 0) continue;
        p[n] = random_invertible(f, rng, dim[n]);
        auto inv = p[n].solve_many(Matrix<F>::identity(f, dim[n]));
        pinv[n] = *inv;
    }
    std::map<int, Matrix<F>> nd;
    for (const auto& [n, d] : c.diff) {
        Matrix<F> m = d;
        if (p.count(n + 1)) m = p[n + 1].mul(m);
        if (pinv.count(n)) m = m.mul(pinv[n]);
        if (!m.is_zero_matrix()) nd[n] = std::move(m);
    }
    c.diff = std::move(nd);

    KnownComplex<F> out;
    out.cx = make_complex(std::move(c));
    out.hdims = spheres;
    return out;
}

}  // namespace dgt::testing
