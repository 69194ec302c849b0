#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "dgtannaka/field.hpp"

namespace dgt {

/* Exact matrix over a field F, stored as sorted sparse rows.
 * Elimination densifies below 64x64, where row merging is not worth it.
 * Pivoting is always "first nonzero in column order", so echelon forms,
 * kernels and solutions are deterministic. */
template <class F>
class Matrix {
  public:
    using K = typename F::Elt;
    using Row = std::vector<std::pair<int, K>>;  // sorted by column

    Matrix() : rows_(0), cols_(0) {}
    Matrix(F f, int rows, int cols) : field_(std::move(f)), rows_(rows), cols_(cols), data_(rows) {}

    static Matrix identity(const F& f, int n) {
        Matrix m(f, n, n);
        for (int i = 0; i < n; ++i) m.data_[i].push_back({i, f.one()});
        return m;
    }
    static Matrix zero(const F& f, int r, int c) { return Matrix(f, r, c); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const F& field() const { return field_; }

    void set(int i, int j, const K& v) {
        Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) {
            if (field_.is_zero(v)) r.erase(it);
            else it->second = v;
        } else if (!field_.is_zero(v)) {
            r.insert(it, {j, v});
        }
    }
    void add_to(int i, int j, const K& v) {
        if (field_.is_zero(v)) return;
        Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) {
            it->second = field_.add(it->second, v);
            if (field_.is_zero(it->second)) r.erase(it);
        } else {
            r.insert(it, {j, v});
        }
    }
    K get(int i, int j) const {
        const Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) return it->second;
        return field_.zero();
    }
    const Row& row(int i) const { return data_[i]; }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }
    bool is_zero_matrix() const { return nnz() == 0; }

    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (int i = 0; i < rows_; ++i) {
            if (data_[i].size() != o.data_[i].size()) return false;
            for (std::size_t k = 0; k < data_[i].size(); ++k) {
                if (data_[i][k].first != o.data_[i][k].first) return false;
                if (!field_.eq(data_[i][k].second, o.data_[i][k].second)) return false;
            }
        }
        return true;
    }

    Matrix add(const Matrix& o) const {
        Matrix r(field_, rows_, cols_);
        for (int i = 0; i < rows_; ++i) {
            r.data_[i] = data_[i];
            for (const auto& [j, v] : o.data_[i]) r.add_to(i, j, v);
        }
        return r;
    }
    Matrix sub(const Matrix& o) const { return add(o.scaled(field_.neg(field_.one()))); }
    Matrix scaled(const K& c) const {
        Matrix r(field_, rows_, cols_);
        if (field_.is_zero(c)) return r;
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) r.data_[i].push_back({j, field_.mul(c, v)});
        return r;
    }
    Matrix mul(const Matrix& o) const {
        if (cols_ != o.rows_) fail("DimensionMismatch", "matrix product shapes");
        Matrix r(field_, rows_, o.cols_);
        std::vector<K> acc(o.cols_, field_.zero());
        std::vector<int> touched;
        for (int i = 0; i < rows_; ++i) {
            touched.clear();
            for (const auto& [k, v] : data_[i]) {
                for (const auto& [j, w] : o.data_[k]) {
                    if (field_.is_zero(acc[j])) touched.push_back(j);
                    acc[j] = field_.add(acc[j], field_.mul(v, w));
                }
            }
            std::sort(touched.begin(), touched.end());
            for (int j : touched) {
                if (!field_.is_zero(acc[j])) r.data_[i].push_back({j, acc[j]});
                acc[j] = field_.zero();
            }
        }
        return r;
    }
    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) r.data_[j].push_back({i, v});
        return r;
    }
    Matrix hstack(const Matrix& o) const {
        if (rows_ != o.rows_) fail("DimensionMismatch", "hstack row counts");
        Matrix r(field_, rows_, cols_ + o.cols_);
        for (int i = 0; i < rows_; ++i) {
            r.data_[i] = data_[i];
            for (const auto& [j, v] : o.data_[i]) r.data_[i].push_back({j + cols_, v});
        }
        return r;
    }
    Matrix vstack(const Matrix& o) const {
        if (cols_ != o.cols_) fail("DimensionMismatch", "vstack col counts");
        Matrix r(field_, rows_ + o.rows_, cols_);
        for (int i = 0; i < rows_; ++i) r.data_[i] = data_[i];
        for (int i = 0; i < o.rows_; ++i) r.data_[rows_ + i] = o.data_[i];
        return r;
    }
    Matrix columns(const std::vector<int>& idx) const {
        std::vector<int> pos(cols_, -1);
        for (std::size_t t = 0; t < idx.size(); ++t) pos[idx[t]] = int(t);
        Matrix r(field_, rows_, int(idx.size()));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i])
                if (pos[j] >= 0) r.data_[i].push_back({pos[j], v});
        for (int i = 0; i < rows_; ++i)
            std::sort(r.data_[i].begin(), r.data_[i].end());
        return r;
    }

    std::vector<K> apply(const std::vector<K>& x) const {
        if (int(x.size()) != cols_) fail("DimensionMismatch", "matrix-vector product");
        std::vector<K> y(rows_, field_.zero());
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) y[i] = field_.add(y[i], field_.mul(v, x[j]));
        return y;
    }

    struct Echelon {
        Matrix reduced;               // RREF of the input
        std::vector<int> pivot_cols;  // increasing
        int rank = 0;
    };

    Echelon rref() const {
        if (std::int64_t(rows_) * cols_ <= 64 * 64) return rref_dense();
        return rref_sparse();
    }

    int rank() const { return rref().rank; }

    /* Columns form the canonical kernel basis: one vector per free column,
     * unit coefficient at the free column, in increasing column order. */
    Matrix kernel_basis() const {
        Echelon e = rref();
        std::vector<int> is_pivot(cols_, -1);
        for (std::size_t t = 0; t < e.pivot_cols.size(); ++t) is_pivot[e.pivot_cols[t]] = int(t);
        std::vector<int> free_cols;
        for (int j = 0; j < cols_; ++j)
            if (is_pivot[j] < 0) free_cols.push_back(j);
        Matrix ker(field_, cols_, int(free_cols.size()));
        for (std::size_t t = 0; t < free_cols.size(); ++t) {
            int fj = free_cols[t];
            ker.set(fj, int(t), field_.one());
            for (int pr = 0; pr < e.rank; ++pr) {
                K c = e.reduced.get(pr, fj);
                if (!field_.is_zero(c)) ker.set(e.pivot_cols[pr], int(t), field_.neg(c));
            }
        }
        return ker;
    }

    std::optional<std::vector<K>> solve(const std::vector<K>& b) const {
        if (int(b.size()) != rows_) fail("DimensionMismatch", "solve rhs length");
        Matrix rhs(field_, rows_, 1);
        for (int i = 0; i < rows_; ++i) rhs.set(i, 0, b[i]);
        auto X = solve_many(rhs);
        if (!X) return std::nullopt;
        std::vector<K> x(cols_, field_.zero());
        for (int j = 0; j < cols_; ++j) x[j] = X->get(j, 0);
        return x;
    }

    /* Solve A X = B for all columns of B at once; particular solution with
     * free variables set to zero. nullopt when any column is inconsistent. */
    std::optional<Matrix> solve_many(const Matrix& B) const {
        if (B.rows_ != rows_) fail("DimensionMismatch", "solve rhs rows");
        Echelon e = hstack(B).rref();
        Matrix X(field_, cols_, B.cols_);
        for (int pr = 0; pr < e.rank; ++pr) {
            int pc = e.pivot_cols[pr];
            if (pc >= cols_) return std::nullopt;  // pivot in the rhs block
            for (const auto& [j, v] : e.reduced.data_[pr])
                if (j >= cols_) X.set(pc, j - cols_, v);
        }
        return X;
    }

  private:
    Echelon rref_dense() const {
        std::vector<std::vector<K>> a(rows_, std::vector<K>(cols_, field_.zero()));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) a[i][j] = v;
        std::vector<int> pivots;
        int pr = 0;
        for (int pc = 0; pc < cols_ && pr < rows_; ++pc) {
            int sel = -1;
            for (int i = pr; i < rows_; ++i)
                if (!field_.is_zero(a[i][pc])) { sel = i; break; }
            if (sel < 0) continue;
            std::swap(a[pr], a[sel]);
            K inv = field_.inv(a[pr][pc]);
            for (int j = pc; j < cols_; ++j) a[pr][j] = field_.mul(a[pr][j], inv);
            for (int i = 0; i < rows_; ++i) {
                if (i == pr || field_.is_zero(a[i][pc])) continue;
                K c = a[i][pc];
                for (int j = pc; j < cols_; ++j)
                    a[i][j] = field_.sub(a[i][j], field_.mul(c, a[pr][j]));
            }
            pivots.push_back(pc);
            ++pr;
        }
        Echelon e;
        e.reduced = Matrix(field_, rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!field_.is_zero(a[i][j])) e.reduced.data_[i].push_back({j, a[i][j]});
        e.pivot_cols = std::move(pivots);
        e.rank = pr;
        return e;
    }

    Echelon rref_sparse() const {
        std::vector<Row> a = data_;
        std::vector<int> pivots;
        int pr = 0;
        auto first_col = [](const Row& r) { return r.empty() ? -1 : r[0].first; };
        for (int pc = 0; pc < cols_ && pr < rows_; ++pc) {
            int sel = -1;
            for (int i = pr; i < rows_; ++i)
                if (first_col(a[i]) == pc) { sel = i; break; }
            if (sel < 0) {
                // a later row may still have pc nonzero but not leading; after
                // prior eliminations leading entries are what remains possible
                continue;
            }
            std::swap(a[pr], a[sel]);
            K inv = field_.inv(a[pr][0].second);
            if (!field_.eq(inv, field_.one()))
                for (auto& [j, v] : a[pr]) v = field_.mul(v, inv);
            for (int i = 0; i < rows_; ++i) {
                if (i == pr) continue;
                // locate coefficient at pc
                const Row& src = a[i];
                auto it = std::lower_bound(src.begin(), src.end(), pc,
                                           [](const auto& e2, int c) { return e2.first < c; });
                if (it == src.end() || it->first != pc) continue;
                K c = field_.neg(it->second);
                a[i] = axpy(a[i], c, a[pr]);
            }
            pivots.push_back(pc);
            ++pr;
        }
        Echelon e;
        e.reduced = Matrix(field_, rows_, cols_);
        for (int i = 0; i < rows_; ++i) e.reduced.data_[i] = std::move(a[i]);
        e.pivot_cols = std::move(pivots);
        e.rank = pr;
        return e;
    }

    /* dst + c * src over sorted sparse rows */
    Row axpy(const Row& dst, const K& c, const Row& src) const {
        Row out;
        out.reserve(dst.size() + src.size());
        std::size_t i = 0, j = 0;
        while (i < dst.size() || j < src.size()) {
            if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
                out.push_back(dst[i++]);
            } else if (i == dst.size() || src[j].first < dst[i].first) {
                K v = field_.mul(c, src[j].second);
                if (!field_.is_zero(v)) out.push_back({src[j].first, v});
                ++j;
            } else {
                K v = field_.add(dst[i].second, field_.mul(c, src[j].second));
                if (!field_.is_zero(v)) out.push_back({dst[i].first, v});
                ++i;
                ++j;
            }
        }
        return out;
    }

    F field_;
    int rows_, cols_;
    std::vector<Row> data_;
};

/* Rank of the column span of [sub | vecs] beyond sub: used for membership
 * and quotient computations. */
template <class F>
int rank_increase(const Matrix<F>& sub, const Matrix<F>& vecs) {
    return sub.hstack(vecs).rank() - sub.rank();
}

}  // namespace dgt
