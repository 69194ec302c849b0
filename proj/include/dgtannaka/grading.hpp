#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "dgtannaka/field.hpp"

namespace dgt {

/* Degrees live in a small band around zero; the sentinels act as +-infinity
 * for exactness intervals. */
constexpr int kNegInf = -(1 << 28);
constexpr int kPosInf = (1 << 28);

inline int deg_add(int a, int b) {
    if (a <= kNegInf || b <= kNegInf) return kNegInf;
    if (a >= kPosInf || b >= kPosInf) return kPosInf;
    int s = a + b;
    if (s <= kNegInf) return kNegInf;
    if (s >= kPosInf) return kPosInf;
    return s;
}
inline int deg_neg(int a) {
    if (a <= kNegInf) return kPosInf;
    if (a >= kPosInf) return kNegInf;
    return -a;
}

/* Closed integer interval, possibly infinite on either side, possibly empty. */
struct DegRange {
    int lo = kPosInf;
    int hi = kNegInf;  // lo > hi means empty

    static DegRange all() { return {kNegInf, kPosInf}; }
    static DegRange none() { return {kPosInf, kNegInf}; }
    static DegRange at_least(int lo) { return {lo, kPosInf}; }
    static DegRange at_most(int hi) { return {kNegInf, hi}; }
    static DegRange closed(int lo, int hi) { return {lo, hi}; }

    bool is_empty() const { return lo > hi; }
    bool contains(int n) const { return lo <= n && n <= hi; }
    bool contains(const DegRange& o) const {
        return o.is_empty() || (lo <= o.lo && o.hi <= hi);
    }
    DegRange intersect(const DegRange& o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }
    DegRange shifted(int m) const {
        if (is_empty()) return none();
        return {deg_add(lo, m), deg_add(hi, m)};
    }
    DegRange negated() const {
        if (is_empty()) return none();
        return {deg_neg(hi), deg_neg(lo)};
    }
    DegRange shrunk(int m) const {
        if (is_empty()) return none();
        return {deg_add(lo, m), deg_add(hi, -m)};
    }
    bool operator==(const DegRange& o) const {
        return (is_empty() && o.is_empty()) || (lo == o.lo && hi == o.hi);
    }
    std::string describe() const {
        if (is_empty()) return "(empty)";
        std::string a = lo <= kNegInf ? "-inf" : std::to_string(lo);
        std::string b = hi >= kPosInf ? "+inf" : std::to_string(hi);
        return "[" + a + ", " + b + "]";
    }
};

/* Finite-support collection of labelled basis vectors per degree. */
struct GradedSpace {
    std::map<int, std::vector<std::string>> basis;

    int dim(int n) const {
        auto it = basis.find(n);
        return it == basis.end() ? 0 : int(it->second.size());
    }
    long total_dim() const {
        long t = 0;
        for (const auto& [n, ls] : basis) t += long(ls.size());
        return t;
    }
    const std::string& label(int n, int i) const { return basis.at(n)[i]; }
    int support_lo() const {
        for (const auto& [n, ls] : basis)
            if (!ls.empty()) return n;
        return kPosInf;
    }
    int support_hi() const {
        for (auto it = basis.rbegin(); it != basis.rend(); ++it)
            if (!it->second.empty()) return it->first;
        return kNegInf;
    }
    bool is_zero() const { return total_dim() == 0; }
};

}  // namespace dgt
