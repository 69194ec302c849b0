#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dgt {

struct DgtError : std::runtime_error {
    std::string code;
    DgtError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw DgtError(code, msg);
}

/* The field of rational numbers with arbitrary-precision integers.
 * mpq_class keeps every value in lowest terms, so elimination never
 * accumulates unreduced fractions. */
struct RationalField {
    using Elt = mpq_class;

    Elt zero() const { return Elt(0); }
    Elt one() const { return Elt(1); }
    Elt from_long(long v) const { return Elt(v); }
    Elt add(const Elt& a, const Elt& b) const { return a + b; }
    Elt sub(const Elt& a, const Elt& b) const { return a - b; }
    Elt mul(const Elt& a, const Elt& b) const { return a * b; }
    Elt neg(const Elt& a) const { return -a; }
    Elt inv(const Elt& a) const {
        if (a == 0) fail("DivisionByZero", "1/0 over Q");
        return Elt(1) / a;
    }
    bool is_zero(const Elt& a) const { return a == 0; }
    bool eq(const Elt& a, const Elt& b) const { return a == b; }

    std::string to_string(const Elt& a) const { return a.get_str(); }
    Elt parse(const std::string& s) const {
        Elt v;
        if (v.set_str(s, 10) != 0) fail("ParseError", "bad rational '" + s + "'");
        v.canonicalize();
        return v;
    }
    std::string describe() const { return "Q"; }
    bool operator==(const RationalField&) const { return true; }
};

/* F_p for a prime p < 2^31; elements are canonical residues 0..p-1. */
class PrimeField {
  public:
    using Elt = std::int64_t;

    PrimeField() : p_(2) {}
    explicit PrimeField(std::int64_t p) : p_(p) {
        if (p < 2 || p >= (std::int64_t(1) << 31) || !is_prime(p))
            fail("BadFieldSpec", "p = " + std::to_string(p) + " is not a prime < 2^31");
    }

    std::int64_t modulus() const { return p_; }

    Elt zero() const { return 0; }
    Elt one() const { return p_ == 1 ? 0 : 1; }
    Elt from_long(long v) const {
        Elt r = v % p_;
        return r < 0 ? r + p_ : r;
    }
    Elt add(Elt a, Elt b) const { Elt r = a + b; return r >= p_ ? r - p_ : r; }
    Elt sub(Elt a, Elt b) const { Elt r = a - b; return r < 0 ? r + p_ : r; }
    Elt mul(Elt a, Elt b) const { return (a * b) % p_; }
    Elt neg(Elt a) const { return a == 0 ? 0 : p_ - a; }
    Elt inv(Elt a) const {
        if (a == 0) fail("DivisionByZero", "1/0 over F_p");
        return pow_mod(a, p_ - 2);
    }
    bool is_zero(Elt a) const { return a == 0; }
    bool eq(Elt a, Elt b) const { return a == b; }

    std::string to_string(Elt a) const { return std::to_string(a); }
    Elt parse(const std::string& s) const {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (...) {
            fail("ParseError", "bad residue '" + s + "'");
        }
        if (pos != s.size()) fail("ParseError", "bad residue '" + s + "'");
        return from_long(v);
    }
    std::string describe() const { return "F_" + std::to_string(p_); }
    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

    Elt pow_mod(Elt base, std::int64_t e) const {
        Elt r = 1;
        base %= p_;
        while (e > 0) {
            if (e & 1) r = (r * base) % p_;
            base = (base * base) % p_;
            e >>= 1;
        }
        return r;
    }

    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

  private:
    std::int64_t p_;
};

/* Runtime descriptor, the form field specs take in project files. */
struct FieldSpec {
    enum class Kind { Rationals, Prime } kind = Kind::Rationals;
    std::int64_t p = 0;

    static FieldSpec rationals() { return FieldSpec{Kind::Rationals, 0}; }
    static FieldSpec prime(std::int64_t p) { return FieldSpec{Kind::Prime, p}; }
    std::string describe() const {
        return kind == Kind::Rationals ? "Q" : "F_" + std::to_string(p);
    }
    bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
};

}  // namespace dgt
