#pragma once

#include "k3fg/exact.hpp"

#include <optional>
#include <string>

namespace k3fg {

// An element of Z_p known to a stated finite absolute precision: the value is
// a canonical representative in [0, p^N).  Arithmetic between operands of
// different precision truncates to the minimum and records it.  Division by
// p^s demands divisibility and costs s digits of precision; it never
// truncates silently.
class PadicInt {
public:
    PadicInt() : p_(0), prec_(0) {}
    PadicInt(unsigned long p, long precision, BigInt value);

    static PadicInt from_rational(const BigRational& x, unsigned long p, long precision);

    unsigned long p() const { return p_; }
    long precision() const { return prec_; }
    const BigInt& value() const { return value_; }
    BigInt modulus() const { return p_power(p_, static_cast<unsigned long>(prec_)); }

    // v_p of the value; nullopt means "at least the precision" (the value is
    // indistinguishable from 0 at this precision).
    std::optional<long> valuation() const;
    bool is_unit() const { return value_ % p_ != 0; }
    unsigned long residue() const { return mpz_fdiv_ui(value_.get_mpz_t(), p_); }

    PadicInt operator+(const PadicInt& o) const;
    PadicInt operator-(const PadicInt& o) const;
    PadicInt operator*(const PadicInt& o) const;
    PadicInt operator-() const;
    bool operator==(const PadicInt& o) const;
    bool operator!=(const PadicInt& o) const { return !(*this == o); }

    PadicInt mul_int(const BigInt& k) const;
    PadicInt pow(unsigned long e) const;
    PadicInt inverse() const; // unit required

    // Exact division by p^s: requires p^s | value, result has precision N - s.
    PadicInt div_exact_p_pow(long s) const;
    // Division by an integer k = unit * p^s; combines the two steps above.
    PadicInt div_exact_int(const BigInt& k) const;

    PadicInt with_precision(long n) const; // truncate (n <= N)

    std::string to_string() const;

private:
    void reduce();

    unsigned long p_;
    long prec_;
    BigInt value_;
};

// Certificate that an element is a p-adic unit: the element together with its
// nonzero residue mod p.
struct PadicUnitCertificate {
    PadicInt element;
    unsigned long witness; // element mod p, nonzero

    static PadicUnitCertificate certify(const PadicInt& x);
};

// Teichmuller lift of c in [0, p): the unique root of unity (or 0) congruent
// to c, computed mod p^N.
PadicInt teichmuller(unsigned long c, unsigned long p, long precision);

// Morita's p-adic gamma function at a p-integral rational, mod p^N.
// Normalization: Gamma_p(n) = (-1)^n * prod_{0<j<n, p !| j} j for integers
// n >= 1, extended by continuity.  p must be odd.
PadicInt padic_gamma(const BigRational& x, unsigned long p, long precision);

} // namespace k3fg
