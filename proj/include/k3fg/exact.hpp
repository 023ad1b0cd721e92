#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace k3fg {

// Arbitrary-precision integers and rationals.  GMP supplies the arithmetic;
// mpq_class keeps fractions canonical (reduced, positive denominator), which
// is exactly the BigRational invariant we need.
using BigInt = mpz_class;
using BigRational = mpq_class;

// Canonical fraction (two-argument mpq_class construction does not reduce).
inline BigRational make_frac(long num, long den) {
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

// C(n, k); returns 0 when k > n.
BigInt binomial(unsigned long n, unsigned long k);

BigInt factorial(unsigned long n);

BigInt pow_ui(const BigInt& base, unsigned long exp);

// p^e as a BigInt.
BigInt p_power(unsigned long p, unsigned long e);

// v_p(n) for n != 0; throws std::domain_error on n = 0.
long int_valuation(const BigInt& n, unsigned long p);

// v_p of a nonzero rational (may be negative).
long rational_valuation(const BigRational& x, unsigned long p);

// v_p(n!) by Legendre's formula; no big integers involved.
long factorial_valuation(unsigned long n, unsigned long p);

// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

// Canonical representative of x in [0, m); denominator must be prime to m.
BigInt rational_mod(const BigRational& x, const BigInt& m);

bool is_prime(unsigned long n);

std::vector<unsigned long> primes_below(unsigned long bound);

// Deterministic xorshift generator used wherever an operation calls for
// seeded, reproducible randomness.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

} // namespace k3fg
