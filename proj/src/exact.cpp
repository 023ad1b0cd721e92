#include "k3fg/exact.hpp"

#include <stdexcept>

namespace k3fg {

BigInt binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt pow_ui(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

BigInt p_power(unsigned long p, unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

long int_valuation(const BigInt& n, unsigned long p) {
    if (n == 0) throw std::domain_error("int_valuation: v_p(0) is infinite");
    BigInt rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), BigInt(p).get_mpz_t()));
}

long rational_valuation(const BigRational& x, unsigned long p) {
    if (x == 0) throw std::domain_error("rational_valuation: v_p(0) is infinite");
    return int_valuation(x.get_num(), p) - int_valuation(x.get_den(), p);
}

long factorial_valuation(unsigned long n, unsigned long p) {
    long v = 0;
    for (unsigned long q = p; q <= n; ) {
        v += static_cast<long>(n / q);
        if (q > n / p) break; // next power would overflow past n
        q *= p;
    }
    return v;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("mod_inverse: element not invertible");
    return r;
}

BigInt rational_mod(const BigRational& x, const BigInt& m) {
    BigInt num = x.get_num() % m;
    if (num < 0) num += m;
    BigInt den = x.get_den() % m;
    return (num * mod_inverse(den, m)) % m;
}

bool is_prime(unsigned long n) {
    return mpz_probab_prime_p(BigInt(n).get_mpz_t(), 40) != 0;
}

std::vector<unsigned long> primes_below(unsigned long bound) {
    std::vector<unsigned long> out;
    if (bound <= 2) return out;
    std::vector<bool> sieve(bound, true);
    for (unsigned long i = 2; i < bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (unsigned long j = 2 * i; j < bound; j += i) sieve[j] = false;
    }
    return out;
}

} // namespace k3fg
