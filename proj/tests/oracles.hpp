#pragma once

// Test-only oracles, deliberately independent of the implementation paths
// they check.

#include "k3fg/exact.hpp"
#include "k3fg/hyper.hpp"
#include "k3fg/series.hpp"

#include <vector>

namespace k3fg::testing {

// Compositional inverse by Lagrange inversion: [u^k] l^{-1} =
// (1/k) [tau^{k-1}] (tau / l(tau))^k.  Requires l = tau + ...
inline TruncatedSeries<BigRational> lagrange_inversion(const TruncatedSeries<BigRational>& l) {
    int d = l.cutoff;
    BigRational zero(0);
    // w = tau / l(tau) = 1 / (1 + c2 tau + ...) as a series of degree < d
    TruncatedSeries<BigRational> denom(d, zero);
    for (int i = 0; i + 1 <= d; ++i) denom.coeff(i) = l.coeff(i + 1);
    TruncatedSeries<BigRational> w(d, zero);
    w.coeff(0) = 1;
    // invert the unit series by the triangular recurrence
    for (int k = 1; k <= d; ++k) {
        BigRational s(0);
        for (int i = 1; i <= k; ++i) s += denom.coeff(i) * w.coeff(k - i);
        w.coeff(k) = -s;
    }
    TruncatedSeries<BigRational> out(d, zero);
    TruncatedSeries<BigRational> wpow = w;
    for (int k = 1; k <= d; ++k) {
        if (k > 1) wpow = series_mul(wpow, w);
        out.coeff(k) = wpow.coeff(k - 1) / BigRational(k);
    }
    return out;
}

// Direct term-by-term hypergeometric summation with Pochhammer products (no
// ratio recurrences).
inline BigRational pfq_direct_sum(const HGParams& params, const BigRational& x, long rmax) {
    BigRational sum(0);
    for (long r = 0; r <= rmax; ++r) {
        BigRational term(1);
        for (const auto& a : params.upper) term *= pochhammer(a, static_cast<unsigned long>(r));
        for (const auto& b : params.lower) term /= pochhammer(b, static_cast<unsigned long>(r));
        BigRational xp(1);
        for (long t = 0; t < r; ++t) xp *= x;
        term *= xp;
        term /= BigRational(factorial(static_cast<unsigned long>(r)));
        sum += term;
    }
    return sum;
}

// Morita gamma at a positive integer straight from the defining product,
// without batching or representative tricks.
inline BigInt gamma_product_oracle(unsigned long n, unsigned long p, const BigInt& modulus) {
    BigInt acc(1);
    for (unsigned long j = 1; j < n; ++j) {
        if (j % p == 0) continue;
        acc = (acc * j) % modulus;
    }
    if (n % 2 == 1) acc = -acc;
    acc %= modulus;
    if (acc < 0) acc += modulus;
    return acc;
}

} // namespace k3fg::testing
