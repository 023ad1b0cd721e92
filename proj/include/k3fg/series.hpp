#pragma once

#include "k3fg/exact.hpp"
#include "k3fg/errors.hpp"

#include <climits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace k3fg {

// ---------------------------------------------------------------------------
// Coefficient rings.  Series code is generic over a ring R described by
// ring_traits<R>: zero/one cloned from a sample element (rings like Z/p^N
// carry context), exact inversion, and exact division by integers with any
// precision loss recorded by the ring itself.
// ---------------------------------------------------------------------------

template <class R>
struct ring_traits;

template <>
struct ring_traits<BigRational> {
    static BigRational zero(const BigRational&) { return BigRational(0); }
    static BigRational one(const BigRational&) { return BigRational(1); }
    static bool is_zero(const BigRational& x) { return x == 0; }
    static BigRational invert(const BigRational& x) {
        if (x == 0) throw std::domain_error("ring invert: zero");
        return 1 / x;
    }
    static BigRational div_int(const BigRational& x, const BigInt& k) {
        if (k == 0) throw std::domain_error("ring div_int: zero divisor");
        return x / BigRational(k);
    }
    static bool equal(const BigRational& a, const BigRational& b) { return a == b; }
};

// Element of Q_p tracked as an exact rational representative together with an
// absolute precision: the true value is rep + O(p^abs_prec).  Sums take the
// minimum precision; products lose what the factors' valuations allow; exact
// division by an integer k costs v_p(k) digits.  Nothing is ever rounded
// silently.
struct PadicApprox {
    static constexpr long kExact = LONG_MAX / 4;

    unsigned long p = 0;
    BigRational rep;
    long abs_prec = kExact;

    PadicApprox() = default;
    PadicApprox(unsigned long p_, BigRational rep_, long prec_ = kExact)
        : p(p_), rep(std::move(rep_)), abs_prec(prec_) {}

    // Best known lower bound for the valuation.
    long vfloor() const { return rep == 0 ? abs_prec : rational_valuation(rep, p); }

    PadicApprox operator+(const PadicApprox& o) const {
        return PadicApprox(p, rep + o.rep, std::min(abs_prec, o.abs_prec));
    }
    PadicApprox operator-(const PadicApprox& o) const {
        return PadicApprox(p, rep - o.rep, std::min(abs_prec, o.abs_prec));
    }
    PadicApprox operator*(const PadicApprox& o) const {
        long prec = kExact;
        if (abs_prec < kExact || o.abs_prec < kExact) {
            long a = (abs_prec >= kExact) ? kExact : abs_prec + o.vfloor();
            long b = (o.abs_prec >= kExact) ? kExact : o.abs_prec + vfloor();
            prec = std::min(a, b);
        }
        return PadicApprox(p, rep * o.rep, std::min(prec, kExact));
    }
};

template <>
struct ring_traits<PadicApprox> {
    static PadicApprox zero(const PadicApprox& s) { return PadicApprox(s.p, BigRational(0)); }
    static PadicApprox one(const PadicApprox& s) { return PadicApprox(s.p, BigRational(1)); }
    static bool is_zero(const PadicApprox& x) { return x.rep == 0; }
    static PadicApprox invert(const PadicApprox& x) {
        if (x.rep == 0) throw std::domain_error("ring invert: zero");
        long v = rational_valuation(x.rep, x.p);
        long prec = x.abs_prec >= PadicApprox::kExact ? PadicApprox::kExact : x.abs_prec - 2 * v;
        return PadicApprox(x.p, 1 / x.rep, prec);
    }
    static PadicApprox div_int(const PadicApprox& x, const BigInt& k) {
        if (k == 0) throw std::domain_error("ring div_int: zero divisor");
        long v = int_valuation(k, x.p);
        long prec = x.abs_prec >= PadicApprox::kExact ? PadicApprox::kExact : x.abs_prec - v;
        return PadicApprox(x.p, x.rep / BigRational(k), prec);
    }
    static bool equal(const PadicApprox& a, const PadicApprox& b) {
        // Agreement at the shared precision.
        long prec = std::min(a.abs_prec, b.abs_prec);
        if (prec >= PadicApprox::kExact) return a.rep == b.rep;
        BigRational d = a.rep - b.rep;
        return d == 0 || rational_valuation(d, a.p) >= prec;
    }
};

// Z/m with a shared modulus; used where exact arithmetic mod p^N is cheaper
// than rationals (group-axiom checks at degree 20).
struct ZmodElt {
    BigInt v;
    std::shared_ptr<const BigInt> m;

    ZmodElt() = default;
    ZmodElt(BigInt value, std::shared_ptr<const BigInt> mod) : v(std::move(value)), m(std::move(mod)) {
        reduce();
    }
    void reduce() {
        v %= *m;
        if (v < 0) v += *m;
    }
    ZmodElt operator+(const ZmodElt& o) const { return ZmodElt(v + o.v, m); }
    ZmodElt operator-(const ZmodElt& o) const { return ZmodElt(v - o.v, m); }
    ZmodElt operator*(const ZmodElt& o) const { return ZmodElt(v * o.v, m); }
};

template <>
struct ring_traits<ZmodElt> {
    static ZmodElt zero(const ZmodElt& s) { return ZmodElt(BigInt(0), s.m); }
    static ZmodElt one(const ZmodElt& s) { return ZmodElt(BigInt(1), s.m); }
    static bool is_zero(const ZmodElt& x) { return x.v == 0; }
    static ZmodElt invert(const ZmodElt& x) { return ZmodElt(mod_inverse(x.v, *x.m), x.m); }
    static ZmodElt div_int(const ZmodElt& x, const BigInt& k) {
        return ZmodElt(x.v * mod_inverse(k % *x.m, *x.m), x.m);
    }
    static bool equal(const ZmodElt& a, const ZmodElt& b) { return (a.v - b.v) % *a.m == 0; }
};

// ---------------------------------------------------------------------------
// Truncated univariate series: coefficients for exponents 0..cutoff are
// known; anything beyond the cutoff is unknown, not zero.
// ---------------------------------------------------------------------------

template <class R>
struct TruncatedSeries {
    int cutoff = 0;
    std::vector<R> c; // size cutoff + 1

    TruncatedSeries() = default;
    TruncatedSeries(int d, const R& zero) : cutoff(d), c(static_cast<std::size_t>(d) + 1, zero) {}

    const R& coeff(int i) const { return c[static_cast<std::size_t>(i)]; }
    R& coeff(int i) { return c[static_cast<std::size_t>(i)]; }

    static TruncatedSeries identity(int d, const R& sample) {
        TruncatedSeries s(d, ring_traits<R>::zero(sample));
        if (d >= 1) s.coeff(1) = ring_traits<R>::one(sample);
        return s;
    }
};

template <class R>
TruncatedSeries<R> series_add(const TruncatedSeries<R>& a, const TruncatedSeries<R>& b) {
    int d = std::min(a.cutoff, b.cutoff);
    TruncatedSeries<R> r(d, ring_traits<R>::zero(a.c[0]));
    for (int i = 0; i <= d; ++i) r.coeff(i) = a.coeff(i) + b.coeff(i);
    return r;
}

template <class R>
TruncatedSeries<R> series_mul(const TruncatedSeries<R>& a, const TruncatedSeries<R>& b) {
    int d = std::min(a.cutoff, b.cutoff);
    TruncatedSeries<R> r(d, ring_traits<R>::zero(a.c[0]));
    for (int i = 0; i <= d; ++i) {
        if (ring_traits<R>::is_zero(a.coeff(i))) continue;
        for (int j = 0; i + j <= d; ++j) r.coeff(i + j) = r.coeff(i + j) + a.coeff(i) * b.coeff(j);
    }
    return r;
}

// Composition outer(inner); inner must have zero constant term.
template <class R>
TruncatedSeries<R> compose(const TruncatedSeries<R>& outer, const TruncatedSeries<R>& inner) {
    if (!ring_traits<R>::is_zero(inner.coeff(0)))
        throw std::domain_error("compose: inner series has a nonzero constant term");
    int d = std::min(outer.cutoff, inner.cutoff);
    R zero = ring_traits<R>::zero(inner.c[0]);
    TruncatedSeries<R> acc(d, zero);
    for (int k = outer.cutoff; k >= 0; --k) {
        // acc = acc * inner + outer_k
        acc = series_mul(acc, inner);
        acc.coeff(0) = acc.coeff(0) + outer.coeff(k);
    }
    return acc;
}

// Compositional inverse: returns g with g(l(t)) = t mod degree cutoff+1.
// Requires l(0) = 0 and l'(0) a unit.  The triangular solve uses no division
// beyond inverting the linear coefficient.
template <class R>
TruncatedSeries<R> reversion(const TruncatedSeries<R>& l) {
    if (l.cutoff < 1) throw std::domain_error("reversion: cutoff must be >= 1");
    if (!ring_traits<R>::is_zero(l.coeff(0)))
        throw std::domain_error("reversion: series has a nonzero constant term");
    R zero = ring_traits<R>::zero(l.c[0]);
    R one = ring_traits<R>::one(l.c[0]);
    R u = l.coeff(1);
    R u_inv = ring_traits<R>::invert(u); // throws if the leading coefficient is not a unit

    // Normalize to c1 = 1: m(t) = l(t)/u; then l^{-1}(y) = m^{-1}(y/u), i.e.
    // coefficient k of l^{-1} is d_k * u^{-k}.
    int d = l.cutoff;
    TruncatedSeries<R> m(d, zero);
    for (int i = 1; i <= d; ++i) m.coeff(i) = l.coeff(i) * u_inv;

    std::vector<R> dcoef(static_cast<std::size_t>(d) + 1, zero);
    dcoef[1] = one;
    TruncatedSeries<R> lpow = m;                       // m^k
    TruncatedSeries<R> partial = m;                    // sum_{j<k} d_j m^j
    for (int k = 2; k <= d; ++k) {
        lpow = series_mul(lpow, m);
        dcoef[static_cast<std::size_t>(k)] = zero - partial.coeff(k);
        if (k < d) {
            for (int i = 0; i <= d; ++i)
                partial.coeff(i) = partial.coeff(i) + dcoef[static_cast<std::size_t>(k)] * lpow.coeff(i);
        }
    }

    TruncatedSeries<R> inv(d, zero);
    R upow = one;
    for (int k = 1; k <= d; ++k) {
        upow = upow * u_inv;
        inv.coeff(k) = dcoef[static_cast<std::size_t>(k)] * upow;
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Truncated bivariate series, dense triangular storage: g_{ij} for i+j <= D.
// ---------------------------------------------------------------------------

template <class R>
struct BivariateTruncatedSeries {
    int cutoff = 0;
    std::vector<R> c; // row-major by i, inner j: positions (i, j), i+j <= cutoff

    BivariateTruncatedSeries() = default;
    BivariateTruncatedSeries(int d, const R& zero)
        : cutoff(d), c(static_cast<std::size_t>((d + 1) * (d + 2) / 2), zero) {}

    static std::size_t index_for(int cutoff, int i, int j) {
        // offset of row i = sum_{r<i} (cutoff+1-r)
        std::size_t off = static_cast<std::size_t>(i) * (cutoff + 1) - static_cast<std::size_t>(i) * (i - 1) / 2;
        return off + static_cast<std::size_t>(j);
    }
    const R& coeff(int i, int j) const { return c[index_for(cutoff, i, j)]; }
    R& coeff(int i, int j) { return c[index_for(cutoff, i, j)]; }
};

template <class R>
BivariateTruncatedSeries<R> bivar_add(const BivariateTruncatedSeries<R>& a, const BivariateTruncatedSeries<R>& b) {
    int d = std::min(a.cutoff, b.cutoff);
    BivariateTruncatedSeries<R> r(d, ring_traits<R>::zero(a.c[0]));
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j) r.coeff(i, j) = a.coeff(i, j) + b.coeff(i, j);
    return r;
}

template <class R>
BivariateTruncatedSeries<R> bivar_mul(const BivariateTruncatedSeries<R>& a, const BivariateTruncatedSeries<R>& b) {
    int d = std::min(a.cutoff, b.cutoff);
    BivariateTruncatedSeries<R> r(d, ring_traits<R>::zero(a.c[0]));
    for (int i1 = 0; i1 <= d; ++i1)
        for (int j1 = 0; i1 + j1 <= d; ++j1) {
            if (ring_traits<R>::is_zero(a.coeff(i1, j1))) continue;
            for (int i2 = 0; i1 + j1 + i2 <= d; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= d; ++j2)
                    r.coeff(i1 + i2, j1 + j2) = r.coeff(i1 + i2, j1 + j2) + a.coeff(i1, j1) * b.coeff(i2, j2);
        }
    return r;
}

// outer(inner) where inner is bivariate with zero constant term.
template <class R>
BivariateTruncatedSeries<R> compose_bivariate(const TruncatedSeries<R>& outer,
                                              const BivariateTruncatedSeries<R>& inner) {
    if (!ring_traits<R>::is_zero(inner.coeff(0, 0)))
        throw std::domain_error("compose: inner series has a nonzero constant term");
    int d = std::min(outer.cutoff, inner.cutoff);
    R zero = ring_traits<R>::zero(inner.c[0]);
    BivariateTruncatedSeries<R> acc(d, zero);
    for (int k = outer.cutoff; k >= 0; --k) {
        acc = bivar_mul(acc, inner);
        acc.coeff(0, 0) = acc.coeff(0, 0) + outer.coeff(k);
    }
    return acc;
}

// Embeds l(tau_1) + l(tau_2) as a bivariate series.
template <class R>
BivariateTruncatedSeries<R> bivar_sum_of_logs(const TruncatedSeries<R>& l, int d) {
    R zero = ring_traits<R>::zero(l.c[0]);
    BivariateTruncatedSeries<R> w(d, zero);
    for (int i = 1; i <= std::min(d, l.cutoff); ++i) {
        w.coeff(i, 0) = w.coeff(i, 0) + l.coeff(i);
        w.coeff(0, i) = w.coeff(0, i) + l.coeff(i);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Minimal trivariate support for associativity checks of a group law.
// ---------------------------------------------------------------------------

template <class R>
struct TrivariateTruncatedSeries {
    int cutoff = 0;
    std::vector<R> c;

    TrivariateTruncatedSeries() = default;
    TrivariateTruncatedSeries(int d, const R& zero)
        : cutoff(d), c(static_cast<std::size_t>((d + 1) * (d + 2) * (d + 3) / 6), zero) {}

    std::size_t index(int i, int j, int k) const {
        // lexicographic over (i, j) triangular layers
        std::size_t off = 0;
        // number of monomials with first exponent < i: sum over a<i of T(cutoff-a) triangle counts
        for (int a = 0; a < i; ++a) off += static_cast<std::size_t>((cutoff - a + 1)) * (cutoff - a + 2) / 2;
        int rem = cutoff - i;
        off += static_cast<std::size_t>(j) * (rem + 1) - static_cast<std::size_t>(j) * (j - 1) / 2;
        return off + static_cast<std::size_t>(k);
    }
    const R& coeff(int i, int j, int k) const { return c[index(i, j, k)]; }
    R& coeff(int i, int j, int k) { return c[index(i, j, k)]; }
};

template <class R>
TrivariateTruncatedSeries<R> trivar_mul(const TrivariateTruncatedSeries<R>& a,
                                        const TrivariateTruncatedSeries<R>& b) {
    int d = std::min(a.cutoff, b.cutoff);
    TrivariateTruncatedSeries<R> r(d, ring_traits<R>::zero(a.c[0]));
    for (int i1 = 0; i1 <= d; ++i1)
        for (int j1 = 0; i1 + j1 <= d; ++j1)
            for (int k1 = 0; i1 + j1 + k1 <= d; ++k1) {
                const R& x = a.coeff(i1, j1, k1);
                if (ring_traits<R>::is_zero(x)) continue;
                for (int i2 = 0; i1 + j1 + k1 + i2 <= d; ++i2)
                    for (int j2 = 0; i1 + j1 + k1 + i2 + j2 <= d; ++j2)
                        for (int k2 = 0; i1 + j1 + k1 + i2 + j2 + k2 <= d; ++k2)
                            r.coeff(i1 + i2, j1 + j2, k1 + k2) =
                                r.coeff(i1 + i2, j1 + j2, k1 + k2) + x * b.coeff(i2, j2, k2);
            }
    return r;
}

// Evaluate a bivariate series at trivariate arguments (both with zero
// constant term).
template <class R>
TrivariateTruncatedSeries<R> bivar_eval_trivar(const BivariateTruncatedSeries<R>& g,
                                               const TrivariateTruncatedSeries<R>& a,
                                               const TrivariateTruncatedSeries<R>& b) {
    int d = std::min({g.cutoff, a.cutoff, b.cutoff});
    R zero = ring_traits<R>::zero(a.c[0]);
    R one = ring_traits<R>::one(a.c[0]);
    // b powers up front, then Horner in a over rows of g.
    std::vector<TrivariateTruncatedSeries<R>> bpow;
    bpow.reserve(static_cast<std::size_t>(d) + 1);
    TrivariateTruncatedSeries<R> unit(d, zero);
    unit.coeff(0, 0, 0) = one;
    bpow.push_back(unit);
    for (int j = 1; j <= d; ++j) bpow.push_back(trivar_mul(bpow.back(), b));

    TrivariateTruncatedSeries<R> acc(d, zero);
    for (int i = g.cutoff; i >= 0; --i) {
        acc = trivar_mul(acc, a);
        for (int j = 0; i + j <= g.cutoff && j <= d; ++j) {
            const R& coef = g.coeff(i, j);
            if (ring_traits<R>::is_zero(coef)) continue;
            const TrivariateTruncatedSeries<R>& bp = bpow[static_cast<std::size_t>(j)];
            for (std::size_t t = 0; t < acc.c.size(); ++t) acc.c[t] = acc.c[t] + coef * bp.c[t];
        }
    }
    return acc;
}

} // namespace k3fg
