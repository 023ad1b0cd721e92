#pragma once

#include "k3fg/exact.hpp"
#include "k3fg/errors.hpp"

#include <stdexcept>

namespace k3fg::detail {

// Capped-relative p-adic value used inside coefficient kernels: p^e * w with
// the exact valuation e >= 0 tracked separately and the unit part w kept mod
// p^K.  Products and exact divisions preserve K relative digits, so any sum
// of such terms is good mod p^K absolutely.
struct RelCtx {
    unsigned long p;
    long K;
    BigInt pK;

    RelCtx(unsigned long p_, long k) : p(p_), K(k), pK(p_power(p_, static_cast<unsigned long>(k))) {}
};

struct RelVal {
    bool zero = true;
    long e = 0;
    BigInt w; // unit in [0, p^K)

    static RelVal make_zero() { return RelVal{}; }

    static RelVal from_int(const RelCtx& ctx, const BigInt& n) {
        if (n == 0) return make_zero();
        RelVal r;
        r.zero = false;
        BigInt rest;
        r.e = static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), BigInt(ctx.p).get_mpz_t()));
        r.w = rest % ctx.pK;
        if (r.w < 0) r.w += ctx.pK;
        return r;
    }

    RelVal mul(const RelCtx& ctx, const RelVal& o) const {
        if (zero || o.zero) return make_zero();
        RelVal r;
        r.zero = false;
        r.e = e + o.e;
        r.w = (w * o.w) % ctx.pK;
        return r;
    }

    RelVal mul_int(const RelCtx& ctx, const BigInt& n) const { return mul(ctx, from_int(ctx, n)); }

    RelVal div(const RelCtx& ctx, const RelVal& o) const {
        if (o.zero) throw std::domain_error("RelVal: division by zero");
        if (zero) return make_zero();
        RelVal r;
        r.zero = false;
        r.e = e - o.e;
        r.w = (w * mod_inverse(o.w, ctx.pK)) % ctx.pK;
        return r;
    }

    RelVal div_int(const RelCtx& ctx, const BigInt& n) const { return div(ctx, from_int(ctx, n)); }

    RelVal pow(const RelCtx& ctx, unsigned long k) const {
        if (zero) return k == 0 ? from_int(ctx, BigInt(1)) : make_zero();
        RelVal r;
        r.zero = false;
        r.e = e * static_cast<long>(k);
        mpz_powm_ui(r.w.get_mpz_t(), w.get_mpz_t(), k, ctx.pK.get_mpz_t());
        return r;
    }

    // Canonical representative mod p^A for A <= e + K; the tracked valuation
    // must be nonnegative (values here are p-integral by construction).
    BigInt to_mod(const RelCtx& ctx, long A) const {
        if (zero) return BigInt(0);
        if (e < 0)
            throw integrality_error("RelVal: negative valuation where an integral value was expected");
        if (e >= A) return BigInt(0);
        if (e + ctx.K < A)
            throw insufficient_precision("RelVal: not enough relative digits", A - e);
        BigInt m = p_power(ctx.p, static_cast<unsigned long>(A));
        BigInt v = (p_power(ctx.p, static_cast<unsigned long>(e)) * w) % m;
        return v;
    }
};

} // namespace k3fg::detail
