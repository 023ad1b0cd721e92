#pragma once

#include "k3fg/exact.hpp"
#include "k3fg/families.hpp"
#include "k3fg/padic.hpp"

#include <string>
#include <vector>

namespace k3fg {

// Exact element of Z[zeta_d], reduced mod the d-th cyclotomic polynomial.
class CyclotomicInt {
public:
    CyclotomicInt() : d_(1) {}
    CyclotomicInt(unsigned long d, std::vector<BigInt> coeffs);

    static CyclotomicInt zero(unsigned long d) { return CyclotomicInt(d, {}); }
    static CyclotomicInt from_int(unsigned long d, const BigInt& n) { return CyclotomicInt(d, {n}); }
    static CyclotomicInt zeta_pow(unsigned long d, long k);

    unsigned long d() const { return d_; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    CyclotomicInt operator+(const CyclotomicInt& o) const;
    CyclotomicInt operator-(const CyclotomicInt& o) const;
    CyclotomicInt operator*(const CyclotomicInt& o) const;
    bool operator==(const CyclotomicInt& o) const;
    bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

    CyclotomicInt conj() const; // zeta -> zeta^{-1}
    bool is_integer() const;
    BigInt integer_value() const;

    // Evaluate at a p-adic root of unity (a Teichmuller representative).
    PadicInt eval(const PadicInt& zeta_value) const;

    std::string to_string() const;

private:
    void reduce();

    unsigned long d_;
    std::vector<BigInt> c_; // degree < phi(d)
};

// Coefficients of the d-th cyclotomic polynomial (monic, ascending).
const std::vector<BigInt>& cyclotomic_poly(unsigned long d);

// Character of F_p^x of order dividing d, fixed by chi(g) = zeta_d^mult for
// the stored generator g.  chi(0) = 0 by convention.
class MultiplicativeCharacter {
public:
    MultiplicativeCharacter(unsigned long p, unsigned long d, long mult = 1);

    unsigned long p() const { return p_; }
    unsigned long d() const { return d_; }
    unsigned long generator() const { return g_; }
    long mult() const { return mult_; }
    unsigned long order() const;
    bool is_trivial() const { return mult_ % static_cast<long>(d_) == 0; }

    MultiplicativeCharacter power(long k) const { return MultiplicativeCharacter(p_, d_, mult_ * k); }

    CyclotomicInt value(unsigned long x) const;

private:
    unsigned long p_, d_, g_;
    long mult_;
    std::vector<unsigned long> dlog_; // dlog_[x] for x in [1, p)
};

// J(chi1, chi2) = sum_{a != 0, 1} chi1(a) chi2(1 - a), exact in Z[zeta_d].
// Requires matching p and d and two nontrivial characters.
CyclotomicInt jacobi_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2);

// All embeddings Z[zeta_d] -> Z_p (zeta goes to each Teichmuller lift of an
// order-d element), as values of z.
std::vector<PadicInt> padic_embeddings(const CyclotomicInt& z, unsigned long p, long precision);

// ---------------------------------------------------------------------------
// Brute-force point counting.
// ---------------------------------------------------------------------------

struct PointCountResult {
    BigInt count;
    std::string convention;
    unsigned long q;
};

// Projective hypersurface count over F_q (q = p or p^2, q^3 enumeration must
// stay under ~10^7): representatives with first nonzero coordinate 1.
PointCountResult point_count_hypersurface(const std::vector<std::vector<int>>& monomials,
                                          const std::vector<long>& coeffs, unsigned long p,
                                          int ext_degree);

// Double cover of P^2 branched along a plane curve: counts 1 + chi(f(x)) per
// base point, chi the quadratic character with chi(0) = 0.
PointCountResult point_count_double_cover(const std::vector<std::vector<int>>& monomials,
                                          const std::vector<long>& coeffs, unsigned long p,
                                          int ext_degree);

// Dispatch on a catalog instance (quartics count the hypersurface in P^3,
// sextics the double cover; jacobi-quartic is unsupported).
PointCountResult point_count(const FamilyInstance& inst, int ext_degree);

} // namespace k3fg
