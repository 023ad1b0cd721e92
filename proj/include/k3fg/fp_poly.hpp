#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace k3fg {

// Dense univariate polynomial over the prime field F_p.  Coefficients are
// canonical representatives in [0, p); the leading coefficient is nonzero
// unless the polynomial is zero.  Degrees stay small here (a few hundred),
// so dense storage is the right shape.
class FpPoly {
public:
    FpPoly() : p_(0) {}
    FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);

    // x^k scaled by c, and small builders.
    static FpPoly zero(std::uint64_t p) { return FpPoly(p, {}); }
    static FpPoly constant(std::uint64_t p, std::uint64_t c) { return FpPoly(p, {c}); }
    static FpPoly monomial(std::uint64_t p, std::uint64_t c, std::size_t k);

    std::uint64_t p() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is -1.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    std::uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    std::uint64_t leading() const;

    bool is_monic() const { return !is_zero() && leading() == 1; }

    FpPoly operator+(const FpPoly& o) const;
    FpPoly operator-(const FpPoly& o) const;
    FpPoly operator*(const FpPoly& o) const;
    bool operator==(const FpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const FpPoly& o) const { return !(*this == o); }

    FpPoly scaled(std::uint64_t c) const;
    FpPoly monic() const; // divide by the leading coefficient

    // Euclidean division; divisor must be nonzero.
    static void divrem(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r);
    FpPoly operator%(const FpPoly& o) const;
    FpPoly operator/(const FpPoly& o) const;

    FpPoly derivative() const;
    std::uint64_t eval(std::uint64_t x) const;

    // base^e mod m (binary exponentiation).
    static FpPoly powmod(const FpPoly& base, unsigned long e, const FpPoly& m);
    // x^(p^d) mod m.
    static FpPoly frobenius_power(const FpPoly& m, unsigned d);

    std::string to_string(const std::string& var = "x") const;

private:
    void normalize();

    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

// Monic gcd; error if both arguments are zero.
FpPoly fp_gcd(const FpPoly& f, const FpPoly& g);

struct FpFactor {
    FpPoly poly;       // monic irreducible
    unsigned multiplicity;
};

struct FpFactorization {
    std::uint64_t unit;              // leading coefficient of the input
    std::vector<FpFactor> factors;   // sorted by (degree, coefficients)
    std::uint64_t seed;              // the seed used for equal-degree splitting
};

// Full factorization over F_p: squarefree decomposition, then distinct-degree,
// then seeded Cantor-Zassenhaus equal-degree splitting.  Requires f != 0 and
// odd p.  The product of factors to their multiplicities times the unit equals
// the input exactly.
FpFactorization fp_factor(const FpPoly& f, std::uint64_t seed = 0x5eed);

// Deterministic irreducibility test (distinct-degree based).
bool fp_is_irreducible(const FpPoly& f);

} // namespace k3fg
