#pragma once

#include "k3fg/exact.hpp"
#include "k3fg/padic.hpp"

#include <string>
#include <utility>
#include <vector>

namespace k3fg {

// Reciprocal characteristic polynomial data: integer coefficients with
// constant term 1, over the context q = p^a.
struct WeilPoly {
    std::vector<BigInt> coeffs; // c_0 = 1
    unsigned long p = 0;
    int a = 1;

    WeilPoly() = default;
    WeilPoly(std::vector<BigInt> c, unsigned long p_, int a_ = 1);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    BigInt q() const { return p_power(p, static_cast<unsigned long>(a)); }
};

struct NewtonPolygonData {
    std::vector<std::pair<long, long>> vertices;          // (i, v_p(c_i)) on the lower hull
    std::vector<std::pair<BigRational, int>> slopes;      // nondecreasing, with multiplicities
};

// Lower convex hull of {(i, v_p(c_i))}.  The constant term must be a p-adic
// unit; the zero polynomial is a domain error.
NewtonPolygonData newton_polygon(const std::vector<BigInt>& coeffs, unsigned long p);

// One factor per polygon segment, constant term 1, coefficients mod p^N.
struct SlopeSegmentFactor {
    BigRational slope;              // in v_p units
    std::vector<PadicInt> coeffs;
};

// Full slope decomposition: every polygon segment split off by Hensel lifting
// over the Eisenstein extension Z_p[pi], pi^v = p, matching the segment's
// slope denominator.  Product of all factors is congruent to the input mod
// p^N (verified before returning).
std::vector<SlopeSegmentFactor> slope_split(const WeilPoly& f, long precision);

// The three-way grouping of the segments by the H^2-weight normalization:
// slopes < a, = a, > a of the raw hull (i.e. < 1, = 1, > 1 once divided by
// v_p(q)).
struct SlopeFactorization {
    std::vector<PadicInt> p_lt; // slopes < 1
    std::vector<PadicInt> p_1;  // slope exactly 1
    std::vector<PadicInt> p_gt; // slopes > 1
    int h = 0;                  // degree of p_lt
    long precision = 0;
    unsigned long p = 0;
    int a = 1;
    std::vector<SlopeSegmentFactor> segments; // the underlying per-segment split
};

SlopeFactorization slope_factorize(const WeilPoly& f, long precision);

struct FunctionalEquationResult {
    bool holds;
    PadicInt c; // the constant making P_gt(T) = c T^h P_lt(1/(q^2 T))
};

// Solves for the constant c in the mirror identity between the slope-<1 and
// slope->1 parts and verifies it coefficientwise mod p^N.  Degrees of the two
// parts must agree.
FunctionalEquationResult functional_equation_check(const SlopeFactorization& sf);

struct PowerStructure {
    std::vector<BigInt> q;   // Q with Q^r = R exactly
    unsigned r = 1;
    std::string verdict;     // "certified" or "probable"
    // (auxiliary prime, factor degree pattern of Q mod that prime)
    std::vector<std::pair<unsigned long, std::vector<long>>> evidence;
};

// Maximal r with R = Q^r as exact integer polynomials (formal r-th root per
// divisor of the degree, largest first), plus a mod-prime irreducibility
// verdict for Q.
PowerStructure power_structure(const std::vector<BigInt>& r_coeffs);

// { r : r | h, r | tau, tau/r even }; tau even, 1 <= h <= tau/2.
std::vector<unsigned> possible_r(unsigned tau, unsigned h);

} // namespace k3fg
