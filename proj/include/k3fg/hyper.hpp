#pragma once

#include "k3fg/exact.hpp"

#include <vector>

namespace k3fg {

// Rising factorial (a)_r = a(a+1)...(a+r-1), with (a)_0 = 1.
BigRational pochhammer(const BigRational& a, unsigned long r);

// Parameters of a hypergeometric series mFn: upper {a_i}, lower {b_j}.
// Lower parameters must not be nonpositive integers.
struct HGParams {
    std::vector<BigRational> upper;
    std::vector<BigRational> lower;

    HGParams(std::vector<BigRational> up, std::vector<BigRational> low);

    // Smallest r bound forced by a nonpositive-integer upper parameter, or -1
    // if the series does not terminate.
    long termination_index() const;
};

// Exact value of a terminating pFq at x: sum_r prod(a_i)_r / prod(b_j)_r *
// x^r / r!.  Throws std::domain_error when no upper parameter is a
// nonpositive integer (this operation never truncates silently).
BigRational pfq_terminating(const HGParams& params, const BigRational& x);

// First `count` Taylor coefficients of pFq (coefficient of x^r), exact.
std::vector<BigRational> pfq_coefficients(const HGParams& params, unsigned long count);

// The multi-index [n]^m: every i/n with gcd(i, n) = 1, each repeated m times.
struct FareyIndex {
    unsigned long n;
    unsigned long repeat;
};

// Sorted expansion of a FareyIndex; size is repeat * phi(n).
std::vector<BigRational> farey_expand(const FareyIndex& idx);

// Concatenated expansion of several indices (a full lower-parameter list).
std::vector<BigRational> farey_expand_all(const std::vector<FareyIndex>& idxs);

} // namespace k3fg
