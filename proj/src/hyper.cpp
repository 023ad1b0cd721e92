#include "k3fg/hyper.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace k3fg {

BigRational pochhammer(const BigRational& a, unsigned long r) {
    BigRational acc(1);
    BigRational t = a;
    for (unsigned long i = 0; i < r; ++i) {
        acc *= t;
        t += 1;
    }
    return acc;
}

namespace {

bool is_nonpositive_integer(const BigRational& a) {
    return a.get_den() == 1 && a.get_num() <= 0;
}

} // namespace

HGParams::HGParams(std::vector<BigRational> up, std::vector<BigRational> low)
    : upper(std::move(up)), lower(std::move(low)) {
    for (const auto& b : lower)
        if (is_nonpositive_integer(b))
            throw std::domain_error("HGParams: lower parameter is a nonpositive integer");
}

long HGParams::termination_index() const {
    long best = -1;
    for (const auto& a : upper) {
        if (!is_nonpositive_integer(a)) continue;
        long n = static_cast<long>(-mpz_get_si(a.get_num().get_mpz_t()));
        if (best < 0 || n < best) best = n;
    }
    return best;
}

BigRational pfq_terminating(const HGParams& params, const BigRational& x) {
    long rmax = params.termination_index();
    if (rmax < 0)
        throw std::domain_error("pfq_terminating: no nonpositive-integer upper parameter");
    BigRational sum(0);
    BigRational term(1); // full term at r, including x^r / r!
    for (long r = 0; r <= rmax; ++r) {
        sum += term;
        if (r == rmax) break;
        // term_{r+1} / term_r
        BigRational ratio(1);
        for (const auto& a : params.upper) ratio *= a + r;
        for (const auto& b : params.lower) ratio /= b + r;
        ratio *= x;
        ratio /= r + 1;
        term *= ratio;
    }
    return sum;
}

std::vector<BigRational> pfq_coefficients(const HGParams& params, unsigned long count) {
    std::vector<BigRational> out;
    out.reserve(count);
    BigRational coef(1);
    for (unsigned long r = 0; r < count; ++r) {
        out.push_back(coef);
        BigRational ratio(1);
        for (const auto& a : params.upper) ratio *= a + static_cast<long>(r);
        for (const auto& b : params.lower) ratio /= b + static_cast<long>(r);
        ratio /= static_cast<long>(r) + 1;
        coef *= ratio;
    }
    return out;
}

std::vector<BigRational> farey_expand(const FareyIndex& idx) {
    if (idx.n == 0 || idx.repeat == 0)
        throw std::domain_error("farey_expand: n and repeat must be positive");
    std::vector<BigRational> base;
    for (unsigned long i = 1; i <= idx.n; ++i)
        if (std::gcd(i, idx.n) == 1) base.emplace_back(BigRational(i) / BigRational(idx.n));
    std::vector<BigRational> out;
    out.reserve(base.size() * idx.repeat);
    for (const auto& q : base)
        for (unsigned long r = 0; r < idx.repeat; ++r) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BigRational> farey_expand_all(const std::vector<FareyIndex>& idxs) {
    std::vector<BigRational> out;
    for (const auto& idx : idxs) {
        auto part = farey_expand(idx);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace k3fg
