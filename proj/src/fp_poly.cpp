#include "k3fg/fp_poly.hpp"

#include "k3fg/exact.hpp"
#include "k3fg/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace k3fg {

namespace {

inline std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}

inline std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t invm(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on machine words
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(p), nr = static_cast<long long>(a % p);
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("invm: not invertible");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<long long>(p) : t);
}

} // namespace

FpPoly::FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    if (p < 2) throw std::domain_error("FpPoly: modulus must be a prime >= 2");
    for (auto& x : c_) x %= p_;
    normalize();
}

FpPoly FpPoly::monomial(std::uint64_t p, std::uint64_t c, std::size_t k) {
    std::vector<std::uint64_t> v(k + 1, 0);
    v[k] = c;
    return FpPoly(p, std::move(v));
}

void FpPoly::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint64_t FpPoly::leading() const {
    if (is_zero()) throw std::domain_error("leading(): zero polynomial");
    return c_.back();
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
    if (p_ != o.p_) throw std::domain_error("FpPoly: mixed moduli");
    std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = addm(coeff(i), o.coeff(i), p_);
    return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator-(const FpPoly& o) const {
    if (p_ != o.p_) throw std::domain_error("FpPoly: mixed moduli");
    std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = subm(coeff(i), o.coeff(i), p_);
    return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
    if (p_ != o.p_) throw std::domain_error("FpPoly: mixed moduli");
    if (is_zero() || o.is_zero()) return zero(p_);
    std::vector<std::uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = addm(r[i + j], mulm(c_[i], o.c_[j], p_), p_);
    }
    return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::scaled(std::uint64_t c) const {
    std::vector<std::uint64_t> r(c_);
    for (auto& x : r) x = mulm(x, c % p_, p_);
    return FpPoly(p_, std::move(r));
}

FpPoly FpPoly::monic() const {
    if (is_zero()) throw std::domain_error("monic(): zero polynomial");
    return scaled(invm(leading(), p_));
}

void FpPoly::divrem(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) {
    if (b.is_zero()) throw std::domain_error("FpPoly::divrem: division by zero");
    if (a.p_ != b.p_) throw std::domain_error("FpPoly: mixed moduli");
    std::uint64_t p = a.p_;
    std::vector<std::uint64_t> rem(a.c_);
    long db = b.degree();
    std::uint64_t lead_inv = invm(b.leading(), p);
    std::vector<std::uint64_t> quo;
    long da = static_cast<long>(rem.size()) - 1;
    if (da >= db) quo.assign(da - db + 1, 0);
    while (static_cast<long>(rem.size()) - 1 >= db && !rem.empty()) {
        while (!rem.empty() && rem.back() == 0) rem.pop_back();
        long dr = static_cast<long>(rem.size()) - 1;
        if (dr < db || rem.empty()) break;
        std::uint64_t factor = mulm(rem.back(), lead_inv, p);
        quo[dr - db] = factor;
        for (long i = 0; i <= db; ++i)
            rem[dr - db + i] = subm(rem[dr - db + i], mulm(factor, b.c_[i], p), p);
    }
    q = FpPoly(p, std::move(quo));
    r = FpPoly(p, std::move(rem));
}

FpPoly FpPoly::operator%(const FpPoly& o) const {
    FpPoly q, r;
    divrem(*this, o, q, r);
    return r;
}

FpPoly FpPoly::operator/(const FpPoly& o) const {
    FpPoly q, r;
    divrem(*this, o, q, r);
    return q;
}

FpPoly FpPoly::derivative() const {
    if (c_.size() <= 1) return zero(p_);
    std::vector<std::uint64_t> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = mulm(c_[i], i % p_, p_);
    return FpPoly(p_, std::move(r));
}

std::uint64_t FpPoly::eval(std::uint64_t x) const {
    std::uint64_t acc = 0;
    x %= p_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = addm(mulm(acc, x, p_), c_[i], p_);
    return acc;
}

FpPoly FpPoly::powmod(const FpPoly& base, unsigned long e, const FpPoly& m) {
    FpPoly acc = constant(base.p(), 1);
    FpPoly b = base % m;
    while (e > 0) {
        if (e & 1ul) acc = (acc * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return acc;
}

FpPoly FpPoly::frobenius_power(const FpPoly& m, unsigned d) {
    FpPoly x = monomial(m.p(), 1, 1) % m;
    FpPoly acc = x;
    for (unsigned i = 0; i < d; ++i) acc = powmod(acc, m.p(), m);
    return acc;
}

std::string FpPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) {
            if (c_[i] != 1) os << "*";
            os << var;
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

FpPoly fp_gcd(const FpPoly& f, const FpPoly& g) {
    if (f.is_zero() && g.is_zero())
        throw std::domain_error("fp_gcd: gcd(0, 0) undefined");
    FpPoly a = f, b = g;
    while (!b.is_zero()) {
        FpPoly r = a % b;
        a = b;
        b = r;
    }
    return a.monic();
}

namespace {

// f must be monic with f' = 0, i.e. f(x) = g(x^p); over F_p this makes f a
// p-th power of the polynomial with the same coefficients contracted.
FpPoly pth_root(const FpPoly& f) {
    std::uint64_t p = f.p();
    std::vector<std::uint64_t> r;
    for (std::size_t i = 0; i * p <= static_cast<std::size_t>(f.degree()); ++i)
        r.push_back(f.coeff(i * p));
    return FpPoly(p, std::move(r));
}

// Squarefree decomposition (Yun over F_p with p-th power handling).
// Returns pairs (g_i, i) with f = prod g_i^i, g_i squarefree and coprime.
void squarefree_decompose(const FpPoly& f, unsigned mult, std::vector<std::pair<FpPoly, unsigned>>& out) {
    std::uint64_t p = f.p();
    if (f.degree() == 0) return;
    FpPoly d = f.derivative();
    if (d.is_zero()) {
        squarefree_decompose(pth_root(f), mult * static_cast<unsigned>(p), out);
        return;
    }
    FpPoly c = fp_gcd(f, d);
    FpPoly w = f / c;
    unsigned i = 1;
    while (w.degree() > 0) {
        FpPoly y = fp_gcd(w, c);
        FpPoly piece = w / y;
        if (piece.degree() > 0) out.emplace_back(piece.monic(), i * mult);
        w = y;
        c = c / y;
        ++i;
    }
    // what is left of c is a p-th power; the derivative-zero branch of the
    // recursion supplies the factor of p in the multiplicity
    if (c.degree() > 0) squarefree_decompose(c, mult, out);
}

// Distinct-degree: split monic squarefree f into products of irreducibles of
// equal degree d.
std::vector<std::pair<FpPoly, unsigned>> distinct_degree(const FpPoly& f) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    FpPoly rest = f;
    FpPoly x = FpPoly::monomial(f.p(), 1, 1);
    FpPoly h = x % rest; // x^(p^d) mod rest, updated as d grows
    unsigned d = 0;
    while (rest.degree() > 0) {
        ++d;
        if (2 * d > static_cast<unsigned>(rest.degree())) {
            out.emplace_back(rest, static_cast<unsigned>(rest.degree()));
            break;
        }
        h = FpPoly::powmod(h, f.p(), rest);
        FpPoly g = fp_gcd(h - (x % rest), rest);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            rest = rest / g;
            h = h % rest;
        }
    }
    return out;
}

// Cantor-Zassenhaus equal-degree splitting for odd p; f monic squarefree,
// all factors of degree d.
void equal_degree(const FpPoly& f, unsigned d, SplitMix64& rng, std::vector<FpPoly>& out) {
    if (f.degree() == static_cast<long>(d)) {
        out.push_back(f);
        return;
    }
    std::uint64_t p = f.p();
    if (p == 2) throw unsupported_operation("fp_factor: equal-degree splitting requires odd p");
    // exponent (p^d - 1)/2 as a big integer walked by repeated squaring
    BigInt e = (p_power(p, d) - 1) / 2;
    for (;;) {
        std::vector<std::uint64_t> rc(static_cast<std::size_t>(f.degree()), 0);
        for (auto& x : rc) x = rng.below(p);
        FpPoly r(p, std::move(rc));
        if (r.is_zero()) continue;
        // r^e mod f via mpz bits
        FpPoly acc = FpPoly::constant(p, 1);
        FpPoly base = r % f;
        for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
            acc = (acc * acc) % f;
            if (mpz_tstbit(e.get_mpz_t(), bit)) acc = (acc * base) % f;
        }
        FpPoly g = fp_gcd(acc - FpPoly::constant(p, 1), f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
    }
}

} // namespace

FpFactorization fp_factor(const FpPoly& f, std::uint64_t seed) {
    if (f.is_zero()) throw std::domain_error("fp_factor: zero polynomial");
    FpFactorization result;
    result.unit = f.leading();
    result.seed = seed;
    if (f.degree() == 0) return result;

    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ull * f.p()));
    std::vector<std::pair<FpPoly, unsigned>> sqfree;
    squarefree_decompose(f.monic(), 1, sqfree);
    for (const auto& [part, mult] : sqfree) {
        for (const auto& [prod, d] : distinct_degree(part)) {
            std::vector<FpPoly> irr;
            equal_degree(prod, d, rng, irr);
            for (auto& q : irr) result.factors.push_back({q, mult});
        }
    }
    std::sort(result.factors.begin(), result.factors.end(), [](const FpFactor& a, const FpFactor& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        return a.poly.coeffs() < b.poly.coeffs();
    });
    return result;
}

bool fp_is_irreducible(const FpPoly& f) {
    if (f.degree() <= 0) return false;
    if (f.degree() == 1) return true;
    FpPoly m = f.monic();
    unsigned n = static_cast<unsigned>(m.degree());
    FpPoly x = FpPoly::monomial(f.p(), 1, 1) % m;
    // x^(p^n) must equal x, and gcd(x^(p^(n/q)) - x, f) must be trivial for
    // every prime q | n.
    FpPoly h = x;
    std::vector<FpPoly> powers(n + 1, FpPoly::zero(f.p()));
    for (unsigned d = 1; d <= n; ++d) {
        h = FpPoly::powmod(h, f.p(), m);
        powers[d] = h;
    }
    if (powers[n] != x) return false;
    for (unsigned q = 2; q <= n; ++q) {
        if (n % q != 0 || !is_prime(q)) continue;
        FpPoly g = fp_gcd(powers[n / q] - x, m);
        if (g.degree() != 0) return false;
    }
    return true;
}

} // namespace k3fg
