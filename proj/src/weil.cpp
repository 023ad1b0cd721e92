#include "k3fg/weil.hpp"

#include "k3fg/errors.hpp"
#include "k3fg/fp_poly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace k3fg {

WeilPoly::WeilPoly(std::vector<BigInt> c, unsigned long p_, int a_) : coeffs(std::move(c)), p(p_), a(a_) {
    if (coeffs.empty() || coeffs[0] != 1)
        throw std::domain_error("WeilPoly: constant term must be 1");
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    if (a < 1) throw std::domain_error("WeilPoly: q = p^a needs a >= 1");
}

NewtonPolygonData newton_polygon(const std::vector<BigInt>& coeffs, unsigned long p) {
    if (coeffs.empty()) throw std::domain_error("newton_polygon: zero polynomial");
    std::vector<std::pair<long, long>> pts;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        pts.emplace_back(static_cast<long>(i), int_valuation(coeffs[i], p));
    }
    if (pts.empty()) throw std::domain_error("newton_polygon: zero polynomial");
    if (pts.front().first != 0 || pts.front().second != 0)
        throw std::domain_error("newton_polygon: constant term must be a p-adic unit");

    // Monotone chain along increasing i, keeping the lower hull.
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // drop b when it lies on or above segment a->pt
            if ((pt.second - a.second) * (b.first - a.first) <=
                (b.second - a.second) * (pt.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }

    NewtonPolygonData np;
    np.vertices = hull;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long di = hull[i].first - hull[i - 1].first;
        long dv = hull[i].second - hull[i - 1].second;
        np.slopes.emplace_back(BigRational(dv) / BigRational(di), static_cast<int>(di));
    }
    return np;
}

// ---------------------------------------------------------------------------
// Arithmetic in O = Z_p[pi]/(pi^ram - p) truncated mod p^M, as coordinate
// vectors in the pi-power basis.
// ---------------------------------------------------------------------------

namespace {

struct EisRing {
    unsigned long p;
    int ram;
    long M;
    BigInt pM;

    EisRing(unsigned long p_, int ram_, long m)
        : p(p_), ram(ram_), M(m), pM(p_power(p_, static_cast<unsigned long>(m))) {}
};

using Elt = std::vector<BigInt>; // size ring.ram

Elt elt_zero(const EisRing& R) { return Elt(static_cast<std::size_t>(R.ram), BigInt(0)); }

void elt_reduce(const EisRing& R, Elt& x) {
    for (auto& c : x) {
        c %= R.pM;
        if (c < 0) c += R.pM;
    }
}

bool elt_is_zero(const Elt& x) {
    for (const auto& c : x)
        if (c != 0) return false;
    return true;
}

Elt elt_add(const EisRing& R, const Elt& a, const Elt& b) {
    Elt r = a;
    for (int i = 0; i < R.ram; ++i) r[i] += b[i];
    elt_reduce(R, r);
    return r;
}

Elt elt_sub(const EisRing& R, const Elt& a, const Elt& b) {
    Elt r = a;
    for (int i = 0; i < R.ram; ++i) r[i] -= b[i];
    elt_reduce(R, r);
    return r;
}

Elt elt_mul(const EisRing& R, const Elt& a, const Elt& b) {
    Elt r = elt_zero(R);
    for (int i = 0; i < R.ram; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < R.ram; ++j) {
            if (b[j] == 0) continue;
            int t = i + j;
            if (t < R.ram)
                r[t] += a[i] * b[j];
            else
                r[t - R.ram] += a[i] * b[j] * R.p;
        }
    }
    elt_reduce(R, r);
    return r;
}

// pi-adic valuation bounded by ram*M.
long elt_vpi(const EisRing& R, const Elt& x) {
    long best = R.ram * R.M;
    for (int i = 0; i < R.ram; ++i) {
        if (x[i] == 0) continue;
        long v = int_valuation(x[i], R.p) * R.ram + i;
        best = std::min(best, v);
    }
    return best;
}

// c * pi^shift for an exact integer c; shift may be negative as long as the
// result stays integral.
Elt elt_from_int_shift(const EisRing& R, const BigInt& c, long shift) {
    Elt r = elt_zero(R);
    if (c == 0) return r;
    long v = int_valuation(c, R.p);
    BigInt unit = c / p_power(R.p, static_cast<unsigned long>(v));
    long total = v * R.ram + shift;
    if (total < 0) throw std::domain_error("elt_from_int_shift: negative pi-valuation");
    long coord = total % R.ram;
    long pexp = total / R.ram;
    r[static_cast<std::size_t>(coord)] = unit * p_power(R.p, static_cast<unsigned long>(pexp));
    elt_reduce(R, r);
    return r;
}

// x * pi^s for s >= 0.
Elt elt_shift_up(const EisRing& R, const Elt& x, long s) {
    Elt r = elt_zero(R);
    for (int i = 0; i < R.ram; ++i) {
        if (x[i] == 0) continue;
        long t = i + s;
        r[static_cast<std::size_t>(t % R.ram)] +=
            x[i] * p_power(R.p, static_cast<unsigned long>(t / R.ram));
    }
    elt_reduce(R, r);
    return r;
}

// The pi^l digit of x (in F_p), valid when v_pi(x) >= l.
unsigned long elt_digit(const EisRing& R, const Elt& x, long l) {
    long coord = l % R.ram;
    long pexp = l / R.ram;
    const BigInt& c = x[static_cast<std::size_t>(coord)];
    if (c == 0) return 0;
    BigInt q = p_power(R.p, static_cast<unsigned long>(pexp));
    if (c % q != 0) throw std::logic_error("elt_digit: valuation below the requested digit");
    return mpz_fdiv_ui(BigInt(c / q).get_mpz_t(), R.p);
}

// Interpret x as an element of Z_p: all pi-coordinates other than 0 must
// vanish up to the stated pi-adic accuracy (noise above it is tolerated).
BigInt elt_to_zp(const EisRing& R, const Elt& x, long min_vpi) {
    for (int i = 1; i < R.ram; ++i) {
        if (x[i] == 0) continue;
        if (int_valuation(x[i], R.p) * R.ram + i < min_vpi)
            throw std::logic_error("elt_to_zp: element does not descend to Z_p");
    }
    return x[0];
}

using EisPoly = std::vector<Elt>;

EisPoly poly_mul(const EisRing& R, const EisPoly& a, const EisPoly& b) {
    EisPoly r(a.size() + b.size() - 1, elt_zero(R));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (elt_is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (elt_is_zero(b[j])) continue;
            Elt prod = elt_mul(R, a[i], b[j]);
            r[i + j] = elt_add(R, r[i + j], prod);
        }
    }
    return r;
}

EisPoly poly_sub(const EisRing& R, const EisPoly& a, const EisPoly& b) {
    EisPoly r(std::max(a.size(), b.size()), elt_zero(R));
    for (std::size_t i = 0; i < r.size(); ++i) {
        Elt x = i < a.size() ? a[i] : elt_zero(R);
        Elt y = i < b.size() ? b[i] : elt_zero(R);
        r[i] = elt_sub(R, x, y);
    }
    return r;
}

// Splits f (over O, constant term 1) as g * h where g mod pi is the given
// degree-k unit-leading polynomial and h = 1 mod pi.  Linear Hensel lifting,
// one pi digit per step; the mod-pi solve is loss-free because the Bezout
// system with h = 1 is unimodular.
void hensel_vertex_split(const EisRing& R, const EisPoly& f, const FpPoly& g0, EisPoly& g, EisPoly& h) {
    std::size_t n = f.size() - 1;
    std::size_t k = static_cast<std::size_t>(g0.degree());
    g.assign(k + 1, elt_zero(R));
    for (std::size_t i = 0; i <= k; ++i) g[i] = elt_from_int_shift(R, BigInt(g0.coeff(i)), 0);
    h.assign(n - k + 1, elt_zero(R));
    h[0] = elt_from_int_shift(R, BigInt(1), 0);

    long limit = R.ram * R.M;
    for (;;) {
        EisPoly e = poly_sub(R, f, poly_mul(R, g, h));
        long l = limit;
        for (const auto& c : e) l = std::min(l, elt_vpi(R, c));
        if (l >= limit) break;

        // pi^l digit of the residual as an F_p polynomial
        std::vector<std::uint64_t> digits(e.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (elt_vpi(R, e[i]) <= l) digits[i] = elt_digit(R, e[i], l);
        FpPoly ebar(R.p, std::move(digits));
        if (ebar.is_zero()) throw std::logic_error("hensel_vertex_split: inconsistent residual");

        // Solve u + v*g0 = ebar with deg u <= k, deg v <= n-k, u(0) = v(0) = 0.
        FpPoly qq, rem;
        FpPoly::divrem(ebar, g0, qq, rem);
        std::uint64_t c0 = qq.coeff(0);
        FpPoly vbar = qq - FpPoly::constant(R.p, c0);
        FpPoly ubar = rem + g0.scaled(c0);

        for (std::size_t i = 0; i <= k; ++i)
            if (ubar.coeff(i) != 0)
                g[i] = elt_add(R, g[i], elt_shift_up(R, elt_from_int_shift(R, BigInt(ubar.coeff(i)), 0), l));
        for (std::size_t i = 0; i <= n - k; ++i)
            if (vbar.coeff(i) != 0)
                h[i] = elt_add(R, h[i], elt_shift_up(R, elt_from_int_shift(R, BigInt(vbar.coeff(i)), 0), l));
    }
}

} // namespace

std::vector<SlopeSegmentFactor> slope_split(const WeilPoly& f, long precision) {
    if (precision < 1) throw std::domain_error("slope_split: precision must be >= 1");
    unsigned long p = f.p;
    std::vector<SlopeSegmentFactor> out;

    // The twist at each peel divides by pi powers, so every later level costs
    // up to ceil(slope * remaining_degree) digits of accuracy.  Budget the
    // whole polygon up front and track the accuracy of the running cofactor.
    long budget = 0;
    {
        NewtonPolygonData np = newton_polygon(f.coeffs, p);
        long remaining = 0;
        for (const auto& s : np.slopes) remaining += s.second;
        for (const auto& s : np.slopes) {
            BigRational cost = s.first * BigRational(remaining);
            budget += static_cast<long>(mpz_get_si(BigInt((cost.get_num() + cost.get_den() - 1) /
                                                          cost.get_den())
                                                       .get_mpz_t()));
            remaining -= s.second;
        }
    }
    long acc = precision + budget + 2;

    BigInt pprec = p_power(p, static_cast<unsigned long>(precision));
    std::vector<BigInt> rest = f.coeffs;
    for (;;) {
        NewtonPolygonData np = newton_polygon(rest, p);
        if (np.slopes.size() <= 1) {
            SlopeSegmentFactor seg;
            seg.slope = np.slopes.empty() ? BigRational(0) : np.slopes[0].first;
            for (const auto& c : rest) {
                BigInt cc = c % pprec;
                if (cc < 0) cc += pprec;
                seg.coeffs.emplace_back(p, precision, cc);
            }
            if (rest.size() > 1) out.push_back(std::move(seg));
            break;
        }

        // Peel the lowest segment at its break vertex.
        long k = np.vertices[1].first;
        BigRational slope = np.slopes[0].first;
        long u = mpz_get_si(slope.get_num().get_mpz_t());
        long v = mpz_get_si(slope.get_den().get_mpz_t());
        int ram = static_cast<int>(v);
        long n = static_cast<long>(rest.size()) - 1;

        long level_loss = (u * n + ram - 1) / ram;
        if (acc - level_loss < precision)
            throw insufficient_precision("slope_split: accuracy budget exhausted",
                                         precision + budget + level_loss);

        EisRing R(p, ram, acc);

        // Twist: ftw(T) = f(T / pi^u) has the lowest segment at slope 0.
        EisPoly ftw(rest.size(), elt_zero(R));
        for (std::size_t i = 0; i < rest.size(); ++i)
            ftw[i] = elt_from_int_shift(R, rest[i], -static_cast<long>(i) * u);

        std::vector<std::uint64_t> g0c(static_cast<std::size_t>(k) + 1, 0);
        for (long i = 0; i <= k; ++i)
            g0c[static_cast<std::size_t>(i)] = elt_digit(R, ftw[static_cast<std::size_t>(i)], 0);
        FpPoly g0(p, std::move(g0c));

        EisPoly g, h;
        hensel_vertex_split(R, ftw, g0, g, h);

        // Untwist both factors back to Z_p[T]; both are now accurate to
        // acc - level_loss digits.
        acc -= level_loss;
        BigInt pacc = p_power(p, static_cast<unsigned long>(acc));

        SlopeSegmentFactor seg;
        seg.slope = slope;
        for (std::size_t i = 0; i < g.size(); ++i) {
            Elt lifted = elt_shift_up(R, g[i], static_cast<long>(i) * u);
            seg.coeffs.emplace_back(p, precision, elt_to_zp(R, lifted, ram * acc) % pprec);
        }
        out.push_back(std::move(seg));

        std::vector<BigInt> next(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            Elt lifted = elt_shift_up(R, h[i], static_cast<long>(i) * u);
            next[i] = elt_to_zp(R, lifted, ram * acc) % pacc;
        }
        while (next.size() > 1 && next.back() == 0) next.pop_back();
        rest = std::move(next);
        if (rest.size() == 1) break;
    }
    return out;
}

SlopeFactorization slope_factorize(const WeilPoly& f, long precision) {
    SlopeFactorization sf;
    sf.precision = precision;
    sf.p = f.p;
    sf.a = f.a;
    sf.segments = slope_split(f, precision);

    BigInt pN = p_power(f.p, static_cast<unsigned long>(precision));
    auto mul_into = [&](std::vector<PadicInt>& acc, const std::vector<PadicInt>& part) {
        std::vector<BigInt> a(acc.size()), b(part.size());
        for (std::size_t i = 0; i < acc.size(); ++i) a[i] = acc[i].value();
        for (std::size_t i = 0; i < part.size(); ++i) b[i] = part[i].value();
        std::vector<BigInt> r(a.size() + b.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % pN;
        acc.clear();
        for (auto& c : r) acc.emplace_back(f.p, precision, c);
    };

    PadicInt one(f.p, precision, 1);
    sf.p_lt = {one};
    sf.p_1 = {one};
    sf.p_gt = {one};
    BigRational weight(f.a); // slope threshold: v_p = a means normalized slope 1
    for (const auto& seg : sf.segments) {
        if (seg.slope < weight)
            mul_into(sf.p_lt, seg.coeffs);
        else if (seg.slope == weight)
            mul_into(sf.p_1, seg.coeffs);
        else
            mul_into(sf.p_gt, seg.coeffs);
    }
    sf.h = static_cast<int>(sf.p_lt.size()) - 1;

    // Certify: the product of the three parts reproduces f mod p^N.
    std::vector<PadicInt> prod = sf.p_lt;
    mul_into(prod, sf.p_1);
    mul_into(prod, sf.p_gt);
    for (std::size_t i = 0; i < prod.size() || i < f.coeffs.size(); ++i) {
        BigInt lhs = i < prod.size() ? prod[i].value() : BigInt(0);
        BigInt rhs = i < f.coeffs.size() ? f.coeffs[i] % pN : BigInt(0);
        if (rhs < 0) rhs += pN;
        if ((lhs - rhs) % pN != 0)
            throw insufficient_precision("slope_factorize: certification failed; raise precision",
                                         precision + 4);
    }
    return sf;
}

FunctionalEquationResult functional_equation_check(const SlopeFactorization& sf) {
    int h = sf.h;
    int h_gt = static_cast<int>(sf.p_gt.size()) - 1;
    if (h != h_gt)
        throw std::domain_error("functional_equation_check: deg P_<1 != deg P_>1");
    unsigned long p = sf.p;
    long N = sf.precision;
    PadicInt one(p, N, 1);
    if (h == 0) return {true, one}; // supersingular shape: both parts are 1

    BigInt q2 = p_power(p, static_cast<unsigned long>(2 * sf.a));
    // P_gt(T) = c T^h P_lt(1/(q^2 T)) componentwise: d_j q^{2(h-j)} = c b_{h-j},
    // and j = h forces c = d_h.
    PadicInt c = sf.p_gt[static_cast<std::size_t>(h)];
    bool ok = true;
    for (int j = 0; j <= h; ++j) {
        BigInt scale;
        mpz_pow_ui(scale.get_mpz_t(), q2.get_mpz_t(), static_cast<unsigned long>(h - j));
        PadicInt lhs = sf.p_gt[static_cast<std::size_t>(j)].mul_int(scale);
        PadicInt rhs = c * sf.p_lt[static_cast<std::size_t>(h - j)];
        if (lhs != rhs) ok = false;
    }
    return {ok, c};
}

// ---------------------------------------------------------------------------
// Power structure and the admissible-exponent table.
// ---------------------------------------------------------------------------

namespace {

std::vector<BigRational> poly_pow_trunc(const std::vector<BigRational>& base, unsigned r, std::size_t cut) {
    std::vector<BigRational> acc{BigRational(1)};
    for (unsigned t = 0; t < r; ++t) {
        std::vector<BigRational> next(std::min(cut, acc.size() + base.size() - 1), BigRational(0));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (acc[i] == 0) continue;
            for (std::size_t j = 0; j < base.size() && i + j < next.size(); ++j)
                next[i + j] += acc[i] * base[j];
        }
        acc = std::move(next);
    }
    return acc;
}

} // namespace

PowerStructure power_structure(const std::vector<BigInt>& r_coeffs) {
    if (r_coeffs.empty() || r_coeffs[0] != 1)
        throw std::domain_error("power_structure: constant term must be 1");
    std::vector<BigInt> R = r_coeffs;
    while (R.size() > 1 && R.back() == 0) R.pop_back();
    unsigned deg = static_cast<unsigned>(R.size()) - 1;

    PowerStructure ps;
    ps.q = R;
    ps.r = 1;
    if (deg == 0) {
        ps.verdict = "probable";
        return ps;
    }

    std::vector<unsigned> divisors;
    for (unsigned r = deg; r >= 1; --r)
        if (deg % r == 0) divisors.push_back(r);

    for (unsigned r : divisors) {
        unsigned d = deg / r;
        // Solve Q with constant 1 and Q^r = R by matching coefficients in
        // order; then verify the full expansion exactly.
        std::vector<BigRational> q(d + 1, BigRational(0));
        q[0] = 1;
        for (unsigned i = 1; i <= d; ++i) {
            std::vector<BigRational> partial = poly_pow_trunc(q, r, i + 1);
            BigRational miss = BigRational(R[i]) - partial[i];
            q[i] = miss / BigRational(static_cast<long>(r));
        }
        std::vector<BigRational> full = poly_pow_trunc(q, r, deg + 1);
        bool match = true;
        for (unsigned i = 0; i <= deg && match; ++i) match = full[i] == BigRational(R[i]);
        bool integral = true;
        for (const auto& qi : q) integral = integral && qi.get_den() == 1;
        if (match && integral) {
            ps.r = r;
            ps.q.clear();
            for (const auto& qi : q) ps.q.push_back(qi.get_num());
            break;
        }
    }

    // Irreducibility verdict for Q via auxiliary primes: look at the reversed
    // monic polynomial mod small odd primes.
    unsigned d = deg / ps.r;
    ps.verdict = "probable";
    if (d == 1) {
        ps.verdict = "certified"; // linear
        return ps;
    }
    unsigned tried = 0;
    for (unsigned long ell = 3; tried < 25; ell += 2) {
        if (!is_prime(ell)) continue;
        ++tried;
        std::vector<std::uint64_t> rev(d + 1);
        for (unsigned i = 0; i <= d; ++i) {
            BigInt c = ps.q[d - i] % static_cast<long>(ell);
            if (c < 0) c += static_cast<long>(ell);
            rev[i] = mpz_get_ui(c.get_mpz_t());
        }
        FpPoly qbar(ell, std::move(rev));
        if (qbar.degree() != static_cast<long>(d)) continue; // leading vanished
        FpPoly der = qbar.derivative();
        if (der.is_zero() || fp_gcd(qbar, der).degree() != 0) continue; // not squarefree
        FpFactorization fac = fp_factor(qbar, 0x5eed ^ ell);
        std::vector<long> pattern;
        for (const auto& ff : fac.factors)
            for (unsigned t = 0; t < ff.multiplicity; ++t) pattern.push_back(ff.poly.degree());
        std::sort(pattern.begin(), pattern.end());
        ps.evidence.emplace_back(ell, pattern);
        if (pattern.size() == 1 && pattern[0] == static_cast<long>(d)) {
            ps.verdict = "certified";
            break;
        }
    }
    return ps;
}

std::vector<unsigned> possible_r(unsigned tau, unsigned h) {
    if (tau < 2 || tau % 2 != 0) throw std::domain_error("possible_r: tau must be even and >= 2");
    if (h < 1 || h > tau / 2) throw std::domain_error("possible_r: h out of range (1 <= h <= tau/2)");
    std::vector<unsigned> out;
    for (unsigned r = 1; r <= h; ++r)
        if (h % r == 0 && tau % r == 0 && (tau / r) % 2 == 0) out.push_back(r);
    return out;
}

} // namespace k3fg
