#include "k3fg/charsum.hpp"

#include "k3fg/errors.hpp"

#include <algorithm>
#include <numeric>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace k3fg {

// ---------------------------------------------------------------------------
// Cyclotomic integers.
// ---------------------------------------------------------------------------

namespace {

// (x^n - 1) helpers over Z
std::vector<BigInt> x_pow_minus_one(unsigned long n) {
    std::vector<BigInt> v(n + 1, BigInt(0));
    v[0] = -1;
    v[n] = 1;
    return v;
}

// exact division of polynomials over Z (divisor monic up to sign of leading)
std::vector<BigInt> poly_divexact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    std::vector<BigInt> q(num.size() - den.size() + 1, BigInt(0));
    for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
        BigInt f = num[i + den.size() - 1] / den.back();
        q[i] = f;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= f * den[j];
    }
    for (const auto& c : num)
        if (c != 0) throw std::logic_error("poly_divexact: nonzero remainder");
    return q;
}

} // namespace

const std::vector<BigInt>& cyclotomic_poly(unsigned long d) {
    static std::map<unsigned long, std::vector<BigInt>> cache;
    static std::mutex mx;
    std::lock_guard lock(mx);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;

    // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e, built bottom-up.
    std::vector<BigInt> num = x_pow_minus_one(d);
    for (unsigned long e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        // compute Phi_e recursively through the cache (no lock recursion:
        // inline the same loop structure instead)
        if (cache.find(e) == cache.end()) {
            std::vector<BigInt> ne = x_pow_minus_one(e);
            for (unsigned long e2 = 1; e2 < e; ++e2)
                if (e % e2 == 0) ne = poly_divexact(std::move(ne), cache.at(e2));
            cache.emplace(e, std::move(ne));
        }
        num = poly_divexact(std::move(num), cache.at(e));
    }
    return cache.emplace(d, std::move(num)).first->second;
}

CyclotomicInt::CyclotomicInt(unsigned long d, std::vector<BigInt> coeffs) : d_(d), c_(std::move(coeffs)) {
    if (d < 1) throw std::domain_error("CyclotomicInt: d must be >= 1");
    reduce();
}

void CyclotomicInt::reduce() {
    const std::vector<BigInt>& phi = cyclotomic_poly(d_);
    std::size_t deg_phi = phi.size() - 1;
    while (c_.size() > deg_phi) {
        BigInt lead = c_.back();
        std::size_t off = c_.size() - 1 - deg_phi;
        for (std::size_t j = 0; j < phi.size(); ++j) c_[off + j] -= lead * phi[j];
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.size() > deg_phi && c_.back() == 0) c_.pop_back();
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

CyclotomicInt CyclotomicInt::zeta_pow(unsigned long d, long k) {
    long kk = k % static_cast<long>(d);
    if (kk < 0) kk += static_cast<long>(d);
    std::vector<BigInt> v(static_cast<std::size_t>(kk) + 1, BigInt(0));
    v[static_cast<std::size_t>(kk)] = 1;
    return CyclotomicInt(d, std::move(v));
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& o) const {
    if (d_ != o.d_) throw std::domain_error("CyclotomicInt: mixed cyclotomic orders");
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] += c_[i];
        if (i < o.c_.size()) r[i] += o.c_[i];
    }
    return CyclotomicInt(d_, std::move(r));
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& o) const {
    if (d_ != o.d_) throw std::domain_error("CyclotomicInt: mixed cyclotomic orders");
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size()) r[i] += c_[i];
        if (i < o.c_.size()) r[i] -= o.c_[i];
    }
    return CyclotomicInt(d_, std::move(r));
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
    if (d_ != o.d_) throw std::domain_error("CyclotomicInt: mixed cyclotomic orders");
    if (c_.empty() || o.c_.empty()) return zero(d_);
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return CyclotomicInt(d_, std::move(r));
}

bool CyclotomicInt::operator==(const CyclotomicInt& o) const { return d_ == o.d_ && c_ == o.c_; }

CyclotomicInt CyclotomicInt::conj() const {
    std::vector<BigInt> r;
    CyclotomicInt acc = zero(d_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        CyclotomicInt term = zeta_pow(d_, -static_cast<long>(i));
        std::vector<BigInt> scaled = term.c_;
        for (auto& x : scaled) x *= c_[i];
        acc = acc + CyclotomicInt(d_, std::move(scaled));
    }
    return acc;
}

bool CyclotomicInt::is_integer() const { return c_.size() <= 1; }

BigInt CyclotomicInt::integer_value() const {
    if (!is_integer()) throw std::domain_error("CyclotomicInt: not a rational integer");
    return c_.empty() ? BigInt(0) : c_[0];
}

PadicInt CyclotomicInt::eval(const PadicInt& zeta_value) const {
    PadicInt acc(zeta_value.p(), zeta_value.precision(), 0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * zeta_value + PadicInt(zeta_value.p(), zeta_value.precision(), c_[i]);
    return acc;
}

std::string CyclotomicInt::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].get_str();
        if (i >= 1) os << "*z^" << i;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Characters and Jacobi sums.
// ---------------------------------------------------------------------------

namespace {

unsigned long find_generator(unsigned long p) {
    // p is a small prime here; factor p-1 and test orders.
    std::vector<unsigned long> prime_factors;
    unsigned long n = p - 1;
    for (unsigned long f = 2; f * f <= n; ++f)
        if (n % f == 0) {
            prime_factors.push_back(f);
            while (n % f == 0) n /= f;
        }
    if (n > 1) prime_factors.push_back(n);
    for (unsigned long g = 2; g < p; ++g) {
        bool ok = true;
        for (unsigned long f : prime_factors) {
            unsigned long e = (p - 1) / f;
            // g^e mod p
            unsigned long r = 1, b = g % p, ee = e;
            while (ee) {
                if (ee & 1) r = (r * b) % p;
                b = (b * b) % p;
                ee >>= 1;
            }
            if (r == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("find_generator: no generator found");
}

} // namespace

MultiplicativeCharacter::MultiplicativeCharacter(unsigned long p, unsigned long d, long mult)
    : p_(p), d_(d), mult_(mult) {
    if (!is_prime(p)) throw std::domain_error("MultiplicativeCharacter: p must be prime");
    if (d == 0 || (p - 1) % d != 0)
        throw std::domain_error("MultiplicativeCharacter: order must divide p - 1");
    g_ = find_generator(p);
    dlog_.assign(p, 0);
    unsigned long x = 1;
    for (unsigned long t = 0; t < p - 1; ++t) {
        dlog_[x] = t;
        x = (x * g_) % p;
    }
}

unsigned long MultiplicativeCharacter::order() const {
    long m = mult_ % static_cast<long>(d_);
    if (m < 0) m += static_cast<long>(d_);
    if (m == 0) return 1;
    return d_ / std::gcd(d_, static_cast<unsigned long>(m));
}

CyclotomicInt MultiplicativeCharacter::value(unsigned long x) const {
    x %= p_;
    if (x == 0) return CyclotomicInt::zero(d_);
    return CyclotomicInt::zeta_pow(d_, mult_ * static_cast<long>(dlog_[x]));
}

CyclotomicInt jacobi_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2) {
    if (chi1.p() != chi2.p())
        throw std::domain_error("jacobi_sum: characters over different primes");
    if (chi1.d() != chi2.d())
        throw std::domain_error("jacobi_sum: characters must share the cyclotomic order");
    if (chi1.is_trivial() || chi2.is_trivial())
        throw std::domain_error("jacobi_sum: trivial character makes the sum degenerate");
    unsigned long p = chi1.p();
    CyclotomicInt acc = CyclotomicInt::zero(chi1.d());
    for (unsigned long a = 2; a < p; ++a) acc = acc + chi1.value(a) * chi2.value((p + 1 - a) % p);
    return acc;
}

std::vector<PadicInt> padic_embeddings(const CyclotomicInt& z, unsigned long p, long precision) {
    unsigned long d = z.d();
    if ((p - 1) % d != 0)
        throw std::domain_error("padic_embeddings: no d-th roots of unity in Z_p");
    // order-d elements of F_p^x
    std::vector<PadicInt> out;
    for (unsigned long r = 1; r < p; ++r) {
        unsigned long e = 1, x = r % p;
        while (x != 1) {
            x = (x * r) % p;
            ++e;
        }
        if (e != d) continue;
        out.push_back(z.eval(teichmuller(r, p, precision)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Point counting.
// ---------------------------------------------------------------------------

namespace {

// F_q for q = p or p^2; elements are indices, tables drive the arithmetic.
struct SmallField {
    unsigned long p;
    int a;
    unsigned long q;
    unsigned long nonresidue = 0; // theta^2 = nonresidue when a = 2

    explicit SmallField(unsigned long p_, int a_) : p(p_), a(a_), q(a_ == 1 ? p_ : p_ * p_) {
        if (a != 1 && a != 2) throw std::domain_error("SmallField: only F_p and F_p^2");
        if (a == 2) {
            for (unsigned long c = 2; c < p; ++c) {
                bool square = false;
                for (unsigned long x = 1; x < p && !square; ++x) square = (x * x) % p == c;
                if (!square) {
                    nonresidue = c;
                    break;
                }
            }
            if (nonresidue == 0) throw std::logic_error("SmallField: no nonresidue found");
        }
    }

    // element index e = lo + p*hi represents lo + hi*theta
    unsigned long add(unsigned long x, unsigned long y) const {
        if (a == 1) return (x + y) % p;
        return (x % p + y % p) % p + p * ((x / p + y / p) % p);
    }
    unsigned long mul(unsigned long x, unsigned long y) const {
        if (a == 1) return (x * y) % p;
        unsigned long x0 = x % p, x1 = x / p, y0 = y % p, y1 = y / p;
        unsigned long lo = (x0 * y0 + nonresidue * ((x1 * y1) % p)) % p;
        unsigned long hi = (x0 * y1 + x1 * y0) % p;
        return lo + p * hi;
    }
    unsigned long from_residue(long r) const {
        long rr = r % static_cast<long>(p);
        if (rr < 0) rr += static_cast<long>(p);
        return static_cast<unsigned long>(rr);
    }
};

void check_homogeneous(const std::vector<std::vector<int>>& monomials) {
    if (monomials.empty()) throw std::domain_error("point_count: empty form");
    int deg = 0;
    for (int e : monomials[0]) deg += e;
    for (const auto& row : monomials) {
        int d = 0;
        for (int e : row) d += e;
        if (d != deg || row.size() != monomials[0].size())
            throw std::domain_error("point_count: form is not homogeneous");
    }
}

void check_budget(const SmallField& F, int nvars) {
    unsigned long long evals = 1;
    for (int i = 0; i < nvars; ++i) {
        evals *= F.q;
        if (evals > 20000000ull)
            throw std::domain_error("point_count: ~" + std::to_string(evals) +
                                    "+ evaluations exceeds the desk-scale budget (~1e7)");
    }
}

// Evaluate sum_i coeff_i * prod_j x_j^{e_ij} over F_q.
unsigned long eval_form(const SmallField& F, const std::vector<std::vector<int>>& monomials,
                        const std::vector<unsigned long>& coeffs, const std::vector<unsigned long>& x) {
    unsigned long acc = 0;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        unsigned long term = coeffs[i];
        for (std::size_t j = 0; j < x.size(); ++j)
            for (int e = 0; e < monomials[i][j]; ++e) term = F.mul(term, x[j]);
        acc = F.add(acc, term);
    }
    return acc;
}

// Iterate projective representatives: first nonzero coordinate = 1.
template <class Fn>
void for_projective_points(const SmallField& F, int nvars, Fn&& fn) {
    std::vector<unsigned long> x(static_cast<std::size_t>(nvars), 0);
    for (int lead = 0; lead < nvars; ++lead) {
        std::fill(x.begin(), x.end(), 0ul);
        x[static_cast<std::size_t>(lead)] = 1;
        int free = nvars - lead - 1;
        std::vector<unsigned long> idx(static_cast<std::size_t>(free), 0);
        for (;;) {
            for (int t = 0; t < free; ++t) x[static_cast<std::size_t>(lead + 1 + t)] = idx[static_cast<std::size_t>(t)];
            fn(x);
            int t = free - 1;
            while (t >= 0 && ++idx[static_cast<std::size_t>(t)] == F.q) {
                idx[static_cast<std::size_t>(t)] = 0;
                --t;
            }
            if (t < 0) break;
        }
    }
}

std::vector<unsigned long> lift_coeffs(const SmallField& F, const std::vector<long>& coeffs) {
    std::vector<unsigned long> out;
    for (long c : coeffs) out.push_back(F.from_residue(c));
    return out;
}

} // namespace

PointCountResult point_count_hypersurface(const std::vector<std::vector<int>>& monomials,
                                          const std::vector<long>& coeffs, unsigned long p,
                                          int ext_degree) {
    check_homogeneous(monomials);
    SmallField F(p, ext_degree);
    int nvars = static_cast<int>(monomials[0].size());
    check_budget(F, nvars - 1);
    std::vector<unsigned long> cs = lift_coeffs(F, coeffs);
    BigInt count(0);
    for_projective_points(F, nvars, [&](const std::vector<unsigned long>& x) {
        if (eval_form(F, monomials, cs, x) == 0) count += 1;
    });
    return {count, "projective points of the hypersurface, representatives with first nonzero coordinate 1",
            F.q};
}

PointCountResult point_count_double_cover(const std::vector<std::vector<int>>& monomials,
                                          const std::vector<long>& coeffs, unsigned long p,
                                          int ext_degree) {
    check_homogeneous(monomials);
    SmallField F(p, ext_degree);
    int nvars = static_cast<int>(monomials[0].size());
    check_budget(F, nvars - 1);
    std::vector<unsigned long> cs = lift_coeffs(F, coeffs);

    // quadratic character table: chi(x) = +1 for nonzero squares, -1 for
    // nonsquares, 0 at 0
    std::vector<int> chi(F.q, -1);
    chi[0] = 0;
    for (unsigned long x = 1; x < F.q; ++x) chi[F.mul(x, x)] = 1;

    BigInt count(0);
    for_projective_points(F, nvars, [&](const std::vector<unsigned long>& x) {
        count += 1 + chi[eval_form(F, monomials, cs, x)];
    });
    return {count,
            "points of the double cover y^2 = f over the projective base: sum of 1 + chi(f) with chi "
            "the quadratic character, chi(0) = 0",
            F.q};
}

PointCountResult point_count(const FamilyInstance& inst, int ext_degree) {
    const K3FamilySpec& spec = *inst.spec;
    if (spec.id == FamilyId::JacobiQuartic)
        throw unsupported_operation("point_count: jacobi-quartic is a fibration, not a catalog form");
    std::vector<std::vector<int>> rows = spec.monomials;
    std::vector<long> coeffs;
    if (inst.c.empty())
        coeffs.assign(rows.size(), 1);
    else
        for (const auto& ci : inst.c) coeffs.push_back(mpz_get_si(BigInt(ci % static_cast<long>(inst.p)).get_mpz_t()));
    if (spec.has_lambda) {
        rows.push_back(spec.lambda_monomial);
        BigInt lam = (BigInt(-spec.lambda_multiplier) * inst.lambda) % static_cast<long>(inst.p);
        coeffs.push_back(mpz_get_si(lam.get_mpz_t()));
    }
    if (spec.stride == 2) return point_count_double_cover(rows, coeffs, inst.p, ext_degree);
    return point_count_hypersurface(rows, coeffs, inst.p, ext_degree);
}

} // namespace k3fg
