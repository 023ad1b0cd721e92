#include "k3fg/fgl.hpp"

#include "k3fg/detail/relval.hpp"
#include "k3fg/errors.hpp"

#include <algorithm>
#include <climits>
#include <mutex>
#include <cmath>
#include <sstream>

namespace k3fg {

using detail::RelCtx;
using detail::RelVal;

// ---------------------------------------------------------------------------
// FormalGroupLogarithm
// ---------------------------------------------------------------------------

FormalGroupLogarithm FormalGroupLogarithm::from_family(FamilyInstance inst, long precision) {
    FormalGroupLogarithm log;
    log.p_ = inst.p;
    log.precision_ = precision;
    log.provenance_ = inst.spec->name;
    log.family_ = std::move(inst);
    return log;
}

FormalGroupLogarithm FormalGroupLogarithm::custom(unsigned long p, long precision,
                                                  std::vector<BigRational> series_coeffs,
                                                  std::string provenance) {
    if (series_coeffs.size() < 2 || series_coeffs[1] != 1)
        throw std::domain_error("FormalGroupLogarithm: a logarithm needs leading coefficient 1");
    if (series_coeffs[0] != 0)
        throw std::domain_error("FormalGroupLogarithm: a logarithm has no constant term");
    FormalGroupLogarithm log;
    log.p_ = p;
    log.precision_ = precision;
    log.custom_ = std::move(series_coeffs);
    log.provenance_ = std::move(provenance);
    return log;
}

BigRational FormalGroupLogarithm::a_coeff_exact(unsigned long j) const {
    if (j == 0) return BigRational(0);
    if (family_) return family_tau_coeff_exact(*family_, j);
    if (j >= custom_.size()) throw std::domain_error("FormalGroupLogarithm: coefficient beyond cutoff");
    return custom_[j] * BigRational(static_cast<long>(j));
}

PadicInt FormalGroupLogarithm::a_coeff_mod(unsigned long j, long prec) const {
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->values.find(j);
        if (it != cache_->values.end() && it->second.precision() >= prec)
            return it->second.with_precision(prec);
    }
    PadicInt v = family_ ? family_tau_coeff(*family_, j, prec)
                         : PadicInt::from_rational(a_coeff_exact(j), p_, prec);
    std::unique_lock lock(cache_->mutex);
    auto it = cache_->values.find(j);
    if (it == cache_->values.end() || it->second.precision() < v.precision())
        cache_->values.insert_or_assign(j, v);
    return v;
}

std::optional<long> FormalGroupLogarithm::a_coeff_valuation(unsigned long j) const {
    if (!family_) return std::nullopt;
    int e = family_->spec->stride;
    if (j == 0 || (j - 1) % static_cast<unsigned long>(e) != 0) return LONG_MAX;
    return family_coeff_valuation(*family_, (j - 1) / static_cast<unsigned long>(e));
}

BigRational FormalGroupLogarithm::series_coeff_exact(unsigned long j) const {
    if (j == 0) return BigRational(0);
    if (!family_ && j < custom_.size()) return custom_[j];
    return a_coeff_exact(j) / BigRational(static_cast<long>(j));
}

// ---------------------------------------------------------------------------
// Group law
// ---------------------------------------------------------------------------

GroupLaw build_group_law(const FormalGroupLogarithm& log, int cutoff) {
    if (cutoff < 2) throw std::domain_error("build_group_law: cutoff must be >= 2");
    unsigned long p = log.p();
    long target = log.precision();

    // Truncated parameter lifts limit the achievable precision: perturbing a
    // lift by p^M moves G's degree-k coefficient by at most p^(M - k*V) with
    // V = v_p(lcm(1..D)).
    if (log.family() && log.family()->param_precision) {
        long vp_lcm = 0;
        for (unsigned long q = p; q <= static_cast<unsigned long>(cutoff); q *= p) ++vp_lcm;
        long avail = *log.family()->param_precision - cutoff * vp_lcm;
        if (avail < target)
            throw insufficient_precision(
                "build_group_law: parameter lifts too short for requested precision",
                target + cutoff * vp_lcm);
    }

    BigRational zero(0);
    TruncatedSeries<BigRational> l(cutoff, zero);
    for (int j = 1; j <= cutoff; ++j) l.coeff(j) = log.series_coeff_exact(static_cast<unsigned long>(j));
    if (l.coeff(1) != 1) throw std::domain_error("build_group_law: logarithm must start with tau");

    TruncatedSeries<BigRational> inv = reversion(l);
    BivariateTruncatedSeries<BigRational> w = bivar_sum_of_logs(l, cutoff);
    BivariateTruncatedSeries<BigRational> gq = compose_bivariate(inv, w);

    GroupLaw law;
    law.p = p;
    law.precision = target;
    law.cutoff = cutoff;
    law.g_exact = gq;
    law.g = BivariateTruncatedSeries<PadicInt>(cutoff, PadicInt(p, target, 0));
    for (int i = 0; i <= cutoff; ++i)
        for (int j = 0; i + j <= cutoff; ++j) {
            const BigRational& q = gq.coeff(i, j);
            if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), p))
                throw integrality_error("build_group_law: coefficient (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is not p-integral");
            law.g.coeff(i, j) = PadicInt::from_rational(q, p, target);
        }
    if (!group_law_identity_ok(law))
        throw integrality_error("build_group_law: G(tau, 0) != tau");
    if (!group_law_commutative(law))
        throw integrality_error("build_group_law: G is not symmetric");
    return law;
}

bool group_law_identity_ok(const GroupLaw& law) {
    for (int i = 0; i <= law.cutoff; ++i) {
        const BigRational& q = law.g_exact.coeff(i, 0);
        if (i == 1 ? q != 1 : q != 0) return false;
    }
    return true;
}

bool group_law_commutative(const GroupLaw& law) {
    for (int i = 0; i <= law.cutoff; ++i)
        for (int j = 0; i + j <= law.cutoff; ++j)
            if (law.g_exact.coeff(i, j) != law.g_exact.coeff(j, i)) return false;
    return true;
}

bool group_law_associative(const GroupLaw& law) {
    // Exact arithmetic mod p^N keeps the trivariate products cheap.
    auto modulus = std::make_shared<const BigInt>(p_power(law.p, static_cast<unsigned long>(law.precision)));
    ZmodElt zero(BigInt(0), modulus);
    ZmodElt one(BigInt(1), modulus);
    int d = law.cutoff;

    BivariateTruncatedSeries<ZmodElt> g(d, zero);
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j) g.coeff(i, j) = ZmodElt(law.g.coeff(i, j).value(), modulus);

    TrivariateTruncatedSeries<ZmodElt> t1(d, zero), t3(d, zero), g12(d, zero), g23(d, zero);
    t1.coeff(1, 0, 0) = one;
    t3.coeff(0, 0, 1) = one;
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j) {
            g12.coeff(i, j, 0) = g.coeff(i, j);
            g23.coeff(0, i, j) = g.coeff(i, j);
        }

    TrivariateTruncatedSeries<ZmodElt> left = bivar_eval_trivar(g, g12, t3);
    TrivariateTruncatedSeries<ZmodElt> right = bivar_eval_trivar(g, t1, g23);
    for (std::size_t t = 0; t < left.c.size(); ++t)
        if (!ring_traits<ZmodElt>::equal(left.c[t], right.c[t])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

const char* height_class_name(HeightClass c) {
    switch (c) {
        case HeightClass::Height1: return "height-1";
        case HeightClass::Height2: return "height-2";
        case HeightClass::SupersingularUpTo: return "supersingular-up-to-bound";
        case HeightClass::UndeterminedAtLeast3: return "undetermined-at-least-3";
    }
    return "?";
}

HeightClass reclassify_from_evidence(const HeightReport& r) {
    if (r.a_p_residue % r.p != 0) return HeightClass::Height1;
    if (r.v2_residue && *r.v2_residue % r.p != 0) return HeightClass::Height2;
    bool ss = !r.valuations.empty();
    for (const auto& e : r.valuations)
        if (e.v_lower < e.required) ss = false;
    return ss ? HeightClass::SupersingularUpTo : HeightClass::UndeterminedAtLeast3;
}

HeightReport height_classify(const FormalGroupLogarithm& log, int s_max) {
    if (s_max < 2) throw std::domain_error("height_classify: s_max must be >= 2");
    if (log.family() && log.p() < 5)
        throw std::domain_error("height_classify: catalog families assume p >= 5");
    unsigned long p = log.p();

    HeightReport rep;
    rep.p = p;
    rep.s_bound = s_max;
    rep.provenance = log.provenance();

    rep.a_p_residue = log.a_coeff_mod(p, 1).residue();
    if (rep.a_p_residue != 0) {
        rep.cls = HeightClass::Height1;
        return rep;
    }

    // (a(p^2-1) - a(p-1)^{p+1}) / p must be integral; unit <=> height 2.
    PadicInt a2 = log.a_coeff_mod(p * p, 2);
    PadicInt a1 = log.a_coeff_mod(p, 2);
    PadicInt q = a2 - a1.pow(p + 1);
    PadicInt quot = q.div_exact_p_pow(1); // throws integrality_error if not divisible
    rep.v2_residue = quot.residue();
    if (*rep.v2_residue != 0) {
        rep.cls = HeightClass::Height2;
        return rep;
    }

    bool ss = true;
    BigInt idx(1);
    for (int s = 1; s <= s_max; ++s) {
        idx *= p;
        unsigned long j = mpz_get_ui(idx.get_mpz_t());
        ValuationEntry entry;
        entry.s = s;
        entry.required = s;
        std::optional<long> fast = log.a_coeff_valuation(j);
        if (fast) {
            entry.v_lower = *fast;
            entry.exact = *fast != LONG_MAX;
        } else {
            PadicInt c = log.a_coeff_mod(j, s);
            auto v = c.valuation();
            entry.v_lower = v ? *v : s; // zero mod p^s establishes v >= s
            entry.exact = v.has_value();
        }
        if (entry.v_lower < entry.required) ss = false;
        rep.valuations.push_back(entry);
    }
    rep.cls = ss ? HeightClass::SupersingularUpTo : HeightClass::UndeterminedAtLeast3;
    return rep;
}

// ---------------------------------------------------------------------------
// V polynomials
// ---------------------------------------------------------------------------

namespace {

// x-coefficients of A_m (resp. B_m) mod p^K.  Quartic:
//   coef_u = m! / ((2u)!(3u)!^2(4u)!(m-12u)!) * 2^(-14u) 3^(-6u)
// Sextic:
//   coef_u = (-1)^u 2^(14u) 3^(-9u) 5^(-10u) * m! / ((4u)!(5u)!(6u)!(m-15u)!)
std::vector<BigInt> v_series_coeffs(FamilyId id, unsigned long p, unsigned long m, long K) {
    RelCtx ctx(p, K);
    bool quartic = id == FamilyId::QuasiDiagonalQuartic;
    unsigned long k = quartic ? 12 : 15;
    std::vector<BigInt> out;
    RelVal term = RelVal::from_int(ctx, BigInt(1));
    BigInt pK = ctx.pK;
    for (unsigned long u = 0; k * u <= m; ++u) {
        if (u > 0) {
            unsigned long t = u - 1;
            for (unsigned long j = 0; j < k; ++j) term = term.mul_int(ctx, BigInt(m - k * t - j));
            if (quartic) {
                for (int j = 1; j <= 2; ++j) term = term.div_int(ctx, BigInt(2 * t + j));
                for (int j = 1; j <= 3; ++j) {
                    term = term.div_int(ctx, BigInt(3 * t + j));
                    term = term.div_int(ctx, BigInt(3 * t + j));
                }
                for (int j = 1; j <= 4; ++j) term = term.div_int(ctx, BigInt(4 * t + j));
                term = term.div_int(ctx, p_power(2, 14) * p_power(3, 6));
            } else {
                for (int j = 1; j <= 4; ++j) term = term.div_int(ctx, BigInt(4 * t + j));
                for (int j = 1; j <= 5; ++j) term = term.div_int(ctx, BigInt(5 * t + j));
                for (int j = 1; j <= 6; ++j) term = term.div_int(ctx, BigInt(6 * t + j));
                term = term.mul_int(ctx, BigInt(-1) * p_power(2, 14));
                term = term.div_int(ctx, p_power(3, 9) * p_power(5, 10));
            }
        }
        out.push_back(term.to_mod(ctx, K));
    }
    return out;
}

std::vector<BigInt> poly_mul_mod(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                 const BigInt& mod) {
    std::vector<BigInt> r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
            r[i + j] %= mod;
        }
    }
    return r;
}

std::vector<BigInt> poly_pow_mod(std::vector<BigInt> base, unsigned long e, const BigInt& mod) {
    std::vector<BigInt> acc{BigInt(1)};
    while (e > 0) {
        if (e & 1ul) acc = poly_mul_mod(acc, base, mod);
        e >>= 1;
        if (e > 0) base = poly_mul_mod(base, base, mod);
    }
    return acc;
}

} // namespace

VPolynomials v_polynomials(FamilyId id, unsigned long p) {
    bool quartic = id == FamilyId::QuasiDiagonalQuartic;
    if (!quartic && id != FamilyId::QuasiDiagonalSextic)
        throw unsupported_operation("v_polynomials: only the quasi-diagonal families");
    if (quartic ? p < 5 : p <= 5)
        throw std::domain_error("v_polynomials: prime outside the family's support");

    unsigned long m1 = quartic ? p - 1 : (p - 1) / 2;
    unsigned long m2 = quartic ? p * p - 1 : (p * p - 1) / 2;
    BigInt p2 = BigInt(p) * p;

    std::vector<BigInt> a1 = v_series_coeffs(id, p, m1, 2);
    std::vector<BigInt> a2 = v_series_coeffs(id, p, m2, 2);
    std::vector<BigInt> w = poly_pow_mod(a1, p + 1, p2);

    // V2 = (A_{m2} - A_{m1}^{p+1}) / p; the quotient must have integral
    // coefficients for the criterion to make sense mod p.
    std::size_t deg = std::max(a2.size(), w.size());
    std::vector<std::uint64_t> v2(deg, 0);
    for (std::size_t i = 0; i < deg; ++i) {
        BigInt d = (i < a2.size() ? a2[i] : BigInt(0)) - (i < w.size() ? w[i] : BigInt(0));
        d %= p2;
        if (d < 0) d += p2;
        if (d % p != 0)
            throw integrality_error("v_polynomials: V2 coefficient " + std::to_string(i) +
                                    " not divisible by p");
        v2[i] = mpz_get_ui(BigInt(d / p).get_mpz_t()) % p;
    }
    std::vector<std::uint64_t> v1(a1.size());
    for (std::size_t i = 0; i < a1.size(); ++i) v1[i] = mpz_get_ui(a1[i].get_mpz_t()) % p;

    return VPolynomials{FpPoly(p, std::move(v1)), FpPoly(p, std::move(v2))};
}

HeightClass classify_from_v(const VPolynomials& v, std::uint64_t x) {
    if (v.v1.eval(x) != 0) return HeightClass::Height1;
    if (v.v2.eval(x) != 0) return HeightClass::Height2;
    return HeightClass::UndeterminedAtLeast3;
}

std::uint64_t v_x_image(FamilyId id, unsigned long p, unsigned long lambda) {
    if (lambda % p == 0) throw std::domain_error("v_x_image: lambda must be nonzero");
    BigInt mod(p);
    BigInt base = quasi_arg_constant(id) % mod;
    unsigned long power = id == FamilyId::QuasiDiagonalQuartic ? 12 : 15;
    BigInt lp;
    mpz_powm_ui(lp.get_mpz_t(), BigInt(lambda).get_mpz_t(), power, mod.get_mpz_t());
    return mpz_get_ui(mod_inverse(base * lp, mod).get_mpz_t());
}

// ---------------------------------------------------------------------------
// Unit roots
// ---------------------------------------------------------------------------

UnitRootReport unit_root_sb(const FormalGroupLogarithm& log, int s_max, long mu_max) {
    unsigned long p = log.p();
    if (s_max < 0 || mu_max < 1) throw std::domain_error("unit_root_sb: bad bounds");
    if (log.a_coeff_mod(p, 1).residue() == 0)
        throw std::domain_error("unit_root_sb: logarithm is not of height one");

    long prec = s_max + 1;
    BigInt high = p_power(p, static_cast<unsigned long>(s_max + 1));
    BigInt low = p_power(p, static_cast<unsigned long>(s_max));
    PadicInt num = log.a_coeff_mod(mpz_get_ui(high.get_mpz_t()), prec);
    PadicInt den = log.a_coeff_mod(mpz_get_ui(low.get_mpz_t()), prec);
    PadicInt alpha = num * den.inverse();

    UnitRootReport rep;
    rep.alpha = PadicUnitCertificate::certify(alpha);
    rep.s_max = s_max;
    rep.mu_max = mu_max;
    for (long mu = 1; mu <= mu_max; ++mu) {
        BigInt pw(1); // p^s
        for (int s = 0; s <= s_max; ++s) {
            // indices mu p^s and mu p^{s+1}; congruence holds mod p^{s+1}
            BigInt j_low = BigInt(mu) * pw;
            BigInt j_high = j_low * p;
            long prec_s = s + 1;
            PadicInt lhs = log.a_coeff_mod(mpz_get_ui(j_high.get_mpz_t()), prec_s);
            PadicInt rhs = log.a_coeff_mod(mpz_get_ui(j_low.get_mpz_t()), prec_s) *
                           alpha.with_precision(prec_s);
            if (lhs != rhs)
                throw congruence_violation("unit_root_sb: congruence failed at (mu, s) = (" +
                                               std::to_string(mu) + ", " + std::to_string(s) + ")",
                                           mu, s);
            rep.witnesses.push_back({mu, s, lhs.value() == 0 && rhs.value() == 0});
            pw *= p;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Limit identities
// ---------------------------------------------------------------------------

namespace {

// Truncated evaluation sum_{r < depth} f_r x^r mod p^K, where the f_r follow
// a hypergeometric term ratio supplied as integer factor lists.
BigInt dwork_partial_sum(const RelCtx& ctx, FamilyId id, const BigInt& x_unit, unsigned long depth,
                         long K) {
    // term ratios of the limit series:
    //   quartic 3F2: f_{r+1}/f_r = prod_{j=1..4}(4r+j) / ((r+1)^4 * 4^4)
    //   sextic  3F2: f_{r+1}/f_r = prod_{j=1..6}(6r+j) / ((r+1)^3 * prod(3r+j) * 12^3)
    //   jacobi  2F1: f_{r+1}/f_r = ((4r+1) / (4(r+1)))^2
    RelVal x = RelVal::from_int(ctx, x_unit);
    RelVal term = RelVal::from_int(ctx, BigInt(1));
    BigInt sum(0);
    BigInt pA = p_power(ctx.p, static_cast<unsigned long>(K));
    for (unsigned long r = 0; r < depth; ++r) {
        sum += term.to_mod(ctx, K);
        sum %= pA;
        switch (id) {
            case FamilyId::JacobiQuartic:
                term = term.mul_int(ctx, BigInt(4 * r + 1)).mul_int(ctx, BigInt(4 * r + 1));
                term = term.div_int(ctx, BigInt(4 * (r + 1))).div_int(ctx, BigInt(4 * (r + 1)));
                break;
            case FamilyId::QuarticPencil1:
            case FamilyId::QuarticPencil2:
            case FamilyId::QuarticPencil3:
                for (int j = 1; j <= 4; ++j) term = term.mul_int(ctx, BigInt(4 * r + j));
                for (int j = 0; j < 4; ++j) term = term.div_int(ctx, BigInt(4 * (r + 1)));
                break;
            default: // sextic pencils
                for (int j = 1; j <= 6; ++j) term = term.mul_int(ctx, BigInt(6 * r + j));
                for (int j = 1; j <= 3; ++j) term = term.div_int(ctx, BigInt(3 * r + j));
                for (int j = 0; j < 3; ++j) term = term.div_int(ctx, BigInt(12 * (r + 1)));
                break;
        }
        term = term.mul(ctx, x);
    }
    return sum;
}

} // namespace

LimitIdentityReport limit_identity_check(FamilyId id, unsigned long p,
                                         const std::vector<unsigned long>& c_residues,
                                         unsigned long lambda_residue, long precision) {
    const K3FamilySpec& spec = family_spec(id);
    bool jacobi = id == FamilyId::JacobiQuartic;
    bool quartic_pencil = id == FamilyId::QuarticPencil1 || id == FamilyId::QuarticPencil2 ||
                          id == FamilyId::QuarticPencil3;
    bool sextic_pencil = id == FamilyId::SexticPencil1 || id == FamilyId::SexticPencil2 ||
                         id == FamilyId::SexticPencil3 || id == FamilyId::SexticPencil4;
    if (!jacobi && !quartic_pencil && !sextic_pencil)
        throw unsupported_operation("limit_identity_check: no closed form for this family");
    long N = precision;
    if (N < 1) throw std::domain_error("limit_identity_check: precision must be >= 1");

    // Teichmuller lifts of the parameters (the compact formula needs them).
    std::vector<BigInt> c_lift;
    BigInt lambda_lift(0);
    for (unsigned long c : c_residues) c_lift.push_back(teichmuller(c, p, N).value());
    if (spec.has_lambda) {
        if (lambda_residue % p == 0)
            throw std::domain_error("limit_identity_check: lambda must be a unit");
        lambda_lift = teichmuller(lambda_residue, p, N).value();
    }
    FamilyInstance inst = FamilyInstance::make(id, p, c_lift, lambda_lift, N);
    FormalGroupLogarithm log = FormalGroupLogarithm::from_family(inst, N);

    if (log.a_coeff_mod(p, 1).residue() == 0)
        throw std::domain_error("limit_identity_check: instance is not of height one");

    // Congruence side: alpha = a(p^N)/a(p^{N-1}) in tau indexing.
    PadicInt num = log.a_coeff_mod(mpz_get_ui(p_power(p, static_cast<unsigned long>(N)).get_mpz_t()), N);
    PadicInt den =
        log.a_coeff_mod(mpz_get_ui(p_power(p, static_cast<unsigned long>(N - 1)).get_mpz_t()), N);
    PadicInt alpha = num * den.inverse();

    // Closed-form side: truncated Dwork ratio F_{<p^N}(x0) / F_{<p^{N-1}}(x0^p).
    RelCtx ctx(p, N);
    BigInt pN = p_power(p, static_cast<unsigned long>(N));
    unsigned long depth_hi = mpz_get_ui(pN.get_mpz_t());
    unsigned long depth_lo = depth_hi / p;

    BigInt x0;
    PadicInt prefactor(p, N, 1);
    std::string desc;
    if (jacobi) {
        x0 = 1;
        desc = "h(1)^2 against the a(m) = C(2m,m)^2 congruence chain";
    } else {
        BigInt c_hat(1);
        for (const auto& ci : c_lift) c_hat *= ci;
        BigInt lam_inv = mod_inverse(lambda_lift, pN);
        int power = quartic_pencil ? 4 : 3;
        BigInt li = 1;
        for (int i = 0; i < power; ++i) li = (li * lam_inv) % pN;
        x0 = (c_hat % pN * li) % pN;
        if (quartic_pencil) {
            // lambda^(p-1), exactly 1 for a Teichmuller lift
            BigInt lp;
            mpz_powm_ui(lp.get_mpz_t(), lambda_lift.get_mpz_t(), p - 1, pN.get_mpz_t());
            prefactor = PadicInt(p, N, lp);
            desc = "alpha = lambda^(p-1) f(c lambda^-4)";
        } else {
            // the stable value of (-3 lambda)^(p^s (p-1)/2) is the quadratic
            // character of -3 lambda: exactly +-1
            BigInt base = BigInt(BigInt(-3) * lambda_lift) % BigInt(p);
            if (base < 0) base += p;
            BigInt chi;
            mpz_powm_ui(chi.get_mpz_t(), base.get_mpz_t(), (p - 1) / 2, BigInt(p).get_mpz_t());
            prefactor = PadicInt(p, N, chi == 1 ? BigInt(1) : BigInt(-1));
            desc = "beta = (-3 lambda)^((p-1)/2) g(c lambda^-3)";
        }
    }

    BigInt x0p;
    mpz_powm_ui(x0p.get_mpz_t(), x0.get_mpz_t(), p, pN.get_mpz_t());
    BigInt hi = dwork_partial_sum(ctx, id, x0, depth_hi, N);
    BigInt lo = dwork_partial_sum(ctx, id, x0p, depth_lo, N);
    PadicInt ratio = PadicInt(p, N, hi) * PadicInt(p, N, lo).inverse();
    PadicInt closed = jacobi ? ratio * ratio : prefactor * ratio;

    LimitIdentityReport rep{alpha, closed, alpha == closed, desc};
    if (!rep.equal)
        throw identity_violation("limit_identity_check: " + desc + " failed", alpha.to_string(),
                                 closed.to_string());
    return rep;
}

// ---------------------------------------------------------------------------
// Supersingular divisibilities
// ---------------------------------------------------------------------------

DivisibilityReport supersingular_divisibility(const FamilyInstance& inst, int s_max,
                                              unsigned long m_bound) {
    unsigned long p = inst.p;
    FamilyId id = inst.spec->id;
    bool ok_class = false;
    if (id == FamilyId::JacobiQuartic || id == FamilyId::DiagonalQuartic)
        ok_class = p % 4 == 3;
    else if (id == FamilyId::DiagonalSextic)
        ok_class = p > 3 && p % 6 != 1;
    else
        throw unsupported_operation("supersingular_divisibility: lambda-free families only");
    if (!ok_class)
        throw std::domain_error("supersingular_divisibility: p is not in the supersingular class");

    DivisibilityReport rep;
    rep.p = p;
    unsigned long e = static_cast<unsigned long>(inst.spec->stride);
    for (unsigned long m = 1; m <= m_bound; ++m) {
        unsigned long j = e * m + 1;
        if (j % p != 0) continue;
        long required = 0;
        for (unsigned long jj = j; jj % p == 0; jj /= p) ++required;
        if (required > s_max) required = s_max;
        std::optional<long> v = family_coeff_valuation(inst, m);
        if (!v) throw std::logic_error("supersingular_divisibility: no fast valuation");
        ++rep.checked;
        rep.rows.push_back({m, j, required, *v});
        if (*v < required)
            throw divisibility_violation(
                "supersingular_divisibility: v_p(a(m)) < v_p(" + std::to_string(j) + ") at m = " +
                    std::to_string(m),
                static_cast<long>(m));
    }
    if (id == FamilyId::JacobiQuartic) {
        for (int s = 1; s <= s_max; ++s) {
            // p^s | C((p^(2s)-1)/2, (p^(2s)-1)/4)
            BigInt pw = p_power(p, static_cast<unsigned long>(2 * s));
            unsigned long top = mpz_get_ui(BigInt((pw - 1) / 2).get_mpz_t());
            unsigned long bot = mpz_get_ui(BigInt((pw - 1) / 4).get_mpz_t());
            long v = factorial_valuation(top, p) - factorial_valuation(bot, p) -
                     factorial_valuation(top - bot, p);
            rep.binomial_rows.emplace_back(s, v);
            if (v < s)
                throw divisibility_violation(
                    "supersingular_divisibility: central binomial valuation below s", s);
        }
    }
    return rep;
}

} // namespace k3fg
