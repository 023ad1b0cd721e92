#include "k3fg/families.hpp"

#include "k3fg/detail/relval.hpp"
#include "k3fg/errors.hpp"

#include <climits>
#include <stdexcept>

namespace k3fg {

using detail::RelCtx;
using detail::RelVal;

namespace {

std::vector<K3FamilySpec> build_catalog() {
    std::vector<K3FamilySpec> cat;

    auto diag4 = std::vector<std::vector<int>>{{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}};
    auto diag6 = std::vector<std::vector<int>>{{6, 0, 0}, {0, 6, 0}, {0, 0, 6}};

    cat.push_back({FamilyId::JacobiQuartic, "jacobi-quartic", 4, 0, {}, {}, false, 0, {}, 1,
                   "a(m) = C(2m,m)^2"});
    cat.push_back({FamilyId::DiagonalQuartic, "diagonal-quartic", 1, 4, diag4,
                   {"c1", "c2", "c3", "c4"}, false, 0, {}, 4,
                   "a(4n) = c^n (4n)!/(n!)^4"});
    cat.push_back({FamilyId::QuarticPencil1, "quartic-pencil-1", 1, 4, diag4,
                   {"c1", "c2", "c3", "c4", "lambda"}, true, 4, {1, 1, 1, 1}, 1,
                   "a(m) = sum_u C(m,4u) (4u)!/(u!)^4 c^u (-4 lambda)^(m-4u)"});
    cat.push_back({FamilyId::QuarticPencil2, "quartic-pencil-2", 1, 4,
                   {{3, 1, 0, 0}, {0, 3, 1, 0}, {0, 0, 3, 1}, {1, 0, 0, 3}},
                   {"c1", "c2", "c3", "c4", "lambda"}, true, 4, {1, 1, 1, 1}, 1,
                   "a(m) = sum_u C(m,4u) (4u)!/(u!)^4 c^u (-4 lambda)^(m-4u)"});
    cat.push_back({FamilyId::QuarticPencil3, "quartic-pencil-3", 1, 4,
                   {{2, 1, 1, 0}, {0, 2, 1, 1}, {1, 0, 2, 1}, {1, 1, 0, 2}},
                   {"c1", "c2", "c3", "c4", "lambda"}, true, 4, {1, 1, 1, 1}, 1,
                   "a(m) = sum_u C(m,4u) (4u)!/(u!)^4 c^u (-4 lambda)^(m-4u)"});
    cat.push_back({FamilyId::DiagonalSextic, "diagonal-sextic", 2, 3, diag6,
                   {"c1", "c2", "c3"}, false, 0, {}, 3,
                   "b(3n) = c^n (3n)!/(n!)^3"});
    cat.push_back({FamilyId::SexticPencil1, "sextic-pencil-1", 2, 3, diag6,
                   {"c1", "c2", "c3", "lambda"}, true, 3, {2, 2, 2}, 1,
                   "b(m) = sum_u C(m,3u) (3u)!/(u!)^3 c^u (-3 lambda)^(m-3u)"});
    cat.push_back({FamilyId::SexticPencil2, "sextic-pencil-2", 2, 3,
                   {{5, 1, 0}, {0, 5, 1}, {1, 0, 5}},
                   {"c1", "c2", "c3", "lambda"}, true, 3, {2, 2, 2}, 1,
                   "b(m) = sum_u C(m,3u) (3u)!/(u!)^3 c^u (-3 lambda)^(m-3u)"});
    cat.push_back({FamilyId::SexticPencil3, "sextic-pencil-3", 2, 3,
                   {{4, 2, 0}, {0, 4, 2}, {2, 0, 4}},
                   {"c1", "c2", "c3", "lambda"}, true, 3, {2, 2, 2}, 1,
                   "b(m) = sum_u C(m,3u) (3u)!/(u!)^3 c^u (-3 lambda)^(m-3u)"});
    cat.push_back({FamilyId::SexticPencil4, "sextic-pencil-4", 2, 3,
                   {{3, 2, 1}, {1, 3, 2}, {2, 1, 3}},
                   {"c1", "c2", "c3", "lambda"}, true, 3, {2, 2, 2}, 1,
                   "b(m) = sum_u C(m,3u) (3u)!/(u!)^3 c^u (-3 lambda)^(m-3u)"});
    cat.push_back({FamilyId::QuasiDiagonalQuartic, "quasi-diagonal-quartic", 1, 4,
                   {{4, 0, 0, 0}, {1, 3, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}},
                   {"lambda"}, true, 12, {1, 1, 1, 1}, 12,
                   "a(m) = sum_u m!/((2u)!(3u)!^2(4u)!(m-12u)!) (-12 lambda)^(m-12u)"});
    cat.push_back({FamilyId::QuasiDiagonalSextic, "quasi-diagonal-sextic", 2, 3,
                   {{6, 0, 0}, {1, 5, 0}, {0, 0, 6}},
                   {"lambda"}, true, 15, {2, 2, 2}, 15,
                   "b(m) = sum_u m!/((4u)!(5u)!(6u)!(m-15u)!) (-15 lambda)^(m-15u)"});
    return cat;
}

} // namespace

const std::vector<K3FamilySpec>& family_catalog() {
    static const std::vector<K3FamilySpec> cat = build_catalog();
    return cat;
}

const K3FamilySpec& family_spec(FamilyId id) {
    for (const auto& s : family_catalog())
        if (s.id == id) return s;
    throw std::logic_error("family_spec: unknown id");
}

const char* family_name(FamilyId id) { return family_spec(id).name.c_str(); }

std::optional<FamilyId> family_by_name(const std::string& name) {
    for (const auto& s : family_catalog())
        if (s.name == name) return s.id;
    return std::nullopt;
}

FamilyInstance FamilyInstance::make(FamilyId id, unsigned long p, std::vector<BigInt> c,
                                    BigInt lambda, std::optional<long> param_precision) {
    const K3FamilySpec& spec = family_spec(id);
    std::size_t want_c = spec.param_names.size() - (spec.has_lambda ? 1 : 0);
    if (c.empty() && want_c > 0) c.assign(want_c, BigInt(1));
    if (c.size() != want_c)
        throw std::domain_error(std::string("FamilyInstance: ") + spec.name + " expects " +
                                std::to_string(want_c) + " c parameters");
    FamilyInstance inst;
    inst.spec = &spec;
    inst.p = p;
    inst.c = std::move(c);
    inst.lambda = std::move(lambda);
    inst.param_precision = param_precision;
    inst.smoothness_checked = false;
    for (const auto& ci : inst.c)
        if (mpz_divisible_ui_p(ci.get_mpz_t(), p))
            throw std::domain_error("FamilyInstance: c parameters must be units mod p");
    return inst;
}

BigInt FamilyInstance::c_product() const {
    BigInt prod(1);
    for (const auto& ci : c) prod *= ci;
    return prod;
}

// ---------------------------------------------------------------------------
// Coefficient generators.  Per-u term shape, shared by the mod-p^K and the
// exact route:
//   pencils         term_u = C(m,ku) core(u) c^u (-k lambda)^(m-ku)
//   quasi families  term_u = m! / (parts(u)! (m-ku)!) (-k lambda)^(m-ku)
// where k = lambda_multiplier and core(u) is the diagonal multinomial.
// ---------------------------------------------------------------------------

namespace {

struct TermShape {
    int k;                    // lambda multiplier
    // fills numerator/denominator factors of term_{u+1} / term_u, without the
    // c * (-k lambda)^(-k) part
    void (*ratio)(unsigned long m, unsigned long u, std::vector<long>& num, std::vector<long>& den);
    bool uses_c;
};

void ratio_quartic(unsigned long m, unsigned long u, std::vector<long>& num, std::vector<long>& den) {
    for (int j = 0; j < 4; ++j) num.push_back(static_cast<long>(m - 4 * u - j));
    for (int j = 0; j < 4; ++j) den.push_back(static_cast<long>(u + 1));
}

void ratio_sextic(unsigned long m, unsigned long u, std::vector<long>& num, std::vector<long>& den) {
    for (int j = 0; j < 3; ++j) num.push_back(static_cast<long>(m - 3 * u - j));
    for (int j = 0; j < 3; ++j) den.push_back(static_cast<long>(u + 1));
}

void ratio_quasi_quartic(unsigned long m, unsigned long u, std::vector<long>& num, std::vector<long>& den) {
    for (int j = 0; j < 12; ++j) num.push_back(static_cast<long>(m - 12 * u - j));
    for (int j = 1; j <= 2; ++j) den.push_back(static_cast<long>(2 * u + j));
    for (int j = 1; j <= 3; ++j) {
        den.push_back(static_cast<long>(3 * u + j));
        den.push_back(static_cast<long>(3 * u + j));
    }
    for (int j = 1; j <= 4; ++j) den.push_back(static_cast<long>(4 * u + j));
}

void ratio_quasi_sextic(unsigned long m, unsigned long u, std::vector<long>& num, std::vector<long>& den) {
    for (int j = 0; j < 15; ++j) num.push_back(static_cast<long>(m - 15 * u - j));
    for (int j = 1; j <= 4; ++j) den.push_back(static_cast<long>(4 * u + j));
    for (int j = 1; j <= 5; ++j) den.push_back(static_cast<long>(5 * u + j));
    for (int j = 1; j <= 6; ++j) den.push_back(static_cast<long>(6 * u + j));
}

std::optional<TermShape> term_shape(FamilyId id) {
    switch (id) {
        case FamilyId::QuarticPencil1:
        case FamilyId::QuarticPencil2:
        case FamilyId::QuarticPencil3:
            return TermShape{4, ratio_quartic, true};
        case FamilyId::SexticPencil1:
        case FamilyId::SexticPencil2:
        case FamilyId::SexticPencil3:
        case FamilyId::SexticPencil4:
            return TermShape{3, ratio_sextic, true};
        case FamilyId::QuasiDiagonalQuartic:
            return TermShape{12, ratio_quasi_quartic, false};
        case FamilyId::QuasiDiagonalSextic:
            return TermShape{15, ratio_quasi_sextic, false};
        default:
            return std::nullopt;
    }
}

// Diagonal multinomial at lambda = 0 (and the whole coefficient for the
// lambda-free families): spec.zero_mod | m required for a nonzero value.
BigRational diagonal_core_exact(const FamilyInstance& inst, unsigned long m) {
    switch (inst.spec->id) {
        case FamilyId::JacobiQuartic: {
            BigInt b = binomial(2 * m, m);
            return BigRational(b * b);
        }
        case FamilyId::DiagonalQuartic:
        case FamilyId::QuarticPencil1:
        case FamilyId::QuarticPencil2:
        case FamilyId::QuarticPencil3: {
            if (m % 4 != 0) return BigRational(0);
            unsigned long n = m / 4;
            BigInt v = factorial(4 * n) / (pow_ui(factorial(n), 4));
            return BigRational(v * pow_ui(inst.c_product(), n));
        }
        case FamilyId::DiagonalSextic:
        case FamilyId::SexticPencil1:
        case FamilyId::SexticPencil2:
        case FamilyId::SexticPencil3:
        case FamilyId::SexticPencil4: {
            if (m % 3 != 0) return BigRational(0);
            unsigned long n = m / 3;
            BigInt v = factorial(3 * n) / (pow_ui(factorial(n), 3));
            return BigRational(v * pow_ui(inst.c_product(), n));
        }
        case FamilyId::QuasiDiagonalQuartic: {
            if (m % 12 != 0) return BigRational(0);
            unsigned long n = m / 12;
            BigInt v = factorial(12 * n) /
                       (factorial(2 * n) * factorial(3 * n) * factorial(3 * n) * factorial(4 * n));
            return BigRational(v);
        }
        case FamilyId::QuasiDiagonalSextic: {
            if (m % 15 != 0) return BigRational(0);
            unsigned long n = m / 15;
            BigInt v = factorial(15 * n) / (factorial(4 * n) * factorial(5 * n) * factorial(6 * n));
            return BigRational(v);
        }
    }
    throw std::logic_error("diagonal_core_exact: unreachable");
}

RelVal rel_factorial(const RelCtx& ctx, unsigned long n) {
    RelVal acc = RelVal::from_int(ctx, BigInt(1));
    BigInt batch(1);
    for (unsigned long j = 2; j <= n; ++j) {
        batch *= j;
        if (mpz_sizeinbase(batch.get_mpz_t(), 2) > 512) {
            acc = acc.mul_int(ctx, batch);
            batch = 1;
        }
    }
    return acc.mul_int(ctx, batch);
}

RelVal diagonal_core_rel(const RelCtx& ctx, const FamilyInstance& inst, unsigned long m) {
    switch (inst.spec->id) {
        case FamilyId::JacobiQuartic: {
            // C(2m,m)^2 = (prod_{j=1..m} (m+j)/j)^2
            RelVal acc = RelVal::from_int(ctx, BigInt(1));
            for (unsigned long j = 1; j <= m; ++j)
                acc = acc.mul_int(ctx, BigInt(m + j)).div_int(ctx, BigInt(j));
            return acc.mul(ctx, acc);
        }
        case FamilyId::DiagonalQuartic: {
            if (m % 4 != 0) return RelVal::make_zero();
            unsigned long n = m / 4;
            RelVal v = rel_factorial(ctx, 4 * n).div(ctx, rel_factorial(ctx, n).pow(ctx, 4));
            return v.mul(ctx, RelVal::from_int(ctx, inst.c_product()).pow(ctx, n));
        }
        case FamilyId::DiagonalSextic: {
            if (m % 3 != 0) return RelVal::make_zero();
            unsigned long n = m / 3;
            RelVal v = rel_factorial(ctx, 3 * n).div(ctx, rel_factorial(ctx, n).pow(ctx, 3));
            return v.mul(ctx, RelVal::from_int(ctx, inst.c_product()).pow(ctx, n));
        }
        default:
            break;
    }
    // pencils at lambda = 0 degenerate to their diagonal core
    const auto shape = term_shape(inst.spec->id);
    if (!shape) throw std::logic_error("diagonal_core_rel: unexpected family");
    unsigned long k = static_cast<unsigned long>(shape->k);
    if (m % k != 0) return RelVal::make_zero();
    unsigned long u = m / k;
    RelVal acc = RelVal::from_int(ctx, BigInt(1));
    std::vector<long> num, den;
    for (unsigned long t = 0; t < u; ++t) {
        num.clear();
        den.clear();
        shape->ratio(m, t, num, den);
        for (long x : num) acc = acc.mul_int(ctx, BigInt(x));
        for (long x : den) acc = acc.div_int(ctx, BigInt(x));
        if (shape->uses_c) acc = acc.mul_int(ctx, inst.c_product());
    }
    // The ratio chain starting from term_0 = (-k lambda)^m assumed lambda^(-k)
    // factors; at lambda = 0 we instead build the bare multinomial directly:
    // term_u = m!/(parts! (m-ku)!) with the (m-ku)! part collapsing to 0! = 1.
    return acc;
}

} // namespace

BigRational family_log_coeff_exact(const FamilyInstance& inst, unsigned long m) {
    const auto shape = term_shape(inst.spec->id);
    if (!shape || inst.lambda == 0) {
        // lambda-free families, or pencils specialized at lambda = 0
        if (!shape) return diagonal_core_exact(inst, m);
        unsigned long k = static_cast<unsigned long>(shape->k);
        if (m % k != 0) return BigRational(0);
        return diagonal_core_exact(inst, m);
    }

    unsigned long k = static_cast<unsigned long>(shape->k);
    BigInt c = inst.c_product();
    BigInt neg_k_lambda = BigInt(-static_cast<long>(k)) * inst.lambda;
    BigRational sum(0);
    for (unsigned long u = 0; k * u <= m; ++u) {
        BigInt core;
        if (inst.spec->id == FamilyId::QuasiDiagonalQuartic) {
            core = factorial(12 * u) /
                   (factorial(2 * u) * factorial(3 * u) * factorial(3 * u) * factorial(4 * u));
        } else if (inst.spec->id == FamilyId::QuasiDiagonalSextic) {
            core = factorial(15 * u) / (factorial(4 * u) * factorial(5 * u) * factorial(6 * u));
        } else if (shape->k == 4) {
            core = factorial(4 * u) / pow_ui(factorial(u), 4);
        } else {
            core = factorial(3 * u) / pow_ui(factorial(u), 3);
        }
        BigInt term = binomial(m, k * u) * core;
        if (shape->uses_c) term *= pow_ui(c, u);
        term *= pow_ui(neg_k_lambda, m - k * u);
        sum += BigRational(term);
    }
    return sum;
}

PadicInt family_log_coeff(const FamilyInstance& inst, unsigned long m, long precision) {
    RelCtx ctx(inst.p, precision);
    const auto shape = term_shape(inst.spec->id);
    BigInt modulus = p_power(inst.p, static_cast<unsigned long>(precision));

    if (!shape || inst.lambda % modulus == 0) {
        // lambda-free family, or a lift of lambda that is 0 at this precision
        if (shape && inst.lambda % modulus == 0 && inst.lambda != 0)
            throw std::domain_error("family_log_coeff: lambda lift vanishes mod p^N; pass lambda = 0");
        if (shape && m % static_cast<unsigned long>(shape->k) != 0) return PadicInt(inst.p, precision, 0);
        RelVal v = diagonal_core_rel(ctx, inst, m);
        return PadicInt(inst.p, precision, v.to_mod(ctx, precision));
    }

    unsigned long k = static_cast<unsigned long>(shape->k);
    BigInt c = inst.c_product();
    BigInt neg_k_lambda = BigInt(-static_cast<long>(k)) * inst.lambda;
    RelVal lam_k_inv = RelVal::from_int(ctx, neg_k_lambda).pow(ctx, k);
    RelVal cfac = RelVal::from_int(ctx, c);

    RelVal term = RelVal::from_int(ctx, neg_k_lambda).pow(ctx, m);
    BigInt sum(0);
    std::vector<long> num, den;
    for (unsigned long u = 0; k * u <= m; ++u) {
        if (u > 0) {
            num.clear();
            den.clear();
            shape->ratio(m, u - 1, num, den);
            for (long x : num) term = term.mul_int(ctx, BigInt(x));
            for (long x : den) term = term.div_int(ctx, BigInt(x));
            if (shape->uses_c) term = term.mul(ctx, cfac);
            term = term.div(ctx, lam_k_inv);
        }
        sum += term.to_mod(ctx, precision);
    }
    return PadicInt(inst.p, precision, sum);
}

std::optional<long> family_coeff_valuation(const FamilyInstance& inst, unsigned long m) {
    unsigned long p = inst.p;
    switch (inst.spec->id) {
        case FamilyId::JacobiQuartic: {
            long v = factorial_valuation(2 * m, p) - 2 * factorial_valuation(m, p);
            return 2 * v;
        }
        case FamilyId::DiagonalQuartic: {
            if (m % 4 != 0) return LONG_MAX;
            unsigned long n = m / 4;
            return factorial_valuation(4 * n, p) - 4 * factorial_valuation(n, p);
        }
        case FamilyId::DiagonalSextic: {
            if (m % 3 != 0) return LONG_MAX;
            unsigned long n = m / 3;
            return factorial_valuation(3 * n, p) - 3 * factorial_valuation(n, p);
        }
        default:
            return std::nullopt;
    }
}

BigRational family_tau_coeff_exact(const FamilyInstance& inst, unsigned long j) {
    int e = inst.spec->stride;
    if (j == 0 || (j - 1) % static_cast<unsigned long>(e) != 0) return BigRational(0);
    return family_log_coeff_exact(inst, (j - 1) / static_cast<unsigned long>(e));
}

PadicInt family_tau_coeff(const FamilyInstance& inst, unsigned long j, long precision) {
    int e = inst.spec->stride;
    if (j == 0 || (j - 1) % static_cast<unsigned long>(e) != 0) return PadicInt(inst.p, precision, 0);
    return family_log_coeff(inst, (j - 1) / static_cast<unsigned long>(e), precision);
}

// ---------------------------------------------------------------------------
// Multinomial expansion oracle.
// ---------------------------------------------------------------------------

namespace {

void oracle_recurse(const std::vector<std::vector<int>>& rows, const std::vector<BigRational>& coeffs,
                    std::size_t idx, unsigned long remaining, std::vector<int>& target,
                    std::vector<unsigned long>& chosen, BigRational& acc, unsigned long m) {
    if (idx == rows.size()) {
        bool ok = remaining == 0;
        for (int t : target) ok = ok && t == 0;
        if (!ok) return;
        BigInt multi = factorial(m);
        for (unsigned long kk : chosen) multi /= factorial(kk);
        BigRational term(multi);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            if (chosen[i] == 0) continue;
            BigRational base = coeffs[i];
            BigRational powv(1);
            for (unsigned long t = 0; t < chosen[i]; ++t) powv *= base;
            term *= powv;
        }
        acc += term;
        return;
    }
    unsigned long bound = remaining;
    for (std::size_t v = 0; v < target.size(); ++v) {
        int ex = rows[idx][v];
        if (ex > 0) bound = std::min(bound, static_cast<unsigned long>(target[v] / ex));
    }
    for (unsigned long kk = 0; kk <= bound; ++kk) {
        if (kk > 0)
            for (std::size_t v = 0; v < target.size(); ++v) target[v] -= rows[idx][v];
        chosen[idx] = kk;
        oracle_recurse(rows, coeffs, idx + 1, remaining - kk, target, chosen, acc, m);
    }
    // restore
    for (std::size_t v = 0; v < target.size(); ++v) target[v] += rows[idx][v] * static_cast<int>(bound);
    chosen[idx] = 0;
}

} // namespace

BigRational multinomial_oracle(const FamilyInstance& inst, unsigned long m) {
    const K3FamilySpec& spec = *inst.spec;
    if (spec.id == FamilyId::JacobiQuartic)
        throw unsupported_operation(
            "multinomial_oracle: jacobi-quartic arises from an elliptic fibration; use the "
            "Vandermonde identity check instead");

    std::vector<std::vector<int>> rows = spec.monomials;
    std::vector<BigRational> coeffs;
    if (inst.c.empty())
        coeffs.assign(rows.size(), BigRational(1));
    else
        for (const auto& ci : inst.c) coeffs.emplace_back(ci);
    if (spec.has_lambda) {
        rows.push_back(spec.lambda_monomial);
        coeffs.emplace_back(BigInt(-spec.lambda_multiplier) * inst.lambda);
    }

    int per_var = spec.stride == 2 ? 2 * static_cast<int>(m) : static_cast<int>(m);
    std::vector<int> target(static_cast<std::size_t>(spec.num_vars), per_var);
    std::vector<unsigned long> chosen(rows.size(), 0);
    BigRational acc(0);
    oracle_recurse(rows, coeffs, 0, m, target, chosen, acc, m);
    return acc;
}

// ---------------------------------------------------------------------------
// Limit series and quasi-diagonal pFq forms.
// ---------------------------------------------------------------------------

HGParams family_limit_series(FamilyId id) {
    auto q = [](long n, long d) -> BigRational { return BigRational(n) / BigRational(d); };
    switch (id) {
        case FamilyId::JacobiQuartic:
            return HGParams({q(1, 4), q(1, 4)}, {BigRational(1)});
        case FamilyId::DiagonalQuartic:
        case FamilyId::QuarticPencil1:
        case FamilyId::QuarticPencil2:
        case FamilyId::QuarticPencil3:
            return HGParams({q(1, 4), q(2, 4), q(3, 4)}, {BigRational(1), BigRational(1)});
        case FamilyId::DiagonalSextic:
        case FamilyId::SexticPencil1:
        case FamilyId::SexticPencil2:
        case FamilyId::SexticPencil3:
        case FamilyId::SexticPencil4:
            return HGParams({q(1, 6), q(3, 6), q(5, 6)}, {BigRational(1), BigRational(1)});
        case FamilyId::QuasiDiagonalQuartic:
            return HGParams(farey_expand_all({{6, 1}, {12, 1}}),
                            farey_expand_all({{1, 2}, {2, 1}, {3, 1}}));
        case FamilyId::QuasiDiagonalSextic:
            return HGParams(farey_expand_all({{10, 1}, {30, 1}}),
                            farey_expand_all({{1, 2}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}));
    }
    throw std::logic_error("family_limit_series: unreachable");
}

std::vector<BigRational> limit_series_coeffs(FamilyId id, unsigned long count) {
    return pfq_coefficients(family_limit_series(id), count);
}

HGParams quasi_pfq_params(FamilyId id, unsigned long m) {
    if (id == FamilyId::QuasiDiagonalQuartic) {
        std::vector<BigRational> upper;
        for (int i = 0; i < 12; ++i)
            upper.push_back(BigRational(-static_cast<long>(m) + i) / BigRational(12));
        return HGParams(std::move(upper), farey_expand_all({{1, 3}, {2, 2}, {3, 2}, {4, 1}}));
    }
    if (id == FamilyId::QuasiDiagonalSextic) {
        std::vector<BigRational> upper;
        for (int i = 0; i < 15; ++i)
            upper.push_back(BigRational(-static_cast<long>(m) + i) / BigRational(15));
        return HGParams(std::move(upper),
                        farey_expand_all({{1, 2}, {2, 2}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}));
    }
    throw unsupported_operation("quasi_pfq_params: only the quasi-diagonal families have this form");
}

BigInt quasi_arg_constant(FamilyId id) {
    if (id == FamilyId::QuasiDiagonalQuartic) return p_power(2, 10) * p_power(3, 6);
    if (id == FamilyId::QuasiDiagonalSextic)
        return pow_ui(BigInt(4), 4) * pow_ui(BigInt(5), 5) * pow_ui(BigInt(6), 6);
    throw unsupported_operation("quasi_arg_constant: only the quasi-diagonal families have this form");
}

} // namespace k3fg
