#include "doctest.h"

#include "k3fg/errors.hpp"
#include "k3fg/families.hpp"
#include "oracles.hpp"

using namespace k3fg;

TEST_CASE("catalog coefficients at the documented indices") {
    auto diag = FamilyInstance::make(FamilyId::DiagonalQuartic, 5);
    CHECK(family_log_coeff_exact(diag, 4) == 24); // c = 1, n = 1: (4n)!/(n!)^4
    CHECK(family_log_coeff_exact(diag, 5) == 0);  // off stride

    auto jac = FamilyInstance::make(FamilyId::JacobiQuartic, 5);
    CHECK(family_log_coeff_exact(jac, 2) == 36); // C(4,2)^2

    auto quasi = FamilyInstance::make(FamilyId::QuasiDiagonalQuartic, 13, {}, BigInt(0));
    CHECK(family_log_coeff_exact(quasi, 12) == 277200); // C(12,2) C(10,3) C(7,4)

    auto qs = FamilyInstance::make(FamilyId::QuasiDiagonalSextic, 31, {}, BigInt(0));
    CHECK(family_log_coeff_exact(qs, 15) == binomial(15, 5) * binomial(10, 6));
}

TEST_CASE("mod-p^N route agrees with the exact route") {
    SplitMix64 rng(420);
    for (unsigned long p : {5ul, 13ul}) {
        for (const auto& spec : family_catalog()) {
            std::size_t nc = spec.param_names.size() - (spec.has_lambda ? 1 : 0);
            std::vector<BigInt> c;
            for (std::size_t i = 0; i < nc; ++i) c.emplace_back(1 + rng.below(p - 1));
            BigInt lambda(static_cast<long>(rng.below(p)));
            FamilyInstance inst = FamilyInstance::make(spec.id, p, c, lambda);
            long prec = 3;
            BigInt mod = p_power(p, 3);
            for (unsigned long m : {1ul, 4ul, 7ul, 12ul, 15ul, 24ul}) {
                BigRational exact = family_log_coeff_exact(inst, m);
                PadicInt got = family_log_coeff(inst, m, prec);
                CHECK(got.value() == rational_mod(exact, mod));
            }
        }
    }
}

TEST_CASE("multinomial oracle at the worked examples") {
    // diagonal quartic, m = 4: 4! c1 c2 c3 c4
    auto diag = FamilyInstance::make(FamilyId::DiagonalQuartic, 7, {BigInt(2), BigInt(3), BigInt(1), BigInt(1)});
    CHECK(multinomial_oracle(diag, 4) == 24 * 6);
    CHECK(multinomial_oracle(diag, 3) == 0);

    // diagonal sextic, m = 3: 3! c
    auto ds = FamilyInstance::make(FamilyId::DiagonalSextic, 7, {BigInt(2), BigInt(1), BigInt(1)});
    CHECK(multinomial_oracle(ds, 3) == 12);

    // quasi-diagonal quartic at lambda = 0: (12n)!/((2n)!(4n)!(3n)!(3n)!)
    auto quasi = FamilyInstance::make(FamilyId::QuasiDiagonalQuartic, 13, {}, BigInt(0));
    for (unsigned long n = 1; n <= 3; ++n) {
        BigRational expect(factorial(12 * n) /
                           (factorial(2 * n) * factorial(4 * n) * factorial(3 * n) * factorial(3 * n)));
        CHECK(multinomial_oracle(quasi, 12 * n) == expect);
        CHECK(expect == BigRational(binomial(12 * n, 2 * n) * binomial(10 * n, 3 * n) *
                                    binomial(7 * n, 4 * n)));
    }

    auto jac = FamilyInstance::make(FamilyId::JacobiQuartic, 5);
    CHECK_THROWS_AS(multinomial_oracle(jac, 2), unsupported_operation);
}

TEST_CASE("oracle agreement with the generators across the catalog") {
    SplitMix64 rng(777);
    for (unsigned long p : {5ul, 13ul}) {
        for (const auto& spec : family_catalog()) {
            if (spec.id == FamilyId::JacobiQuartic) continue;
            std::size_t nc = spec.param_names.size() - (spec.has_lambda ? 1 : 0);
            for (int trial = 0; trial < 2; ++trial) {
                std::vector<BigInt> c;
                for (std::size_t i = 0; i < nc; ++i) c.emplace_back(1 + rng.below(p - 1));
                BigInt lambda(static_cast<long>(rng.below(p)));
                FamilyInstance inst = FamilyInstance::make(spec.id, p, c, lambda);
                for (unsigned long m = 0; m <= 18; ++m)
                    CHECK(multinomial_oracle(inst, m) == family_log_coeff_exact(inst, m));
            }
        }
    }
}

TEST_CASE("jacobi-quartic Vandermonde identity up to m = 60") {
    for (unsigned long m = 0; m <= 60; ++m) {
        BigInt sum(0);
        for (unsigned long r = 0; r <= m; ++r) {
            BigInt b = binomial(m, r);
            sum += b * b;
        }
        CHECK(binomial(2 * m, m) * sum == binomial(2 * m, m) * binomial(2 * m, m));
    }
}

TEST_CASE("limit series closed forms") {
    auto quartic = limit_series_coeffs(FamilyId::DiagonalQuartic, 11);
    auto sextic = limit_series_coeffs(FamilyId::DiagonalSextic, 11);
    for (unsigned long r = 0; r <= 10; ++r) {
        BigRational q_expect = BigRational(binomial(4 * r, r) * binomial(3 * r, r) * binomial(2 * r, r)) /
                               BigRational(p_power(4, 4 * r));
        CHECK(quartic[r] == q_expect);
        BigRational s_expect = BigRational(binomial(6 * r, r) * binomial(5 * r, r) * binomial(4 * r, r)) /
                               BigRational(p_power(12, 3 * r));
        CHECK(sextic[r] == s_expect);
        // denominator support: powers of 2, resp. of 6
        BigInt qd = quartic[r].get_den();
        while (qd % 2 == 0) qd /= 2;
        CHECK(qd == 1);
        BigInt sd = sextic[r].get_den();
        while (sd % 2 == 0) sd /= 2;
        while (sd % 3 == 0) sd /= 3;
        CHECK(sd == 1);
    }
    for (const auto& spec : family_catalog())
        CHECK(limit_series_coeffs(spec.id, 1)[0] == 1);
}

TEST_CASE("quasi-diagonal pFq closed form agrees with the finite sum at unit lambda") {
    // a(m) = (-12 lambda)^m 12F11(...; (2^10 3^6 lambda^12)^{-1}) for lambda a unit
    for (unsigned long m : {7ul, 13ul, 20ul, 26ul}) {
        auto inst = FamilyInstance::make(FamilyId::QuasiDiagonalQuartic, 13, {}, BigInt(1));
        HGParams params = quasi_pfq_params(FamilyId::QuasiDiagonalQuartic, m);
        BigRational z = BigRational(1) / BigRational(quasi_arg_constant(FamilyId::QuasiDiagonalQuartic));
        BigRational prefactor = pow_ui(BigInt(-12), m);
        CHECK(prefactor * pfq_terminating(params, z) == family_log_coeff_exact(inst, m));
    }
    for (unsigned long m : {8ul, 16ul, 23ul}) {
        auto inst = FamilyInstance::make(FamilyId::QuasiDiagonalSextic, 31, {}, BigInt(1));
        HGParams params = quasi_pfq_params(FamilyId::QuasiDiagonalSextic, m);
        BigRational z = BigRational(1) / BigRational(quasi_arg_constant(FamilyId::QuasiDiagonalSextic));
        BigRational prefactor = pow_ui(BigInt(-15), m);
        CHECK(prefactor * pfq_terminating(params, z) == family_log_coeff_exact(inst, m));
    }
}

TEST_CASE("the 12F11 arity of the quasi-diagonal quartic") {
    HGParams params = quasi_pfq_params(FamilyId::QuasiDiagonalQuartic, 25);
    CHECK(params.upper.size() == 12);
    CHECK(params.lower.size() == 11);
    HGParams s = quasi_pfq_params(FamilyId::QuasiDiagonalSextic, 25);
    CHECK(s.upper.size() == 15);
    CHECK(s.lower.size() == 14);
}

TEST_CASE("limit series of the quasi families against finite coefficients") {
    // x-coefficients of A_{p^s - 1} converge to the 6F5 coefficients: check
    // the first coefficient at p = 13 (both reduce to 10 mod 13).
    auto a_limit = limit_series_coeffs(FamilyId::QuasiDiagonalQuartic, 2);
    CHECK(rational_mod(a_limit[1], BigInt(13)) == 10);
}

TEST_CASE("c parameters must be units") {
    CHECK_THROWS_AS(FamilyInstance::make(FamilyId::DiagonalQuartic, 5,
                                         {BigInt(5), BigInt(1), BigInt(1), BigInt(1)}),
                    std::domain_error);
}
