#include "doctest.h"

#include "k3fg/errors.hpp"
#include "k3fg/fgl.hpp"
#include "k3fg/padic.hpp"

#include <set>

using namespace k3fg;

namespace {

FormalGroupLogarithm multiplicative_log(unsigned long p, long prec, int d) {
    std::vector<BigRational> c(static_cast<std::size_t>(d) + 1, BigRational(0));
    for (int n = 1; n <= d; ++n) c[static_cast<std::size_t>(n)] = BigRational(1) / BigRational(n);
    return FormalGroupLogarithm::custom(p, prec, c, "multiplicative");
}

} // namespace

TEST_CASE("additive law from l = tau") {
    std::vector<BigRational> c(9, BigRational(0));
    c[1] = 1;
    auto log = FormalGroupLogarithm::custom(7, 3, c, "additive");
    GroupLaw law = build_group_law(log, 8);
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; i + j <= 8; ++j) {
            BigRational expect(0);
            if ((i == 1 && j == 0) || (i == 0 && j == 1)) expect = 1;
            CHECK(law.g_exact.coeff(i, j) == expect);
        }
}

TEST_CASE("multiplicative law from l = sum tau^n/n") {
    auto log = multiplicative_log(5, 3, 10);
    GroupLaw law = build_group_law(log, 10);
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; i + j <= 10; ++j) {
            BigRational expect(0);
            if ((i == 1 && j == 0) || (i == 0 && j == 1)) expect = 1;
            if (i == 1 && j == 1) expect = -1;
            CHECK(law.g_exact.coeff(i, j) == expect);
        }
    CHECK(group_law_identity_ok(law));
    CHECK(group_law_commutative(law));
    CHECK(group_law_associative(law));
}

TEST_CASE("diagonal quartic law at p = 5 is p-integral with the group axioms") {
    auto inst = FamilyInstance::make(FamilyId::DiagonalQuartic, 5);
    auto log = FormalGroupLogarithm::from_family(inst, 4);
    GroupLaw law = build_group_law(log, 12); // throws on any integrality failure
    CHECK(group_law_identity_ok(law));
    CHECK(group_law_commutative(law));
    CHECK(group_law_associative(law));
}

TEST_CASE("quasi-diagonal pencil law is p-integral") {
    auto inst = FamilyInstance::make(FamilyId::QuasiDiagonalQuartic, 13, {}, BigInt(2));
    auto log = FormalGroupLogarithm::from_family(inst, 3);
    GroupLaw law = build_group_law(log, 14);
    CHECK(group_law_identity_ok(law));
    CHECK(group_law_commutative(law));
}

TEST_CASE("truncated parameter lifts bound the reachable precision") {
    auto inst = FamilyInstance::make(FamilyId::QuasiDiagonalQuartic, 5, {}, BigInt(2), 4);
    auto log = FormalGroupLogarithm::from_family(inst, 4);
    CHECK_THROWS_AS(build_group_law(log, 12), insufficient_precision);
}

TEST_CASE("height dichotomy for the diagonal families") {
    for (unsigned long p : {5ul, 13ul}) {
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::DiagonalQuartic, p), 3);
        CHECK(height_classify(log, 3).cls == HeightClass::Height1);
    }
    for (unsigned long p : {7ul, 11ul}) {
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::DiagonalQuartic, p), 3);
        HeightReport r = height_classify(log, 3);
        CHECK(r.cls == HeightClass::SupersingularUpTo);
        CHECK(reclassify_from_evidence(r) == r.cls);
    }
    for (unsigned long p : {7ul, 13ul}) {
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::DiagonalSextic, p), 3);
        CHECK(height_classify(log, 3).cls == HeightClass::Height1);
    }
    for (unsigned long p : {5ul, 11ul}) {
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::DiagonalSextic, p), 3);
        CHECK(height_classify(log, 3).cls == HeightClass::SupersingularUpTo);
    }
    // the multiplicative group has height 1
    CHECK(height_classify(multiplicative_log(7, 3, 8), 2).cls == HeightClass::Height1);
}

TEST_CASE("V polynomials at p = 13 match the printed values") {
    VPolynomials v = v_polynomials(FamilyId::QuasiDiagonalQuartic, 13);
    CHECK(v.v1 == FpPoly(13, {1, 10}));

    // 8x(x+2)(x+6)(x+10)(x^2+8x+10)(x^8+9x^7+5x^6+12x^5+6x^3+3x^2+7)
    FpPoly expect = FpPoly::constant(13, 8);
    expect = expect * FpPoly(13, {0, 1});
    expect = expect * FpPoly(13, {2, 1});
    expect = expect * FpPoly(13, {6, 1});
    expect = expect * FpPoly(13, {10, 1});
    expect = expect * FpPoly(13, {10, 8, 1});
    expect = expect * FpPoly(13, {7, 0, 3, 6, 0, 12, 5, 9, 1});
    CHECK(v.v2 == expect);

    CHECK(fp_gcd(v.v1, v.v2).degree() == 0);
    CHECK(classify_from_v(v, 9) == HeightClass::Height2);
    CHECK(v_x_image(FamilyId::QuasiDiagonalQuartic, 13, 1) == 4);
    CHECK(classify_from_v(v, 4) == HeightClass::Height1);
}

TEST_CASE("V polynomials at p = 31 match the printed sextic data") {
    VPolynomials v = v_polynomials(FamilyId::QuasiDiagonalSextic, 31);
    CHECK(v.v1 == FpPoly(31, {1, 20}));
    CHECK(v.v2.degree() == 32);
    CHECK(v.v2.coeff(0) == 0);
    CHECK(v.v2.coeff(1) == 7);
    CHECK(v.v2.coeff(2) == 2);
    CHECK(v.v2.coeff(32) == 24);
    auto fac = fp_factor(v.v2);
    std::multiset<long> degrees;
    for (const auto& f : fac.factors) {
        CHECK(f.multiplicity == 1);
        degrees.insert(f.poly.degree());
    }
    CHECK(degrees == std::multiset<long>{1, 3, 6, 22});
    CHECK(fac.unit == 24);
    CHECK(fp_gcd(v.v1, v.v2).degree() == 0);
    CHECK(classify_from_v(v, 17) == HeightClass::Height2);
}

TEST_CASE("V-criterion agrees with direct height classification") {
    SplitMix64 rng(31337);
    for (unsigned long p : {13ul, 31ul}) {
        for (FamilyId id : {FamilyId::QuasiDiagonalQuartic, FamilyId::QuasiDiagonalSextic}) {
            if (id == FamilyId::QuasiDiagonalSextic && p == 5) continue;
            VPolynomials v = v_polynomials(id, p);
            for (int t = 0; t < 30; ++t) {
                unsigned long lambda = 1 + rng.below(p - 1);
                auto inst = FamilyInstance::make(id, p, {}, BigInt(lambda));
                auto log = FormalGroupLogarithm::from_family(inst, 3);
                HeightReport hr = height_classify(log, 2);
                CHECK(hr.cls == classify_from_v(v, v_x_image(id, p, lambda)));
                CHECK(reclassify_from_evidence(hr) == hr.cls);
            }
        }
    }
}

TEST_CASE("unit root congruences for height-one instances") {
    auto inst = FamilyInstance::make(FamilyId::DiagonalQuartic, 13);
    auto log = FormalGroupLogarithm::from_family(inst, 4);
    UnitRootReport rep = unit_root_sb(log, 2, 3);
    CHECK(rep.alpha.witness == log.a_coeff_mod(13, 1).residue());
    CHECK(rep.witnesses.size() == 9);

    // stability: alpha at s_max and s_max + 1 agree mod p^(s_max+1)
    UnitRootReport rep2 = unit_root_sb(log, 3, 1);
    CHECK(rep2.alpha.element.with_precision(3) == rep.alpha.element.with_precision(3));

    // supersingular instance is rejected
    auto ss = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::DiagonalQuartic, 7), 3);
    CHECK_THROWS_AS(unit_root_sb(ss, 2, 2), std::domain_error);
}

TEST_CASE("jacobi quartic: pi^2 = Gamma_5(1/4)^4 / Gamma_5(1/2)^2 mod 5^4") {
    auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::JacobiQuartic, 5), 4);
    UnitRootReport rep = unit_root_sb(log, 3, 3);
    PadicInt g14 = padic_gamma(BigRational(1) / 4, 5, 4);
    PadicInt g12 = padic_gamma(BigRational(1) / 2, 5, 4);
    PadicInt gamma_side = g14.pow(4) * g12.pow(2).inverse();
    CHECK(rep.alpha.element == gamma_side);
}

TEST_CASE("limit identities") {
    // h(1)^2 against the congruence chain, p = 5, N = 3
    auto jac = limit_identity_check(FamilyId::JacobiQuartic, 5, {}, 0, 3);
    CHECK(jac.equal);

    // degenerate N = 1 layer
    auto base = limit_identity_check(FamilyId::QuarticPencil1, 13, {1, 1, 1, 1}, 3, 1);
    CHECK(base.equal);

    // quartic pencil at p = 13 and a few unit lambdas, N = 2
    for (unsigned long lambda : {1ul, 2ul, 5ul, 7ul}) {
        auto inst = FamilyInstance::make(FamilyId::QuarticPencil1, 13, {}, BigInt(lambda));
        auto log = FormalGroupLogarithm::from_family(inst, 1);
        if (log.a_coeff_mod(13, 1).residue() == 0) continue; // not height one at this lambda
        auto rep = limit_identity_check(FamilyId::QuarticPencil1, 13, {1, 1, 1, 1}, lambda, 2);
        CHECK(rep.equal);
    }

    // sextic pencil, p = 13, N = 2
    for (unsigned long lambda : {1ul, 3ul, 4ul}) {
        auto inst = FamilyInstance::make(FamilyId::SexticPencil1, 13, {}, BigInt(lambda));
        auto log = FormalGroupLogarithm::from_family(inst, 1);
        if (log.a_coeff_mod(13, 1).residue() == 0) continue;
        auto rep = limit_identity_check(FamilyId::SexticPencil1, 13, {1, 1, 1}, lambda, 2);
        CHECK(rep.equal);
    }
}

TEST_CASE("supersingular divisibilities") {
    // p = 3, s = 1: C(4, 2) = 6 is divisible by 3
    auto jac3 = FamilyInstance::make(FamilyId::JacobiQuartic, 3);
    DivisibilityReport r3 = supersingular_divisibility(jac3, 1, 20);
    REQUIRE(!r3.binomial_rows.empty());
    CHECK(r3.binomial_rows[0].second >= 1);

    // p = 7 diagonal quartic, all n <= 100
    auto dq = FamilyInstance::make(FamilyId::DiagonalQuartic, 7);
    DivisibilityReport r7 = supersingular_divisibility(dq, 3, 400);
    CHECK(r7.checked > 0);

    // p = 11 diagonal sextic, n <= 100
    auto ds = FamilyInstance::make(FamilyId::DiagonalSextic, 11);
    DivisibilityReport r11 = supersingular_divisibility(ds, 3, 300);
    CHECK(r11.checked > 0);

    // outside the supersingular class the operation refuses
    auto good = FamilyInstance::make(FamilyId::DiagonalQuartic, 13);
    CHECK_THROWS_AS(supersingular_divisibility(good, 2, 50), std::domain_error);
}
