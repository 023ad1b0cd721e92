#include "doctest.h"

#include "k3fg/errors.hpp"
#include "k3fg/weil.hpp"
#include "k3fg/fgl.hpp"

#include <cmath>

using namespace k3fg;

namespace {

std::vector<BigInt> to_big(std::vector<long> v) {
    std::vector<BigInt> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

std::vector<BigInt> poly_mul_z(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

bool parts_equal(const std::vector<PadicInt>& got, const std::vector<BigInt>& want, unsigned long p,
                 long prec) {
    if (got.size() != want.size()) return false;
    BigInt m = p_power(p, static_cast<unsigned long>(prec));
    for (std::size_t i = 0; i < got.size(); ++i) {
        BigInt w = want[i] % m;
        if (w < 0) w += m;
        if (got[i].value() != w) return false;
    }
    return true;
}

} // namespace

TEST_CASE("newton polygon basics") {
    // 1 - T: a single slope-0 root
    auto np = newton_polygon(to_big({1, -1}), 7);
    REQUIRE(np.slopes.size() == 1);
    CHECK(np.slopes[0].first == 0);
    CHECK(np.slopes[0].second == 1);

    // 1 - 26T + 25T^2 at p = 5: slopes 0 and 2
    np = newton_polygon(to_big({1, -26, 25}), 5);
    REQUIRE(np.slopes.size() == 2);
    CHECK(np.slopes[0].first == 0);
    CHECK(np.slopes[0].second == 1);
    CHECK(np.slopes[1].first == 2);
    CHECK(np.slopes[1].second == 1);

    // 1 - pT: slope 1
    np = newton_polygon(to_big({1, -13}), 13);
    REQUIRE(np.slopes.size() == 1);
    CHECK(np.slopes[0].first == 1);

    CHECK_THROWS_AS(newton_polygon({}, 5), std::domain_error);
    CHECK_THROWS_AS(newton_polygon(to_big({5, 1}), 5), std::domain_error);
}

TEST_CASE("hull validity: points on or above, vertices among points") {
    SplitMix64 rng(8671);
    for (int t = 0; t < 20; ++t) {
        std::vector<BigInt> c{BigInt(1)};
        int deg = 2 + static_cast<int>(rng.below(8));
        for (int i = 1; i <= deg; ++i) {
            BigInt v = BigInt(1 + rng.below(40)) * p_power(3, rng.below(4));
            if (rng.below(2)) v = -v;
            c.push_back(v);
        }
        auto np = newton_polygon(c, 3);
        // piecewise check: every point lies on or above the hull
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            long vi = int_valuation(c[i], 3);
            for (std::size_t s = 1; s < np.vertices.size(); ++s) {
                auto [x0, y0] = np.vertices[s - 1];
                auto [x1, y1] = np.vertices[s];
                if (static_cast<long>(i) < x0 || static_cast<long>(i) > x1) continue;
                // (vi - y0) * (x1 - x0) >= (y1 - y0) * (i - x0)
                CHECK((vi - y0) * (x1 - x0) >= (y1 - y0) * (static_cast<long>(i) - x0));
            }
        }
        for (const auto& vtx : np.vertices) {
            REQUIRE(vtx.first < static_cast<long>(c.size()));
            CHECK(c[static_cast<std::size_t>(vtx.first)] != 0);
            CHECK(int_valuation(c[static_cast<std::size_t>(vtx.first)], 3) == vtx.second);
        }
        // multiplicities add up to the degree of the nonzero support
        int total = 0;
        for (const auto& s : np.slopes) total += s.second;
        long top = static_cast<long>(c.size()) - 1;
        while (c[static_cast<std::size_t>(top)] == 0) --top;
        CHECK(total == top);
    }
}

TEST_CASE("single-slope inputs pass through slope_factorize") {
    WeilPoly f(to_big({1, -2}), 5); // unit root, slope 0
    auto sf = slope_factorize(f, 6);
    CHECK(sf.h == 1);
    CHECK(parts_equal(sf.p_lt, to_big({1, -2}), 5, 6));
    CHECK(sf.p_1.size() == 1);
    CHECK(sf.p_gt.size() == 1);
}

TEST_CASE("slope_factorize splits 1 - 26T + 25T^2 over Z_5") {
    WeilPoly f(to_big({1, -26, 25}), 5);
    auto sf = slope_factorize(f, 6);
    CHECK(sf.h == 1);
    CHECK(parts_equal(sf.p_lt, to_big({1, -1}), 5, 6));
    CHECK(parts_equal(sf.p_gt, to_big({1, -25}), 5, 6));
    CHECK(sf.p_1.size() == 1);

    auto fe = functional_equation_check(sf);
    CHECK(fe.holds);
    CHECK(fe.c == PadicInt(5, 6, BigInt(-25)));
}

TEST_CASE("slope_factorize recovers constructed three-part products") {
    SplitMix64 rng(4242);
    for (unsigned long p : {5ul, 13ul}) {
        for (int trial = 0; trial < 10; ++trial) {
            // slope-0 part: unit constant and unit leading
            int h = 1 + static_cast<int>(rng.below(3));
            std::vector<BigInt> lt{BigInt(1)};
            for (int i = 1; i <= h; ++i) lt.push_back(BigInt(static_cast<long>(rng.below(2 * p)) - static_cast<long>(p)));
            lt[static_cast<std::size_t>(h)] = BigInt(1 + rng.below(p - 1));

            // slope-1 part: product of (1 - p u T)
            std::vector<BigInt> mid{BigInt(1)};
            int k = static_cast<int>(rng.below(3));
            for (int i = 0; i < k; ++i)
                mid = poly_mul_z(mid, {BigInt(1), BigInt(-static_cast<long>(p * (1 + rng.below(p - 1))))});

            // slope-2 part
            std::vector<BigInt> gt{BigInt(1)};
            int g = 1 + static_cast<int>(rng.below(2));
            for (int i = 0; i < g; ++i)
                gt = poly_mul_z(gt, {BigInt(1), BigInt(-static_cast<long>(p * p * (1 + rng.below(p - 1))))});

            WeilPoly f(poly_mul_z(poly_mul_z(lt, mid), gt), p);
            auto sf = slope_factorize(f, 6);
            CHECK(sf.h == h);
            CHECK(parts_equal(sf.p_lt, lt, p, 6));
            CHECK(parts_equal(sf.p_1, mid, p, 6));
            CHECK(parts_equal(sf.p_gt, gt, p, 6));
        }
    }
}

TEST_CASE("slope_factorize handles fractional slopes") {
    unsigned long p = 5;
    // lt with slope 1/2 twice, gt with slope 3/2 twice
    std::vector<BigInt> lt{BigInt(1), BigInt(2 * 5), BigInt(3 * 5)};
    std::vector<BigInt> gt{BigInt(1), BigInt(4 * 25), BigInt(2 * 125)};
    std::vector<BigInt> mid{BigInt(1), BigInt(-5 * 3)};
    WeilPoly f(poly_mul_z(poly_mul_z(lt, mid), gt), p);
    auto sf = slope_factorize(f, 6);
    CHECK(sf.h == 2);
    CHECK(parts_equal(sf.p_lt, lt, p, 6));
    CHECK(parts_equal(sf.p_1, mid, p, 6));
    CHECK(parts_equal(sf.p_gt, gt, p, 6));
    REQUIRE(sf.segments.size() == 3);
    CHECK(sf.segments[0].slope == make_frac(1, 2));
    CHECK(sf.segments[2].slope == make_frac(3, 2));
}

TEST_CASE("functional equation on the supersingular shape and random mirrors") {
    // P_lt = P_gt = 1 holds vacuously with c = 1
    WeilPoly ss(to_big({1, -5}), 5); // pure slope 1
    auto sf = slope_factorize(ss, 5);
    CHECK(sf.h == 0);
    auto fe = functional_equation_check(sf);
    CHECK(fe.holds);
    CHECK(fe.c == PadicInt(5, 5, BigInt(1)));

    // random mirror pairs with unit +-1 leading lt coefficient
    SplitMix64 rng(90210);
    for (int trial = 0; trial < 10; ++trial) {
        unsigned long p = 7;
        int h = 1 + static_cast<int>(rng.below(3));
        std::vector<BigInt> lt{BigInt(1)};
        for (int i = 1; i < h; ++i) lt.push_back(BigInt(static_cast<long>(rng.below(13)) - 6));
        lt.push_back(BigInt(rng.below(2) ? 1 : -1));
        BigInt q2 = p_power(p, 2);
        // d_j = q^{2j} b_{h-j} / b_h
        std::vector<BigInt> gt(static_cast<std::size_t>(h) + 1);
        BigInt scale(1);
        for (int j = 0; j <= h; ++j) {
            gt[static_cast<std::size_t>(j)] = scale * lt[static_cast<std::size_t>(h - j)] / lt[static_cast<std::size_t>(h)];
            scale *= q2;
        }
        WeilPoly f(poly_mul_z(lt, gt), p);
        auto sf2 = slope_factorize(f, 6);
        CHECK(sf2.h == h);
        auto fe2 = functional_equation_check(sf2);
        CHECK(fe2.holds);
        BigInt expect_c = p_power(p, static_cast<unsigned long>(2 * h)) / lt[static_cast<std::size_t>(h)];
        CHECK(fe2.c == PadicInt(p, 6, expect_c));
    }
}

TEST_CASE("power structure recovers constructed powers") {
    // squarefree input: r = 1
    auto ps = power_structure(to_big({1, 4, -3, 7}));
    CHECK(ps.r == 1);
    CHECK(ps.q == to_big({1, 4, -3, 7}));

    // (1 - T + T^2)^2
    auto sq = poly_mul_z(to_big({1, -1, 1}), to_big({1, -1, 1}));
    ps = power_structure(sq);
    CHECK(ps.r == 2);
    CHECK(ps.q == to_big({1, -1, 1}));
    CHECK(ps.verdict == "certified");

    // (1 - 3T + T^2)^3
    auto base = to_big({1, -3, 1});
    auto cube = poly_mul_z(poly_mul_z(base, base), base);
    ps = power_structure(cube);
    CHECK(ps.r == 3);
    CHECK(ps.q == base);

    // random powers round-trip
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 12; ++trial) {
        unsigned r = 1 + static_cast<unsigned>(rng.below(6));
        int d = 1 + static_cast<int>(rng.below(5));
        std::vector<BigInt> q{BigInt(1)};
        for (int i = 1; i <= d; ++i) q.push_back(BigInt(static_cast<long>(rng.below(9)) - 4));
        if (q.back() == 0) q.back() = 1;
        std::vector<BigInt> full{BigInt(1)};
        for (unsigned t = 0; t < r; ++t) full = poly_mul_z(full, q);
        auto got = power_structure(full);
        CHECK(got.r % r == 0); // recovered exponent is maximal, a multiple of r
        std::vector<BigInt> re{BigInt(1)};
        for (unsigned t = 0; t < got.r; ++t) re = poly_mul_z(re, got.q);
        CHECK(re == full);
    }
}

TEST_CASE("possible_r at the table corners") {
    CHECK(possible_r(2, 1) == std::vector<unsigned>{1});
    CHECK(possible_r(18, 6) == std::vector<unsigned>{1, 3});
    CHECK(possible_r(20, 10) == std::vector<unsigned>{1, 2, 5, 10});
    CHECK_THROWS_AS(possible_r(20, 11), std::domain_error);
    CHECK_THROWS_AS(possible_r(7, 1), std::domain_error);
}

TEST_CASE("Hecke polynomial of the Jacobi quartic: slope degrees meet the height") {
    // 1 - (pi^2 + pi'^2) T + p^2 T^2 for p = 1 mod 4; the P_<1 degree must be
    // the formal-group height and its reciprocal root the congruence unit
    // root.  The sign convention for pi is pinned by matching alpha.
    for (unsigned long p : {5ul, 13ul}) {
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::JacobiQuartic, p), 3);
        UnitRootReport rep = unit_root_sb(log, 2, 1);
        PadicInt alpha = rep.alpha.element;

        // pi = a + bi with a^2 + b^2 = p: both trace signs as candidates
        long a = 0, b = 0;
        for (long x = 1; x * x < static_cast<long>(p); ++x) {
            long rest = static_cast<long>(p) - x * x;
            long y = static_cast<long>(std::lround(std::sqrt(static_cast<double>(rest))));
            if (y * y == rest) { a = x; b = y; break; }
        }
        REQUIRE(a * a + b * b == static_cast<long>(p));
        long trace2 = 2 * (a * a - b * b); // pi^2 + pi'^2 up to sign
        bool matched = false;
        for (long sign : {1L, -1L}) {
            WeilPoly hecke({BigInt(1), BigInt(-sign * trace2), BigInt(p) * BigInt(p)}, p);
            auto sf = slope_factorize(hecke, 3);
            REQUIRE(sf.h == 1); // height one: P_<1 is linear
            REQUIRE(sf.p_1.size() == 1);
            auto fe = functional_equation_check(sf);
            REQUIRE(fe.holds);
            // reciprocal root of P_<1 is -coefficient
            PadicInt root = -sf.p_lt[1];
            if (root == alpha) matched = true;
        }
        CHECK(matched);
    }

    // supersingular shape: (1 - pT)^2 has P_<1 = P_>1 = 1
    for (unsigned long p : {7ul, 11ul}) {
        WeilPoly hecke({BigInt(1), BigInt(-2 * static_cast<long>(p)), BigInt(p) * BigInt(p)}, p);
        auto sf = slope_factorize(hecke, 4);
        CHECK(sf.h == 0);
        CHECK(sf.p_gt.size() == 1);
        auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::JacobiQuartic, p), 3);
        CHECK(height_classify(log, 2).cls == HeightClass::SupersingularUpTo);
    }
}
