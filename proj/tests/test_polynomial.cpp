#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "gpikit/elliptope.hpp"
#include "gpikit/polynomial.hpp"

using namespace gpikit;

namespace {

Rational rq(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Poly3 va() { return Poly3::variable(0); }
Poly3 vb() { return Poly3::variable(1); }
Poly3 vc() { return Poly3::variable(2); }

std::vector<ExponentVector> even_triples(int max_sum, int min_entry = 0) {
    std::vector<ExponentVector> out;
    for (int p1 = min_entry; p1 <= max_sum; p1 += 2)
        for (int p2 = min_entry; p1 + p2 <= max_sum; p2 += 2)
            for (int p3 = min_entry; p1 + p2 + p3 <= max_sum; p3 += 2) out.push_back({p1, p2, p3});
    return out;
}

}  // namespace

TEST_CASE("phi closed forms") {
    Poly3 phi222 = phi_polynomial({2, 2, 2});
    Poly3 expected = Poly3(1) + Poly3(2) * va() * va() + Poly3(2) * vb() * vb() +
                     Poly3(2) * vc() * vc() + Poly3(8) * va() * vb() * vc();
    CHECK(phi222 == expected);
    CHECK(phi222.to_text() == "1 + 2*a^2 + 2*b^2 + 2*c^2 + 8*a*b*c");

    CHECK(phi_polynomial({2, 2, 0}) == Poly3(1) + Poly3(2) * va() * va());
    CHECK(phi_polynomial({6, 0, 0}) == Poly3(15));
    CHECK(phi_polynomial({0, 0, 0}) == Poly3(1));

    CHECK(twoD_phi(2, 2) == Poly3(1) + Poly3(2) * va() * va());
    CHECK(twoD_phi(4, 2) == Poly3(3) + Poly3(12) * va() * va());
    CHECK(twoD_phi(4, 2).evaluate(Rational(1), Rational(0), Rational(0)) == 15);
    CHECK(twoD_phi(8, 0) == Poly3(105));
}

TEST_CASE("phi constant term and degree bound") {
    for (const auto& p : even_triples(12)) {
        Poly3 phi = phi_polynomial(p);
        CHECK(phi.constant_term() == Rational(gaussian_moment_product(p)));
        CHECK(phi.degree() <= total_degree(p) / 2);
    }
}

TEST_CASE("phi construction guards") {
    CHECK_THROWS_AS(phi_polynomial({42, 0, 0}), DegreeTooLarge);
    CHECK_THROWS_AS(phi_polynomial({2, 2}), DimensionMismatch);
    CHECK_THROWS_AS(phi_polynomial({-2, 2, 2}), InvalidArgument);
    CHECK_THROWS_AS(twoD_phi(-2, 2), InvalidArgument);
    CHECK_THROWS_AS(twoD_phi(40, 4), DegreeTooLarge);
}

TEST_CASE("evaluate") {
    Poly3 phi222 = phi_polynomial({2, 2, 2});
    CHECK(phi222.evaluate(Rational(0), Rational(0), Rational(0)) == 1);
    CHECK(phi222.evaluate(Rational(1), Rational(1), Rational(1)) == 15);
    CHECK(phi222.evaluate(rq(1, 2), rq(1, 2), rq(1, 2)) == rq(7, 2));
    CHECK(phi222.evaluate(0.5, 0.5, 0.5) == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(phi222.evaluate(1.0, 1.0, 1.0) == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("differentiate") {
    Poly3 q = Poly3(1) + Poly3(2) * va() * va();
    CHECK(differentiate(q, 0) == Poly3(4) * va());
    CHECK(differentiate(Poly3(8) * va() * vb() * vc(), 1) == Poly3(8) * va() * vc());
    CHECK(differentiate(Poly3(15), 2).is_zero());

    auto [da, db, dc] = gradient(phi_polynomial({2, 2, 2}));
    CHECK(da == Poly3(4) * va() + Poly3(8) * vb() * vc());
    CHECK(db == Poly3(4) * vb() + Poly3(8) * va() * vc());
    CHECK(dc == Poly3(4) * vc() + Poly3(8) * va() * vb());
}

TEST_CASE("poly arithmetic and text form") {
    Poly3 zero;
    CHECK(zero.is_zero());
    CHECK(zero.degree() == -1);
    CHECK(zero.to_text() == "0");

    Poly3 q = va() - vb() * vb();
    CHECK(q.to_text() == "a - b^2");
    Poly3 r = Poly3(rq(-1, 2)) * va() + vc();
    CHECK(r.to_text() == "-1/2*a + c");

    CHECK((q - q).is_zero());
    CHECK(-q + q == Poly3());
    CHECK(q * Poly3() == Poly3());
    CHECK(Poly3(3) * Poly3(rq(1, 3)) == Poly3(1));

    Poly3 s;
    s.add_term({1, 0, 0}, rq(1, 2));
    s.add_term({1, 0, 0}, rq(1, 2));
    CHECK(s == va());
    s.add_term({1, 0, 0}, Rational(-1));
    CHECK(s.is_zero());
    CHECK_THROWS_AS(s.add_term({-1, 0, 0}, Rational(1)), InvalidArgument);
}

TEST_CASE("variable helpers") {
    Poly3 phi = phi_polynomial({4, 2, 2});
    CHECK(permute_vars(phi, {0, 1, 2}) == phi);
    CHECK(permute_vars(permute_vars(phi, {1, 2, 0}), {2, 0, 1}) == phi);
    CHECK_THROWS_AS(permute_vars(phi, {0, 0, 1}), InvalidArgument);

    CHECK(eval_var(phi_polynomial({2, 2, 2}), 2, Rational(0)) ==
          Poly3(1) + Poly3(2) * va() * va() + Poly3(2) * vb() * vb());
    CHECK(fold_var(va() * vb(), 1, 0, Rational(1)) == va() * va());
    CHECK(fold_var(vb() * vb() * vc(), 1, 0, Rational(-1)) == va() * va() * vc());
    CHECK_THROWS_AS(fold_var(va(), 0, 0, Rational(1)), InvalidArgument);
}

TEST_CASE("symmetry under exponent and variable permutation") {
    for (const auto& p : {ExponentVector{4, 2, 2}, ExponentVector{6, 4, 2}, ExponentVector{2, 4, 6}}) {
        Poly3 phi = phi_polynomial(p);
        // swap X1,X2: a fixed, b <-> c
        CHECK(permute_vars(phi_polynomial({p[1], p[0], p[2]}), {0, 2, 1}) == phi);
        // swap X1,X3: b fixed, a <-> c
        CHECK(permute_vars(phi_polynomial({p[2], p[1], p[0]}), {2, 1, 0}) == phi);
        // swap X2,X3: c fixed, a <-> b
        CHECK(permute_vars(phi_polynomial({p[0], p[2], p[1]}), {1, 0, 2}) == phi);
    }
}

TEST_CASE("coefficients of phi are nonnegative integers") {
    for (const auto& p : even_triples(16)) {
        Poly3 phi = phi_polynomial(p);
        for (const auto& [m, coeff] : phi.terms()) {
            CHECK(coeff.get_den() == 1);
            CHECK(coeff >= 0);
        }
    }
}

TEST_CASE("gradient of phi vanishes at the origin") {
    for (const auto& p : even_triples(14)) {
        auto [da, db, dc] = gradient(phi_polynomial(p));
        CHECK(da.constant_term() == 0);
        CHECK(db.constant_term() == 0);
        CHECK(dc.constant_term() == 0);
    }
}

TEST_CASE("derivative identity") {
    for (const auto& p :
         {ExponentVector{2, 2, 0}, ExponentVector{2, 2, 2}, ExponentVector{0, 2, 2},
          ExponentVector{4, 2, 2}, ExponentVector{6, 4, 2}, ExponentVector{3, 2, 1}}) {
        IdentityReport report = check_derivative_identity(p);
        CHECK(report.pass);
        REQUIRE(report.checks.size() == 3);
        for (const auto& check : report.checks) CHECK(check.residual.is_zero());
    }

    // spot values from the (2,2,0) and (2,2,2) reductions
    CHECK(differentiate(phi_polynomial({2, 2, 0}), 0) == Poly3(4) * va());
    CHECK(Poly3(4) * phi_polynomial({1, 1, 0}) == Poly3(4) * va());
    CHECK(Poly3(4) * phi_polynomial({1, 1, 2}) == Poly3(4) * va() + Poly3(8) * vb() * vc());
}

TEST_CASE("stein reduction") {
    for (const auto& p : {ExponentVector{2, 2, 0}, ExponentVector{2, 2, 2}, ExponentVector{4, 0, 0},
                          ExponentVector{4, 2, 2}, ExponentVector{6, 4, 2}}) {
        IdentityReport report = check_stein_reduction(p);
        CHECK(report.pass);
        CHECK_FALSE(report.checks.empty());
    }

    // p=(2,2,2), first coordinate: 2*Phi == 2*Phi(0,2,2) + a*dPhi/da + b*dPhi/db
    Poly3 phi = phi_polynomial({2, 2, 2});
    Poly3 rhs = Poly3(2) * phi_polynomial({0, 2, 2}) + va() * differentiate(phi, 0) +
                vb() * differentiate(phi, 1);
    CHECK(Poly3(2) * phi == rhs);

    IdentityCheck link = stein_reduction_check({4, 2, 2}, 0);
    CHECK(link.residual.is_zero());
    CHECK_THROWS_AS(stein_reduction_check({2, 0, 2}, 1), InvalidArgument);
    CHECK_THROWS_AS(stein_reduction_check({2, 2, 2}, 3), InvalidArgument);
}

TEST_CASE("edge reduction") {
    for (const auto& p : {ExponentVector{2, 2, 2}, ExponentVector{4, 2, 2}, ExponentVector{4, 4, 2},
                          ExponentVector{6, 4, 2}}) {
        IdentityReport report = check_edge_reduction(p);
        CHECK(report.pass);
        REQUIRE(report.checks.size() == 2);
    }

    // Phi(a,a,1) for p=(2,2,2) collapses to the (2,4) pair moment 3+12a^2.
    Poly3 collapsed = fold_var(eval_var(phi_polynomial({2, 2, 2}), 2, Rational(1)), 1, 0, Rational(1));
    CHECK(collapsed == Poly3(3) + Poly3(12) * va() * va());
    CHECK(collapsed == twoD_phi(2, 4));

    // Odd p3 flips the sign on the c=-1 edge and is still exact.
    CHECK(check_edge_reduction({2, 1, 1}).pass);
    Poly3 minus = fold_var(eval_var(phi_polynomial({2, 1, 1}), 2, Rational(-1)), 1, 0, Rational(-1));
    CHECK(minus == -(Poly3(1) + Poly3(2) * va() * va()));
}

TEST_CASE("raw integration by parts on monomials") {
    for (const auto& m : {ExponentVector{1, 2, 0}, ExponentVector{2, 2, 2}, ExponentVector{3, 3, 3},
                          ExponentVector{5, 2, 2}, ExponentVector{0, 0, 0}}) {
        for (int i = 0; i < 3; ++i) {
            IdentityCheck check = check_ipp_identity(m, i);
            CHECK(check.residual.is_zero());
        }
    }
    CHECK_THROWS_AS(check_ipp_identity({2, 2, 2}, 5), InvalidArgument);
    CHECK_THROWS_AS(check_ipp_identity({16, 0, 0}, 0), DegreeTooLarge);
}

TEST_CASE("twoD phi is even with positive coefficients") {
    for (int p1 = 2; p1 <= 10; p1 += 2) {
        for (int p2 = 2; p1 + p2 <= 12; p2 += 2) {
            Poly3 q = twoD_phi(p1, p2);
            for (const auto& [m, coeff] : q.terms()) {
                CHECK(m[0] % 2 == 0);
                CHECK(m[1] == 0);
                CHECK(m[2] == 0);
                CHECK(coeff > 0);
            }
            CHECK(differentiate(q, 0).constant_term() == 0);
            Poly3 second = differentiate(differentiate(q, 0), 0);
            for (int s = 0; s <= 200; ++s) {
                double t = -1.0 + s * 0.01;
                CHECK(second.evaluate(t, 0.0, 0.0) > 0.0);
            }
        }
    }
}

TEST_CASE("finite differences match the exact gradient") {
    const double h = 1e-5;
    for (const auto& p : {ExponentVector{2, 2, 2}, ExponentVector{4, 2, 2}}) {
        Poly3 phi = phi_polynomial(p);
        auto grad = gradient(phi);
        const Poly3* parts[3] = {&grad.da, &grad.db, &grad.dc};
        for (const auto& pt : interior_points(20, 2024)) {
            double x[3] = {pt.a, pt.b, pt.c};
            for (int v = 0; v < 3; ++v) {
                double lo[3] = {x[0], x[1], x[2]};
                double hi[3] = {x[0], x[1], x[2]};
                lo[v] -= h;
                hi[v] += h;
                double fd = (phi.evaluate(hi[0], hi[1], hi[2]) - phi.evaluate(lo[0], lo[1], lo[2])) /
                            (2.0 * h);
                double exact = parts[v]->evaluate(x[0], x[1], x[2]);
                CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST_CASE("term records") {
    auto records = to_records(phi_polynomial({2, 2, 2}));
    REQUIRE(records.size() == 5);
    CHECK(records[0].i == 0);
    CHECK(records[0].numerator == "1");
    CHECK(records[0].denominator == "1");
    CHECK(records[1].i == 2);
    CHECK(records[1].numerator == "2");
    CHECK(records[4].i == 1);
    CHECK(records[4].j == 1);
    CHECK(records[4].k == 1);
    CHECK(records[4].numerator == "8");

    auto half = to_records(Poly3(rq(-1, 2)));
    REQUIRE(half.size() == 1);
    CHECK(half[0].numerator == "-1");
    CHECK(half[0].denominator == "2");
}
