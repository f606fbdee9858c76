#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "gpikit/verifier.hpp"

using namespace gpikit;

TEST_CASE("grid_scan at the smallest case") {
    ScanResult scan = grid_scan({2, 2, 2}, 0.25);
    CHECK(scan.pass);
    CHECK(scan.phi_at_identity == 1.0);
    CHECK(scan.phi_at_identity_exact == "1");
    CHECK(scan.min_value == 1.0);
    CHECK(scan.min_value_exact == "1");
    CHECK(scan.margin == 0.0);
    CHECK(scan.margin_exact == "0");
    CHECK(scan.argmin.a == 0.0);
    CHECK(scan.argmin.b == 0.0);
    CHECK(scan.argmin.c == 0.0);
    CHECK(scan.origin_on_grid);
    CHECK(scan.origin_is_argmin);
    CHECK(scan.strict_away_from_origin);
    CHECK(scan.resolution == 0.25);
    CHECK(scan.points > 0);
    CHECK(scan.rows.empty());
}

TEST_CASE("grid_scan margins and rows") {
    ScanResult scan = grid_scan({4, 2, 2}, 0.25, 0, true);
    CHECK(scan.pass);
    CHECK(scan.min_value == 3.0);  // (4-1)!! * 1 * 1
    CHECK(scan.min_value_exact == "3");
    REQUIRE(static_cast<long long>(scan.rows.size()) == scan.points);

    double best = scan.rows.front().phi;
    for (const GridRow& row : scan.rows) {
        best = std::min(best, row.phi);
        CHECK(row.margin == doctest::Approx(row.phi - scan.phi_at_identity).epsilon(1e-14));
    }
    CHECK(best == scan.min_value);

    // Phi at the comonotone corner dominates everything else on the lattice.
    ScanResult small = grid_scan({2, 2, 2}, 1.0, 0, true);
    CHECK(small.points == 11);
    bool corner_seen = false;
    for (const GridRow& row : small.rows)
        if (row.point.a == 1.0 && row.point.b == 1.0 && row.point.c == 1.0) {
            corner_seen = true;
            CHECK(row.phi == 15.0);
        }
    CHECK(corner_seen);
}

TEST_CASE("scan csv") {
    ScanResult scan = grid_scan({2, 2, 2}, 1.0, 0, true);
    std::ostringstream out;
    write_scan_csv(out, scan);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b,c,phi,margin");
    int rows = 0;
    bool origin_row = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line == "0,0,0,1,0") origin_row = true;
    }
    CHECK(rows == 11);
    CHECK(origin_row);
}

TEST_CASE("boundary_scan") {
    BoundaryScanResult scan = boundary_scan({2, 2, 2}, 0.05);
    CHECK(scan.pass);
    CHECK(scan.margin > 0.0);
    CHECK(scan.phi_at_identity == 1.0);
    // Face minimum sits at the symmetric singular point (-1/2,-1/2,-1/2).
    CHECK(scan.face_min == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(scan.face_argmin.a == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(scan.face_argmin.b == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(scan.face_argmin.c == doctest::Approx(-0.5).epsilon(1e-12));
    // Edge curves reduce to 3 + 12 a^2, minimized at a = 0.
    CHECK(scan.edge_min == 3.0);
    CHECK(scan.edge_min_exact == "3");
    CHECK(scan.min_value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(scan.face_count > 0);
    CHECK(scan.edge_count > 0);

    BoundaryScanResult bigger = boundary_scan({6, 4, 2}, 0.1);
    CHECK(bigger.pass);
    CHECK(bigger.margin > 0.0);
}

TEST_CASE("interior critical points converge to the origin") {
    auto records = interior_critical_points({2, 2, 2}, interior_points(50, 1234));
    REQUIRE(records.size() == 50);
    for (const auto& rec : records) {
        CHECK(rec.converged);
        CHECK(rec.grad_norm <= 1e-9);
        CHECK(rec.at_origin);
    }
    CriticalScanResult clustered = cluster_critical_points(records);
    CHECK(clustered.pass);
    CHECK(clustered.converged == 50);
    CHECK(clustered.single_origin_cluster);
    REQUIRE(clustered.clusters.size() == 1);

    auto at_origin = interior_critical_points({2, 2, 2}, {CorrelationPoint{0.0, 0.0, 0.0}});
    REQUIRE(at_origin.size() == 1);
    CHECK(at_origin.front().converged);
    CHECK(at_origin.front().iterations == 0);

    auto bigger = interior_critical_points({6, 4, 2}, interior_points(100, 99));
    CHECK(cluster_critical_points(bigger).pass);

    CHECK_THROWS_AS(interior_critical_points({2, 2, 2}, {CorrelationPoint{1.5, 0.0, 0.0}}),
                    InvalidArgument);
}

TEST_CASE("cluster bookkeeping") {
    CHECK_FALSE(cluster_critical_points({}).pass);

    CriticalPointRecord stray;
    stray.converged = true;
    stray.point = {0.5, 0.0, 0.0};
    CriticalScanResult result = cluster_critical_points({stray});
    CHECK(result.converged == 1);
    CHECK_FALSE(result.single_origin_cluster);
    CHECK_FALSE(result.pass);

    CriticalPointRecord failed;
    failed.converged = false;
    CHECK(cluster_critical_points({failed}).converged == 0);
}

TEST_CASE("lagrange combination vanishes on the face") {
    LagrangeReport at_half = lagrange_combination_check({2, 2, 2}, {CorrelationPoint{-0.5, -0.5, -0.5}});
    CHECK(at_half.pass);
    CHECK(at_half.worst_residual <= 1e-12);

    for (const auto& p : {ExponentVector{2, 2, 2}, ExponentVector{4, 2, 2}, ExponentVector{6, 4, 2}}) {
        LagrangeReport sweep = lagrange_combination_check(p, 100, 2026);
        CHECK(sweep.pass);
        CHECK(sweep.count == 100);
        CHECK(sweep.worst_residual <= 1e-8);
    }

    CHECK_THROWS_AS(lagrange_combination_check({3, 2, 2}, 10, 1), InvalidArgument);
    CHECK_FALSE(lagrange_combination_check({2, 2, 2}, std::vector<CorrelationPoint>{}).pass);
}

TEST_CASE("adjugate sweep") {
    AdjugateSweepReport sweep = adjugate_sweep(face_points(100, 2027));
    CHECK(sweep.pass);
    CHECK(sweep.count == 100);
    CHECK(sweep.worst_residual <= 1e-8);
    CHECK_FALSE(adjugate_sweep({}).pass);
    // Interior points are not singular; the sweep reports failure, not a throw.
    CHECK_FALSE(adjugate_sweep({CorrelationPoint{0.0, 0.0, 0.0}}).pass);
}

TEST_CASE("hessian at the origin") {
    HessianReport h222 = hessian_at_origin({2, 2, 2});
    CHECK(h222.pass);
    for (int v = 0; v < 3; ++v) {
        CHECK(h222.diag[v] == 4.0);
        CHECK(h222.diag_exact[v] == "4");
        CHECK(h222.diag_formula[v] == "4");
    }
    CHECK(h222.off_diagonal_zero);
    CHECK(h222.formula_matches);
    CHECK(h222.positive_definite);

    HessianReport h422 = hessian_at_origin({4, 2, 2});
    CHECK(h422.pass);
    CHECK(h422.diag[0] == 24.0);  // variable a couples p1, p2
    CHECK(h422.diag[1] == 24.0);
    CHECK(h422.diag[2] == 12.0);

    HessianReport h642 = hessian_at_origin({6, 4, 2});
    CHECK(h642.pass);
    CHECK(h642.formula_matches);
}

TEST_CASE("mc spot check") {
    McSpotReport report = mc_spot_check({2, 2, 2}, 3, 200000, 41);
    CHECK(report.pass);
    REQUIRE(report.checks.size() == 3);
    for (const auto& check : report.checks) {
        CHECK(check.std_error > 0.0);
        CHECK(check.error_in_se <= 5.0);
        CHECK(check.exact_value >= 1.0);  // interior points, even exponents
    }
    CHECK_THROWS_AS(mc_spot_check({2, 2, 2}, 0, 100, 1), InvalidArgument);
    CHECK_THROWS_AS(mc_spot_check({2, 2, 2}, 1, 1, 1), InvalidArgument);
}

TEST_CASE("identity summaries") {
    auto summaries = summarize(check_derivative_identity({4, 2, 2}));
    REQUIRE(summaries.size() == 3);
    for (const auto& s : summaries) {
        CHECK(s.pass);
        CHECK(s.residual == "0");
        CHECK_FALSE(s.name.empty());
    }
}

TEST_CASE("verify_gpi3 end to end") {
    RunConfig config;
    config.p = {2, 2, 2};
    config.resolution = 0.1;
    config.sample_count = 100000;
    config.seed = 0;

    VerificationReport report = verify_gpi3(config);
    CHECK(report.pass);
    CHECK(report.phi_identity == 1.0);
    CHECK(report.phi_identity_exact == "1");
    CHECK(report.grid.pass);
    CHECK(report.critical.pass);
    CHECK(report.boundary.pass);
    CHECK(report.lagrange.pass);
    CHECK(report.adjugate.pass);
    CHECK(report.hessian.pass);
    CHECK(report.mc.pass);
    CHECK(report.elapsed_ms > 0.0);

    VerificationReport again = verify_gpi3(config);
    CHECK(to_json(report) == to_json(again));

    RunConfig one = config, four = config;
    one.workers = 1;
    four.workers = 4;
    CHECK(to_json(verify_gpi3(one)) == to_json(verify_gpi3(four)));

    RunConfig odd = config;
    odd.p = {3, 2, 2};
    CHECK_THROWS_AS(verify_gpi3(odd), InvalidArgument);
    RunConfig coarse = config;
    coarse.resolution = 3.0;
    CHECK_THROWS_AS(verify_gpi3(coarse), InvalidArgument);
}

TEST_CASE("induction chain") {
    RunConfig base;
    base.resolution = 0.1;
    base.sample_count = 100000;

    ChainReport trivial = induction_chain({2, 2, 2}, base);
    CHECK(trivial.pass);
    CHECK(trivial.length == 0);
    CHECK(trivial.links.empty());
    CHECK(trivial.base.pass);

    ChainReport one = induction_chain({4, 2, 2}, base);
    CHECK(one.pass);
    CHECK(one.length == 1);
    REQUIRE(one.links.size() == 1);
    CHECK(one.links[0].from == ExponentVector{4, 2, 2});
    CHECK(one.links[0].coordinate == 0);
    CHECK(one.links[0].pass);

    ChainReport three = induction_chain({6, 4, 2}, base);
    CHECK(three.pass);
    CHECK(three.length == 3);
    REQUIRE(three.links.size() == 3);
    CHECK(three.links[0].from == ExponentVector{6, 4, 2});
    CHECK(three.links[0].coordinate == 0);
    CHECK(three.links[1].from == ExponentVector{4, 4, 2});
    CHECK(three.links[1].coordinate == 0);  // first index wins ties
    CHECK(three.links[2].from == ExponentVector{2, 4, 2});
    CHECK(three.links[2].coordinate == 1);

    CHECK_THROWS_AS(induction_chain({2, 3, 2}, base), InvalidArgument);
}

TEST_CASE("all twos") {
    AllTwosReport n3 = check_all_twos(3, 50, 11);
    CHECK(n3.pass);
    CHECK(n3.violations == 0);
    CHECK(n3.min_ratio >= 1.0);
    CHECK(n3.equality_only_at_diagonal);

    AllTwosReport n4 = check_all_twos(4, 100, 7);
    CHECK(n4.pass);
    CHECK(n4.min_ratio_exact == "48802663/27665550");  // regression value

    CHECK_THROWS_AS(check_all_twos(1, 10, 0), InvalidArgument);
    CHECK_THROWS_AS(check_all_twos(7, 10, 0), InvalidArgument);
    CHECK_THROWS_AS(check_all_twos(3, 0, 0), InvalidArgument);

    // The two pencil-and-paper cases behind the sweep.
    CHECK(moment(CovarianceMatrix<Rational>::identity(3), {2, 2, 2}) == 1);
    CovarianceMatrix<Rational> half = CovarianceMatrix<Rational>::identity(4);
    Rational q(1, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) half.set(i, j, q);
    CHECK(moment(half, {2, 2, 2, 2}) > 1);
}

TEST_CASE("report text forms") {
    RunConfig config;
    config.p = {2, 2, 2};
    config.resolution = 0.25;
    config.sample_count = 50000;
    VerificationReport report = verify_gpi3(config);

    std::string text = to_text(report);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("2,2,2") != std::string::npos);

    std::string chain_text = to_text(induction_chain({4, 2, 2}, config));
    CHECK(chain_text.find("chain") != std::string::npos);

    std::string twos_text = to_text(check_all_twos(3, 5, 1));
    CHECK(twos_text.find("PASS") != std::string::npos);
}
