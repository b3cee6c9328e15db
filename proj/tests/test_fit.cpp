#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heislab/fit.hpp"
#include "heislab/report.hpp"

using namespace heislab;

TEST_CASE("log-log fit recovers power laws") {
    std::vector<double> radii{0.8, 0.4, 0.2, 0.1, 0.05};
    std::vector<double> values;
    for (double r : radii) values.push_back(3.0 * std::pow(r, 1.5));
    RateFit f = fit_rate(radii, values);
    REQUIRE(f.valid);
    CHECK(f.slope == Catch::Approx(1.5).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == Catch::Approx(3.0).epsilon(1e-10));
    CHECK(f.r2 == Catch::Approx(1.0));
    CHECK(f.discarded == 0);
}

TEST_CASE("grid floor discards only the finest radius") {
    std::vector<double> radii{0.8, 0.4, 0.2, 0.1};
    std::vector<double> clean{0.8, 0.4, 0.2};
    std::vector<double> values;
    for (double r : clean) values.push_back(std::pow(r, 2.0));
    values.push_back(1.0);  // junk at the unresolved radius
    RateFit f = fit_rate(radii, values, 0.15);
    REQUIRE(f.valid);
    CHECK(f.discarded == 1);
    CHECK(f.slope == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_rate({1.0, 0.5, 0.25}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({1.0, 0.7, 0.49, 0.343}, {1, 1, 1, 1}), std::invalid_argument);
    // nonpositive values are reported as not fittable, not as an exception
    RateFit f = fit_rate({0.8, 0.4, 0.2, 0.1}, {1.0, 0.5, 0.0, 0.1});
    CHECK_FALSE(f.valid);
}

TEST_CASE("observed order averages dyadic ratios") {
    CHECK(observed_order({4.0, 1.0, 0.25}) == Catch::Approx(2.0));
    CHECK(observed_order({1.0, 0.5}) == Catch::Approx(1.0));
}

TEST_CASE("richardson extrapolation of a first-order sequence") {
    // v(t) = 1 + 3 t + t^2 at t = 0.4, 0.2, 0.1, 0.05
    std::vector<double> v;
    for (double t : {0.4, 0.2, 0.1, 0.05}) v.push_back(1.0 + 3.0 * t + t * t);
    RichardsonResult r = richardson_first_order(v, 1e-1);
    CHECK(r.limit == Catch::Approx(1.0).margin(6e-3));
    CHECK(r.cauchy);
    // a wandering sequence is flagged
    RichardsonResult bad = richardson_first_order({1.0, 2.0, 1.0, 2.5}, 1e-3);
    CHECK_FALSE(bad.cauchy);
}

TEST_CASE("report serialization is stable and atomic") {
    EstimateReport r;
    r.name = "demo";
    r.anchor = "demo_anchor";
    r.param("alpha", 0.875);
    r.add("ratio", 33.0, 1.25);
    r.add("found", 0.5, 0.25, -1.0);
    r.pass = true;
    const std::string csv = report_csv(r);
    CHECK(csv.find("experiment,anchor,metric,k1,k2,value") == 0);
    CHECK(csv.find("demo,demo_anchor,ratio,33,,1.25") != std::string::npos);
    CHECK(csv.find("demo,demo_anchor,found,0.5,0.25,-1") != std::string::npos);
    const std::string sum = report_summary(r);
    CHECK(sum.find("pass = true") != std::string::npos);
    CHECK(sum.find("alpha = 0.875") != std::string::npos);

    // byte-identical across writes
    const std::string p1 = "/tmp/heislab_report_test.csv";
    write_report(r, p1, "/tmp/heislab_report_test.txt");
    std::ifstream in(p1);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == csv);
}
