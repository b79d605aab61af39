#include <catch2/catch.hpp>

#include "conic/numerics/bivariate_normal.hpp"
#include "oracles.hpp"

using namespace conic;

TEST_CASE("bvn_cdf independence and comonotone branches") {
    for (double x : {-1.3, 0.0, 0.8})
        for (double y : {-0.5, 0.4, 2.1}) {
            CHECK(num::bvn_cdf(x, y, 0.0) ==
                  Approx(num::norm_cdf(x) * num::norm_cdf(y)).margin(1e-15));
            CHECK(num::bvn_cdf(x, x, 1.0) == Approx(num::norm_cdf(x)).margin(1e-15));
            CHECK(num::bvn_cdf(x, y, -1.0) ==
                  Approx(std::max(0.0, num::norm_cdf(x) + num::norm_cdf(y) - 1.0)).margin(1e-15));
        }
}

TEST_CASE("bvn_cdf at the origin matches the arcsine closed form") {
    for (double rho : {-0.999, -0.95, -0.7, -0.3, 0.2, 0.6, 0.9, 0.925, 0.99, 0.9999}) {
        const double closed = 0.25 + std::asin(rho) / (2.0 * M_PI);
        CHECK(num::bvn_cdf(0.0, 0.0, rho) == Approx(closed).margin(1e-10));
    }
}

TEST_CASE("bvn_cdf against the 2-D quadrature oracle") {
    struct Case {
        double x, y, rho;
    };
    for (const auto& c : {Case{0.4, -0.7, 0.5}, Case{-1.2, 0.9, -0.8}, Case{1.5, 1.1, 0.95},
                          Case{0.0, 2.0, 0.3}, Case{-0.3, -0.2, -0.99}}) {
        const double oracle = oracles::bvn_cdf_bruteforce(c.x, c.y, c.rho, 1e-11);
        CHECK(num::bvn_cdf(c.x, c.y, c.rho) == Approx(oracle).margin(2e-9));
    }
}

TEST_CASE("bvn_cdf handles infinite sentinels") {
    CHECK(num::bvn_cdf(0.7, kInf, 0.5) == Approx(num::norm_cdf(0.7)).margin(1e-10));
    CHECK(num::bvn_cdf(kInf, -0.4, -0.3) == Approx(num::norm_cdf(-0.4)).margin(1e-10));
    CHECK(num::bvn_cdf(-kInf, 0.4, 0.3) == 0.0);
    CHECK(num::bvn_cdf(kInf, kInf, 0.9) == 1.0);
}

TEST_CASE("bvn_cdf monotone in each argument and in rho") {
    double prev = -1.0;
    for (double x = -3.0; x <= 3.0; x += 0.5) {
        const double v = num::bvn_cdf(x, 0.4, 0.6);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    prev = -1.0;
    for (double y = -3.0; y <= 3.0; y += 0.5) {
        const double v = num::bvn_cdf(0.2, y, -0.4);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    prev = -1.0;
    for (double rho = -1.0; rho <= 1.0; rho += 0.05) {
        const double v = num::bvn_cdf(0.5, -0.3, rho);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("bvn_cdf rejects correlations outside [-1,1]") {
    CHECK_THROWS_AS(num::bvn_cdf(0.0, 0.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(num::bvn_cdf(0.0, 0.0, -1.0001), std::domain_error);
}

TEST_CASE("bvn_partials plug-in values and symmetry") {
    const auto p0 = num::bvn_partials(0.0, 0.0, 0.0);
    CHECK(p0.h == Approx(num::norm_pdf(0.0) * 0.5).margin(1e-10));
    CHECK(p0.g == Approx(num::norm_pdf(0.0) * num::norm_pdf(0.0)).margin(1e-10));
    for (double rho : {-0.6, 0.2, 0.85})
        for (double x : {-0.7, 0.4})
            for (double y : {-0.2, 1.1})
                CHECK(num::bvn_partials(x, y, rho).g ==
                      Approx(num::bvn_partials(y, x, rho).g).epsilon(1e-12));
    CHECK_THROWS_AS(num::bvn_partials(0.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(num::bvn_partials(0.0, 0.0, -1.0), std::domain_error);
}

TEST_CASE("bvn_partials match finite differences of bvn_cdf") {
    const double h = 1e-5;
    for (double rho : {-0.5, 0.3, 0.8}) {
        for (double x : {-0.8, 0.6}) {
            for (double y : {-0.1, 1.2}) {
                const double fd =
                    (num::bvn_cdf(x + h, y, rho) - num::bvn_cdf(x - h, y, rho)) / (2.0 * h);
                CHECK(num::bvn_partials(x, y, rho).h == Approx(fd).margin(1e-6));
            }
        }
    }
}
