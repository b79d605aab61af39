#include <catch2/catch.hpp>

#include "conic/numerics/roots.hpp"

using namespace conic;

TEST_CASE("find_root_bracketed on simple functions") {
    CHECK(num::find_root_bracketed([](double z) { return z - 1.0; }, 0.0, 2.0, 1e-12) ==
          Approx(1.0).margin(1e-12));
    CHECK(num::find_root_bracketed([](double z) { return z * z * z - 2.0; }, 0.0, 2.0, 1e-12) ==
          Approx(std::cbrt(2.0)).margin(1e-11));
}

TEST_CASE("find_root_bracketed returns an endpoint root immediately") {
    CHECK(num::find_root_bracketed([](double z) { return z; }, 0.0, 2.0, 1e-12) == 0.0);
    CHECK(num::find_root_bracketed([](double z) { return z - 2.0; }, 0.0, 2.0, 1e-12) == 2.0);
}

TEST_CASE("find_root_bracketed error paths") {
    CHECK_THROWS_AS(num::find_root_bracketed([](double z) { return z * z + 1.0; }, -1.0, 1.0,
                                             1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(num::find_root_bracketed([](double) { return std::nan(""); }, 0.0, 1.0, 1e-12),
                    std::runtime_error);
    CHECK_THROWS_AS(num::find_root_bracketed([](double z) { return z - 0.5; }, 0.0, 1.0, -1.0),
                    std::domain_error);
}

TEST_CASE("find_root_bracketed converges on a stiff bracket") {
    // steep transition forces the bisection guard to engage
    auto f = [](double z) { return std::tanh(500.0 * (z - 0.3217)); };
    CHECK(num::find_root_bracketed(f, -4.0, 9.0, 1e-13) == Approx(0.3217).margin(1e-10));
}
