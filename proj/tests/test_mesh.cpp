#include <catch2/catch_amalgamated.hpp>

#include "ebdg/mesh.hpp"

using namespace ebdg;

TEST_CASE("uniform mesh widths") {
    const Mesh1D m = uniform_mesh(0.0, 10.0, 10);
    REQUIRE(m.num_elements() == 10);
    for (int j = 0; j < 10; ++j) CHECK(m.width(j) == Catch::Approx(1.0).margin(1e-14));
    CHECK(m.a() == 0.0);
    CHECK(m.b() == 10.0);

    const Mesh1D single = uniform_mesh(0.0, 1.0, 1);
    CHECK(single.num_elements() == 1);
    CHECK(single.left(0) == 0.0);
    CHECK(single.right(0) == 1.0);

    const Mesh1D fine = uniform_mesh(0.0, 10.0, 160);
    CHECK(fine.max_width() == Catch::Approx(0.0625).margin(1e-15));
    CHECK(fine.regularity_ratio() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform mesh rejects bad input") {
    CHECK_THROWS_AS(uniform_mesh(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(uniform_mesh(1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(uniform_mesh(2.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("reference map endpoints and midpoint") {
    const Mesh1D m(std::vector<double>{0.0, 1.0, 2.0, 4.0});
    CHECK(m.to_reference(0, 0.0) == Catch::Approx(-1.0).margin(1e-15));
    CHECK(m.to_reference(0, 1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(m.to_reference(2, 3.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(m.jacobian(2) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("reference map round trip") {
    const Mesh1D m(std::vector<double>{-1.0, -0.25, 0.5, 2.75, 3.0});
    for (int j = 0; j < m.num_elements(); ++j)
        for (double frac : {0.0, 0.13, 0.5, 0.86, 1.0}) {
            const double x = m.left(j) + frac * m.width(j);
            CHECK(m.from_reference(j, m.to_reference(j, x)) == Catch::Approx(x).margin(1e-14));
        }
    double total = 0.0;
    for (int j = 0; j < m.num_elements(); ++j) total += m.width(j);
    CHECK(total == Catch::Approx(m.b() - m.a()).epsilon(1e-12));
    CHECK(m.regularity_ratio() == Catch::Approx(2.25 / 0.25).epsilon(1e-12));
}
