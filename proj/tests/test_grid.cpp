#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "logsch/grid.hpp"
#include "logsch/rng.hpp"
#include "oracle.hpp"

using namespace logsch;

TEST_CASE("grid geometry") {
    const Grid g(1, 1.0, 3);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.coord(0) == doctest::Approx(-0.5));
    CHECK(g.coord(1) == doctest::Approx(0.0));
    CHECK(g.coord(2) == doctest::Approx(0.5));
    CHECK(g.size() == 3);
    CHECK(g.ext_size() == 4);

    const Grid g2(2, 6.0, 190);
    CHECK(g2.size() == 190u * 190u);
    CHECK(g2.ext_size() == 191u * 191u);
    CHECK(g2.cell_volume() == doctest::Approx(g2.spacing() * g2.spacing()));
    // Even point counts keep the origin off the grid.
    CHECK(g2.coord(94) < 0.0);
    CHECK(g2.coord(95) > 0.0);
}

TEST_CASE("grid rejects bad arguments") {
    CHECK_THROWS_AS(Grid(0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(4, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1, 0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1, -2.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2, 1.0, 2), std::invalid_argument);
}

TEST_CASE("index maps are consistent") {
    const Grid g(3, 2.0, 5);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto m = g.unravel(i);
        CHECK(static_cast<std::size_t>(m[0]) * 25 + m[1] * 5 + m[2] == i);
        const std::size_t e = g.ext_index(i);
        CHECK(e == static_cast<std::size_t>(m[0] + 1) * 36 + (m[1] + 1) * 6 + (m[2] + 1));
        const double r2 = g.coord(m[0]) * g.coord(m[0]) + g.coord(m[1]) * g.coord(m[1]) + g.coord(m[2]) * g.coord(m[2]);
        CHECK(g.radius_sq(i) == doctest::Approx(r2));
    }
}

TEST_CASE("digest separates grids") {
    CHECK(Grid(1, 8.0, 1022).digest() == Grid(1, 8.0, 1022).digest());
    CHECK(Grid(1, 8.0, 1022).digest() != Grid(1, 8.0, 1020).digest());
    CHECK(Grid(1, 8.0, 1022).digest() != Grid(2, 8.0, 1022).digest());
    CHECK(Grid(1, 8.0, 1022).digest() != Grid(1, 8.5, 1022).digest());
}

TEST_CASE("hand computed three point stencil") {
    const Grid g(1, 1.0, 3);
    const Field u(g, {0.0, 1.0, 0.0});

    const VectorField du = forward_gradient(g, u);
    REQUIRE(du.components.size() == 1);
    const std::vector<double> expected = {0.0, 2.0, -2.0, 0.0};
    for (std::size_t e = 0; e < 4; ++e) CHECK(du.components[0][e] == doctest::Approx(expected[e]));

    const Field lap = neg_laplacian_apply(g, u);
    CHECK(lap[0] == doctest::Approx(-4.0));
    CHECK(lap[1] == doctest::Approx(8.0));
    CHECK(lap[2] == doctest::Approx(-4.0));

    // int |u'|^2 = 0.5 * (4 + 4), int V u^2 = 0.5 * 2.
    const Field V(g, {7.0, 2.0, 7.0});
    CHECK(norm_h1v(g, V, u) == doctest::Approx(std::sqrt(5.0)));
    CHECK(integrate(g, u) == doctest::Approx(0.5));
    CHECK(max_abs(u) == 1.0);
}

TEST_CASE("discrete sine modes are eigenvectors of -Lap_h") {
    const Grid g(1, 3.0, 40);
    const double L = 3.0, h = g.spacing();
    for (int k : {1, 2, 7, 20}) {
        Field u(g);
        for (int i = 0; i < 40; ++i) u[i] = std::sin(k * M_PI * (g.coord(i) + L) / (2 * L));
        const double mu = 4.0 / (h * h) * std::pow(std::sin(k * M_PI * h / (4 * L)), 2);
        const Field lap = neg_laplacian_apply(g, u);
        for (int i = 0; i < 40; ++i) CHECK(lap[i] == doctest::Approx(mu * u[i]).epsilon(1e-10));
    }
}

TEST_CASE("summation by parts holds on random fields") {
    Rng rng(7);
    for (int dim : {1, 2, 3}) {
        const Grid g(dim, 1.5, dim == 3 ? 6 : 11);
        for (int trial = 0; trial < 10; ++trial) {
            const Field u = rng.uniform_field(g, -1.0, 1.0);
            const Field v = rng.uniform_field(g, -1.0, 1.0);
            const double lhs = dirichlet_form(g, forward_gradient(g, u), forward_gradient(g, v));
            const double rhs = inner(g, neg_laplacian_apply(g, u), v);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("dirichlet form and w1p norm match the loop oracle") {
    Rng rng(11);
    for (int dim : {1, 2}) {
        const Grid g(dim, 2.0, 9);
        const oracle::Box box{dim, 9, g.spacing()};
        for (int trial = 0; trial < 10; ++trial) {
            const Field u = rng.uniform_field(g, -3.0, 3.0);
            const std::vector<double> uv(u.values().begin(), u.values().end());
            const VectorField du = forward_gradient(g, u);
            CHECK(dirichlet_form(g, du, du) == doctest::Approx(oracle::edge_sum(box, uv, [](double q) { return q; })));

            const double p = rng.uniform(1.05, 1.95);
            const std::vector<double> zeros(uv.size(), 0.0);
            const double expect = std::pow(
                oracle::edge_sum(box, uv, [&](double q) { return std::pow(q, p / 2); }) +
                    oracle::point_sum(box, uv, zeros, [&](double t, double) { return std::pow(std::abs(t), p); }),
                1.0 / p);
            CHECK(norm_w1p(g, u, p) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm_w1p rejects exponents outside (1,2)") {
    const Grid g(1, 1.0, 5);
    const Field u(g);
    CHECK_THROWS_AS(norm_w1p(g, u, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(norm_w1p(g, u, 2.0), std::invalid_argument);
}

TEST_CASE("field arithmetic") {
    const Grid g(1, 1.0, 4);
    Field a(g, {1, 2, 3, 4});
    const Field b(g, {4, 3, 2, 1});
    CHECK((a + b)[2] == 5.0);
    CHECK((a - b)[0] == -3.0);
    CHECK((2.0 * a)[3] == 8.0);
    CHECK(hadamard(a, b)[1] == 6.0);
    a.axpy(-1.0, b);
    CHECK(a[3] == 3.0);
    CHECK(a.all_finite());
    a[0] = std::nan("");
    CHECK_FALSE(a.all_finite());

    const Field other(Grid(1, 1.0, 5));
    CHECK_THROWS_AS(a += other, std::invalid_argument);
    CHECK_THROWS_AS(Field(g, std::vector<double>(3, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(require_same_grid(g, other, "test"), std::invalid_argument);
}
