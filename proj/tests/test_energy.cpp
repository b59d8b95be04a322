#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "logsch/energy.hpp"
#include "logsch/field_io.hpp"
#include "logsch/potential.hpp"
#include "logsch/rng.hpp"
#include "oracle.hpp"

using namespace logsch;

namespace {

PerturbationParams params_of(double lambda, double p, double eps) { return {lambda, p, eps}; }

std::vector<double> as_vec(const Field& f) { return {f.values().begin(), f.values().end()}; }

Field gausson(const Grid& g) {
    Field u(g);
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::exp(g.dim()) * std::exp(-g.radius_sq(i));
    return u;
}

}  // namespace

TEST_CASE("potential parsing and description") {
    const Grid g(1, 2.0, 4);
    const Field h = parse_potential("harmonic:2.0").evaluate(g);
    for (int i = 0; i < 4; ++i) CHECK(h[i] == doctest::Approx(2.0 * g.coord(i) * g.coord(i)));

    const Field q = parse_potential("quartic:0.5").evaluate(g);
    CHECK(q[0] == doctest::Approx(0.5 * std::pow(g.coord(0), 4)));

    const Field s = parse_potential("shifted:harmonic:2.0:+1.0").evaluate(g);
    CHECK(s[1] == doctest::Approx(h[1] + 1.0));
    const Field s2 = parse_potential("shifted:shifted:quartic:1:-0.5:2").evaluate(g);
    CHECK(s2[0] == doctest::Approx(std::pow(g.coord(0), 4) + 1.5));

    for (const char* text : {"harmonic:2", "quartic:0.25", "shifted:harmonic:2:1", "shifted:quartic:3:-0.5"}) {
        const Potential p = parse_potential(text);
        const Field a = p.evaluate(g);
        const Field b = parse_potential(p.describe()).evaluate(g);
        for (int i = 0; i < 4; ++i) CHECK(a[i] == b[i]);
    }

    for (const char* bad : {"", "harmonic", "harmonic:", "harmonic:-1", "harmonic:x", "cubic:1", "shifted:harmonic:2",
                            "tabulated:", "quartic:0"}) {
        CHECK_THROWS_AS(parse_potential(bad), std::invalid_argument);
    }
}

TEST_CASE("potential positivity on the grid") {
    // An odd point count puts the origin on the grid, where a|x|^2 vanishes.
    const Grid odd(1, 2.0, 5);
    CHECK_THROWS_AS(bind_potential(odd, Potential::harmonic(2.0)), std::domain_error);
    CHECK(validate_potential(odd, Potential::shifted(Potential::harmonic(2.0), 1.0)) == doctest::Approx(1.0));

    const Grid even(1, 8.0, 1022);
    const PotentialField v = bind_potential(even, Potential::harmonic(2.0));
    const double x0 = even.coord(510);
    CHECK(v.v0 == doctest::Approx(2.0 * x0 * x0));
    CHECK(v.v0 > 0.0);
}

TEST_CASE("tabulated potential") {
    const Grid g(2, 1.0, 4);
    Field vals(g);
    for (std::size_t i = 0; i < g.size(); ++i) vals[i] = 1.0 + static_cast<double>(i);
    const auto path = std::filesystem::temp_directory_path() / "logsch_test_potential.lsef";
    write_field(path, g, vals);

    const Potential p = parse_potential("tabulated:" + path.string());
    const Field back = p.evaluate(g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == vals[i]);
    CHECK_THROWS_AS(p.evaluate(Grid(2, 1.0, 5)), std::invalid_argument);
    CHECK_THROWS(parse_potential("tabulated:/nonexistent/logsch.lsef"));
    std::filesystem::remove(path);
}

TEST_CASE("pointwise nonlinearity") {
    CHECK(log_nonlin(0.0) == 0.0);
    CHECK(log_density(0.0) == 0.0);
    CHECK(log_nonlin(1.0) == 0.0);
    CHECK(log_nonlin(std::exp(1.0)) == doctest::Approx(2.0 * std::exp(1.0)));
    CHECK(log_nonlin(-std::exp(1.0)) == doctest::Approx(-2.0 * std::exp(1.0)));
    CHECK(log_density(-2.0) == doctest::Approx(4.0 * std::log(4.0)));
    CHECK(std::abs(log_nonlin(1e-300)) < 1e-296);
}

TEST_CASE("perturbation parameter validation") {
    CHECK_NOTHROW(params_of(0.0, 1.5, 1e-10).validate());
    CHECK_NOTHROW(params_of(1.0, 1.9, 1e-10).validate());
    CHECK_THROWS_AS(params_of(-0.1, 1.5, 1e-10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params_of(1.5, 1.5, 1e-10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params_of(0.5, 1.0, 1e-10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params_of(0.5, 2.0, 1e-10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params_of(0.5, 1.5, 0.0).validate(), std::invalid_argument);
}

TEST_CASE("energy matches the loop oracle on random fields") {
    Rng rng(2024);
    for (int dim : {1, 2}) {
        const Grid g(dim, 2.0, dim == 1 ? 16 : 8);
        const oracle::Box box{dim, g.points_per_dim(), g.spacing()};
        const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
        for (int trial = 0; trial < 20; ++trial) {
            const PerturbationParams params{trial % 3 == 0 ? 0.0 : rng.uniform(0.01, 1.0), rng.uniform(1.1, 1.9), 1e-10};
            const Field u = rng.uniform_field(g, -3.0, 3.0);
            const double expect = oracle::energy(box, as_vec(u), as_vec(v.values), params.lambda, params.p, 1e-10);
            CHECK(energy_total(g, v, u, params) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(energy_parts(g, v, u, params).total(params) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("energy of the zero field vanishes") {
    const Grid g(2, 2.0, 8);
    const PotentialField v = bind_potential(g, Potential::harmonic(1.0));
    CHECK(energy_total(g, v, Field(g), params_of(1.0, 1.5, 1e-10)) == 0.0);
    const Field G = el_gradient(g, v, Field(g), {1.0, 1.5, 1e-10});
    CHECK(max_abs(G) == 0.0);
}

TEST_CASE("gradient matches finite differences of the oracle energy") {
    // Entries bounded away from 0 keep |u|^p and u^2 log u^2 smooth along the
    // probe, so the fourth order difference is accurate.
    Rng rng(99);
    for (int dim : {1, 2}) {
        const Grid g(dim, 2.0, dim == 1 ? 12 : 6);
        const oracle::Box box{dim, g.points_per_dim(), g.spacing()};
        const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
        for (int trial = 0; trial < 10; ++trial) {
            const PerturbationParams params{trial % 2 == 0 ? 0.0 : rng.uniform(0.1, 1.0), rng.uniform(1.1, 1.9), 1e-10};
            Field u(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double mag = rng.uniform(0.5, 2.0);
                u[i] = rng.uniform() < 0.5 ? -mag : mag;
            }
            const Field phi = rng.uniform_field(g, -1.0, 1.0);
            const double analytic = inner(g, el_gradient(g, v, u, params), phi);
            const double fd = oracle::directional_fd(box, as_vec(u), as_vec(phi), as_vec(v.values), params.lambda,
                                                     params.p, 1e-10, 1e-3);
            CHECK(analytic == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("sampled Gausson: energy and residual") {
    const Grid g(1, 8.0, 1022);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const Field u = gausson(g);
    const double expect = oracle::gausson_energy(1);
    CHECK(expect == doctest::Approx(4.63036).epsilon(1e-5));
    CHECK(std::abs(energy_total(g, v, u, {}) - expect) <= 5e-3);
    // O(h^2) consistency of the discrete operator.
    CHECK(max_abs(residual_original(g, v.values, u)) <= 5e-3);
}
