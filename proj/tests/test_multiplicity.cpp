#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "logsch/multiplicity.hpp"
#include "logsch/rng.hpp"
#include "logsch/verify.hpp"

using namespace logsch;

namespace {

int sign_changes_along_axis0(const Grid& g, const Field& u, double floor) {
    int changes = 0;
    double last = 0.0;
    for (int i = 0; i < g.points_per_dim(); ++i) {
        // Walk the first axis through the middle of the remaining ones.
        std::size_t idx = static_cast<std::size_t>(i) * g.stride(0);
        for (int d = 1; d < g.dim(); ++d) idx += static_cast<std::size_t>(g.points_per_dim() / 2) * g.stride(d);
        const double x = u[idx];
        if (std::abs(x) < floor) continue;
        if (last != 0.0 && (x > 0) != (last > 0)) ++changes;
        last = x;
    }
    return changes;
}

}  // namespace

TEST_CASE("distance modulo sign") {
    Rng rng(3);
    const Grid g(1, 3.0, 40);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    for (int trial = 0; trial < 10; ++trial) {
        const Field a = rng.uniform_field(g, -1.0, 1.0);
        const Field b = rng.uniform_field(g, -1.0, 1.0);
        CHECK(distance_mod_sign(g, v.values, a, -1.0 * a) == 0.0);
        CHECK(distance_mod_sign(g, v.values, a, b) == doctest::Approx(distance_mod_sign(g, v.values, b, a)));
        CHECK(distance_mod_sign(g, v.values, a, b) == doctest::Approx(distance_mod_sign(g, v.values, a, -1.0 * b)));
        CHECK(distance_mod_sign(g, v.values, a, b) <= norm_h1v(g, v.values, a - b) + 1e-15);
    }
}

TEST_CASE("deflation factor") {
    const Grid g(1, 3.0, 40);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const Field e = default_seed(g, v);  // unit norm

    DeflationSet ds(v.values);
    CHECK(deflation_factor(e, ds) == 1.0);

    // Distance 1 from the zero field: 1^-2 + 1.
    ds.solutions.push_back(Field(g));
    CHECK(deflation_factor(e, ds) == doctest::Approx(2.0));
    // Distance 2: 1/4 + 1.
    CHECK(deflation_factor(2.0 * e, ds) == doctest::Approx(1.25));
    // Two stored solutions multiply.
    ds.solutions.push_back(3.0 * e);
    CHECK(deflation_factor(e, ds) == doctest::Approx(2.0 * 1.25));
    ds.power = 1.0;
    ds.shift = 0.5;
    CHECK(deflation_factor(e, ds) == doctest::Approx(1.5 * 1.0));

    const Field z(g, std::vector<double>(40, 0.25));
    const Field scaled = deflate_direction(z, e, ds);
    CHECK(scaled[7] == doctest::Approx(0.25 * 1.5));

    // Inside half the separation.
    CHECK_THROWS_AS(deflation_factor(0.04 * e, ds), DeflationProximity);
    CHECK_NOTHROW(deflation_factor(0.06 * e, ds));
}

TEST_CASE("structured seeds: norm, parity and node count") {
    const Grid g(1, 6.0, 200);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    for (int j = 1; j <= 6; ++j) {
        const Field s = structured_seed(g, v, j);
        CHECK(norm_h1v(g, v.values, s) == doctest::Approx(1.0));
        CHECK(sign_changes_along_axis0(g, s, 1e-8) == j - 1);
        const double parity = (j - 1) % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < 100; ++i) CHECK(s[199 - i] == doctest::Approx(parity * s[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(structured_seed(g, v, 0), std::invalid_argument);
    CHECK_THROWS_AS(structured_seed(g, v, 100), std::invalid_argument);
    CHECK_NOTHROW(structured_seed(g, v, 99));

    const Grid g2(2, 4.0, 30);
    const PotentialField v2 = bind_potential(g2, Potential::harmonic(1.0));
    const Field s2 = structured_seed(g2, v2, 3);
    CHECK(sign_changes_along_axis0(g2, s2, 1e-8) == 2);
    // No sign change across the second axis.
    for (int i = 0; i < 30; ++i) {
        for (int j = 1; j < 30; ++j) CHECK((s2[i * 30 + j] > 0) == (s2[i * 30] > 0));
    }
}

TEST_CASE("duplicate detection") {
    const Grid g(1, 3.0, 40);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const Field e = default_seed(g, v);
    std::vector<FoundSolution> accepted;
    CHECK_FALSE(is_duplicate(g, v.values, e, accepted, 0.1));
    accepted.emplace_back(e);
    CHECK(is_duplicate(g, v.values, -1.0 * e, accepted, 0.1));
    CHECK(is_duplicate(g, v.values, 1.05 * e, accepted, 0.1));
    CHECK_FALSE(is_duplicate(g, v.values, 1.2 * e, accepted, 0.1));
}

TEST_CASE("two solutions: ground state and an odd state") {
    const Grid g(1, 6.0, 382);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const MultiplicityResult r = find_k_solutions(g, v, ContinuationSchedule{}, PerturbationParams{},
                                                  MountainPassConfig{}, 2);
    REQUIRE(r.complete);
    REQUIRE(r.solutions.size() == 2);
    CHECK(r.attempts == 2);
    const Field& ground = r.solutions[0].u;
    const Field& odd = r.solutions[1].u;
    CHECK(r.solutions[0].seed_index == 1);
    CHECK(r.solutions[1].seed_index == 2);
    CHECK(r.solutions[0].energy < r.solutions[1].energy);
    CHECK(distance_mod_sign(g, v.values, ground, odd) >= 0.1);
    for (int i = 0; i < 191; ++i) {
        CHECK(ground[381 - i] == doctest::Approx(ground[i]).epsilon(1e-4).scale(1e-6));
        CHECK(odd[381 - i] == doctest::Approx(-odd[i]).epsilon(1e-4).scale(1e-6));
    }
    for (const auto& s : r.solutions) {
        CHECK(s.report.records.back().resid_precond <= 1e-6);
        CHECK(s.theta_proxy > 0.0);
        CHECK_FALSE(s.possible_duplicate);
    }
}

TEST_CASE("seed exhaustion is reported, not thrown") {
    // n = 6 only resolves j = 1, 2.
    const Grid g(1, 3.0, 6);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const MultiplicityResult r = find_k_solutions(g, v, ContinuationSchedule{}, PerturbationParams{},
                                                  MountainPassConfig{}, 4);
    CHECK_FALSE(r.complete);
    CHECK(r.solutions.size() <= 2);
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics.back().find("accepted") != std::string::npos);
    CHECK_THROWS_AS(find_k_solutions(g, v, ContinuationSchedule{}, PerturbationParams{}, MountainPassConfig{}, 0),
                    std::invalid_argument);
}

TEST_CASE("first two seeds are orthogonal by parity") {
    const Grid g(1, 6.0, 200);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const Field s1 = structured_seed(g, v, 1), s2 = structured_seed(g, v, 2);
    CHECK(std::abs(inner(g, s1, s2)) < 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s1[i] > 0.0);
}

TEST_CASE("deflation leaves zero directions at zero") {
    const Grid g(1, 3.0, 40);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    DeflationSet ds(v.values);
    ds.solutions.push_back(default_seed(g, v));
    const Field z = deflate_direction(Field(g), 3.0 * default_seed(g, v), ds);
    CHECK(max_abs(z) == 0.0);
    // Far from every stored solution the factor tends to the shift.
    CHECK(deflation_factor(1e6 * default_seed(g, v), ds) == doctest::Approx(1.0));
}

TEST_CASE("k = 1 reduces to plain continuation") {
    const Grid g(1, 6.0, 254);
    const PotentialField v = bind_potential(g, Potential::harmonic(2.0));
    const MultiplicityResult r =
        find_k_solutions(g, v, ContinuationSchedule{}, PerturbationParams{}, MountainPassConfig{}, 1);
    MountainPassConfig cfg;
    cfg.seed_profile = structured_seed(g, v, 1);
    const ContinuationResult c = continue_to_limit(g, v, ContinuationSchedule{}, PerturbationParams{}, cfg);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0].energy == c.report.records.back().energy);
    CHECK(max_abs(r.solutions[0].u - c.u) == 0.0);
}

TEST_CASE("three solutions on the shifted harmonic potential") {
    const Grid g(1, 6.0, 382);
    const PotentialField v = bind_potential(g, Potential::shifted(Potential::harmonic(2.0), 1.0));
    const MultiplicityResult r =
        find_k_solutions(g, v, ContinuationSchedule{}, PerturbationParams{}, MountainPassConfig{}, 3);
    REQUIRE(r.complete);
    REQUIRE(r.solutions.size() == 3);
    CHECK(r.solutions[0].energy > 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        const Field& u = r.solutions[i].u;
        CHECK(check_nehari(g, v, u, 20e-6 * norm_h1v(g, v.values, u)).pass);
        if (i > 0) CHECK(r.solutions[i].energy - r.solutions[i - 1].energy >= 1e-6);
        for (std::size_t j = 0; j < i; ++j) CHECK(distance_mod_sign(g, v.values, u, r.solutions[j].u) >= 0.1);
    }
    // A negated solution is the same solution.
    CHECK(is_duplicate(g, v.values, -1.0 * r.solutions[0].u, r.solutions, 0.1));
}
