#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tameproj/errors.hpp"
#include "tameproj/generators.hpp"
#include "tameproj/projector.hpp"
#include "tameproj/stats.hpp"

using namespace tameproj;

namespace {

LatticeSpec standard_lattice(Field field, std::size_t n, std::size_t rank, double radius) {
    LatticeSpec spec{field, n, {}, radius};
    for (std::size_t i = 0; i < rank; ++i) spec.basis.push_back(standard_basis_vector(field, n, i));
    return spec;
}

GroupElement rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return GroupElement(Field::Real, 2, {c, -s, s, c});
}

// Oracle: first row of the rotation applied by hand, all pairs compared.
std::optional<double> brute_force_gap_1d(const PointSet& ps, double theta, double R, double window) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto p = ps.point(i);
        if (std::hypot(p[0], p[1]) > R) continue;
        const double x = std::cos(theta) * p[0] - std::sin(theta) * p[1];
        if (std::abs(x) <= window) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a <= 1e-12; }), xs.end());
    if (xs.size() < 2) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) best = std::min(best, xs[j] - xs[i]);
    return best;
}

}  // namespace

TEST_CASE("apply_projection examples") {
    PointSet ps(Field::Real, 2);
    ps.push_back(Vector(Field::Real, 2, {3, 4}));
    const auto img = apply_projection(Projection(GroupElement::identity(Field::Real, 2), 1), ps);
    REQUIRE(img.size() == 1);
    CHECK(img.point(0)[0] == 3.0);

    RngStream rng(1);
    const auto pts = power_sequence(Field::Complex, 3, 2.0, 500, rng);
    for (int t = 0; t < 20; ++t) {
        const auto g = haar_unitary(3, rng);
        const Projection full(g, 3), line(g, 1);
        std::vector<double> out3(6), out1(2);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double len = norm(pts.point(i));
            full.apply(pts.point(i), out3);
            line.apply(pts.point(i), out1);
            REQUIRE(std::abs(norm(std::span<const double>(out3)) - len) <= 1e-12 * std::max(1.0, len));
            REQUIRE(norm(std::span<const double>(out1)) <= len + 1e-12);
        }
    }
    CHECK_THROWS_AS(Projection(GroupElement::identity(Field::Real, 2), 3), InvalidInput);
    CHECK_THROWS_AS(apply_projection(Projection(GroupElement::identity(Field::Real, 3), 1), ps), InvalidInput);
}

TEST_CASE("apply_projection merges coinciding images") {
    const auto ps = lattice_points(standard_lattice(Field::Real, 2, 2, 3.0));
    const auto img = apply_projection(Projection(GroupElement::identity(Field::Real, 2), 1), ps);
    CHECK(img.size() == 7);  // x in {-3..3}
}

TEST_CASE("separation_report: Z x {0} under a generic rotation") {
    const auto ps = lattice_points(standard_lattice(Field::Real, 2, 1, 160.0));
    const double theta = 0.7;
    const auto rep = separation_report(Projection(rotation(theta), 1), ps, {10, 40, 160});
    REQUIRE(rep.min_gaps.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(rep.min_gaps[i].has_value());
        const auto oracle = brute_force_gap_1d(ps, theta, rep.truncation_radii[i], rep.window_radius);
        REQUIRE(oracle.has_value());
        CHECK(*rep.min_gaps[i] == doctest::Approx(*oracle).epsilon(1e-12));
        CHECK(*rep.min_gaps[i] == doctest::Approx(std::abs(std::cos(theta))).epsilon(1e-12));
    }
    CHECK(rep.verdict == Discreteness::DiscreteLooking);
}

TEST_CASE("separation_report: Z^2 under a rotation with irrational tangent") {
    const auto ps = lattice_points(standard_lattice(Field::Real, 2, 2, 160.0));
    const double theta = std::atan(std::numbers::phi);
    const auto rep = separation_report(Projection(rotation(theta), 1), ps, {10, 40, 160});
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(rep.min_gaps[i].has_value());
        const auto oracle = brute_force_gap_1d(ps, theta, rep.truncation_radii[i], rep.window_radius);
        CHECK(*rep.min_gaps[i] == doctest::Approx(*oracle).epsilon(1e-9));
        if (i > 0) CHECK(*rep.min_gaps[i - 1] >= 2.0 * *rep.min_gaps[i]);
    }
    CHECK(rep.verdict == Discreteness::DenseLooking);
}

TEST_CASE("separation_report: degenerate inputs") {
    PointSet one(Field::Real, 2);
    one.push_back(Vector(Field::Real, 2, {1, 1}));
    const auto rep = separation_report(Projection(rotation(0.3), 1), one, {1, 2, 4});
    CHECK(std::none_of(rep.min_gaps.begin(), rep.min_gaps.end(), [](const auto& g) { return g.has_value(); }));
    CHECK(rep.verdict == Discreteness::Inconclusive);
    CHECK_FALSE(rep.reason.empty());

    const auto empty_first = separation_report(Projection(rotation(0.3), 1), one, {0.1, 0.2, 0.4});
    CHECK(empty_first.verdict == Discreteness::Inconclusive);
    CHECK_FALSE(empty_first.reason.empty());

    CHECK_THROWS_AS(separation_report(Projection(rotation(0.3), 1), one, {1, 2}), InvalidInput);
    CHECK_THROWS_AS(separation_report(Projection(rotation(0.3), 1), one, {1, 3, 2}), InvalidInput);
}

TEST_CASE("classify_gaps rules") {
    using G = std::vector<std::optional<double>>;
    CHECK(classify_gaps(G{1.0, 0.8, 0.5}) == Discreteness::DiscreteLooking);
    CHECK(classify_gaps(G{1.0, 0.4, 0.49}) == Discreteness::DenseLooking);  // 2^-1 at two steps
    CHECK(classify_gaps(G{std::nullopt, 1.0, 0.7}) == Discreteness::DiscreteLooking);
    CHECK(classify_gaps(G{std::nullopt, 1.0, 0.2}) == Discreteness::DenseLooking);
    CHECK(classify_gaps(G{1.0, 0.9, 0.8, 0.4}) == Discreteness::Inconclusive);  // 2^-1.5 = 0.354
    CHECK(classify_gaps(G{1.0, 0.9, 0.8, 0.35}) == Discreteness::DenseLooking);
    CHECK(classify_gaps(G{1.0, 1.0, std::nullopt}) == Discreteness::Inconclusive);
    CHECK(classify_gaps(G{std::nullopt, std::nullopt, 1.0}) == Discreteness::Inconclusive);
}

TEST_CASE("separation report invariants: gaps nonincreasing, crowding nondecreasing") {
    RngStream rng(2);
    const auto ps = power_sequence(Field::Complex, 2, 1.5, 2000, rng);
    const auto sched = default_schedule(ps);
    for (int t = 0; t < 30; ++t) {
        const auto rep = separation_report(Projection(haar_unitary(2, rng), 1), ps, sched);
        for (std::size_t i = 1; i < rep.min_gaps.size(); ++i) {
            CHECK(rep.crowding_counts[i] >= rep.crowding_counts[i - 1]);
            if (rep.min_gaps[i - 1]) {
                REQUIRE(rep.min_gaps[i].has_value());
                CHECK(*rep.min_gaps[i] <= *rep.min_gaps[i - 1]);
            }
        }
    }
}

TEST_CASE("skr probability examples") {
    RngStream rng(3);
    const auto c = skr_probability_mc(Vector(Field::Complex, 2, {10, 0, 0, 0}), 1.0, 1, 100000, rng);
    CHECK(c.exact_value == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(std::abs(c.mc_estimate - 0.01) <= 4.0 * c.mc_stderr);

    const auto r = skr_probability_mc(Vector(Field::Real, 2, {0, 2}), 1.0, 1, 100000, rng);
    CHECK(r.exact_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(r.mc_estimate - 1.0 / 3.0) <= 4.0 * r.mc_stderr);

    const auto inside = skr_probability_mc(Vector(Field::Complex, 3, {0.5, 0, 0, 0.5, 0, 0}), 1.0, 2, 100000, rng);
    CHECK(inside.mc_estimate == 1.0);
    CHECK(inside.exact_value == 1.0);
    CHECK(inside.samples == 0);
    CHECK_THROWS_AS(skr_probability_exact(Field::Complex, 2, 2, 10, 1), InvalidInput);
}

TEST_CASE("skr exact values decay as |v|^-2d") {
    for (std::size_t n : {2u, 3u, 4u}) {
        for (std::size_t d = 1; d < n; ++d) {
            std::vector<double> x, y;
            for (double len : {10.0, 20.0, 40.0, 80.0}) {
                x.push_back(std::log(len));
                y.push_back(std::log(skr_probability_exact(Field::Complex, n, d, len, 1.0)));
            }
            CHECK(std::abs(-least_squares(x, y).slope - 2.0 * d) <= 0.1);
        }
    }
}

TEST_CASE("counting inequality examples") {
    RngStream rng(4);
    const auto plane = lattice_points(standard_lattice(Field::Real, 2, 2, 6.0));
    const auto n1 = counting_inequality_experiment(plane, 1, 0.5, 1, 2000, rng);
    CHECK(n1.holds);
    CHECK(n1.lhs <= n1.rhs);
    CHECK(n1.mu_hat == 1.0);  // the origin is always within r

    const auto n5 = counting_inequality_experiment(plane, 1, 0.5, 5, 2000, rng);
    CHECK(n5.holds);

    PointSet far(Field::Complex, 2);
    for (int i = 0; i < 50; ++i) {
        auto v = sphere_uniform(4, rng).coords;
        for (double& c : v) c *= 1000.0;
        far.push_back(std::span<const double>(v));
    }
    const auto n10 = counting_inequality_experiment(far, 1, 1.0, 10, 2000, rng);
    CHECK(n10.rhs < 1.0);
    CHECK(n10.lhs == 0.0);
    CHECK(n10.holds);

    CHECK_THROWS_AS(counting_inequality_experiment(plane, 1, 0.5, 1, 999, rng), InvalidInput);
    CHECK_THROWS_AS(counting_inequality_experiment(plane, 2, 0.5, 1, 1000, rng), InvalidInput);
}

TEST_CASE("projection_search examples") {
    RngStream rng(5);
    const auto line = lattice_points(standard_lattice(Field::Complex, 2, 1, 200.0));
    const auto a = projection_search(line, 1, 16, default_schedule(line), std::nullopt, rng);
    CHECK(a.report.verdict == Discreteness::DiscreteLooking);
    CHECK(a.all_scores.size() == 16);

    const auto seq = power_sequence(Field::Complex, 3, 3.0, 20000, rng);
    const auto b = projection_search(seq, 2, 16, default_schedule(seq), std::nullopt, rng);
    CHECK(b.report.verdict == Discreteness::DiscreteLooking);

    const auto rank4 = lattice_points(standard_lattice(Field::Complex, 2, 4, 16.0));
    const auto c = projection_search(rank4, 1, 16, default_schedule(rank4), std::nullopt, rng);
    CHECK(c.report.verdict != Discreteness::DiscreteLooking);
}

TEST_CASE("projection_search picks the argmax and is deterministic") {
    RngStream a(6), b(6);
    const auto ps = lattice_points(standard_lattice(Field::Complex, 2, 2, 12.0));
    const auto sched = default_schedule(ps);
    const auto x = projection_search(ps, 1, 8, sched, std::nullopt, a);
    const auto y = projection_search(ps, 1, 8, sched, std::nullopt, b);
    CHECK(x.best_trial == y.best_trial);
    CHECK(x.best.g.entries() == y.best.g.entries());
    const auto& best = x.all_scores[x.best_trial];
    for (const auto& s : x.all_scores) {
        if (s.score) CHECK(*s.score <= *best.score);
    }
}

TEST_CASE("projection_search with no viable trial") {
    RngStream rng(7);
    PointSet one(Field::Complex, 2);
    one.push_back(Vector(Field::Complex, 2, {1, 0, 0, 0}));
    try {
        projection_search(one, 1, 4, {0.25, 0.5, 1.0}, std::nullopt, rng);
        FAIL("expected NoViableProjection");
    } catch (const NoViableProjection& e) {
        CHECK(e.reports().size() == 4);
    }
    CHECK_THROWS_AS(projection_search(one, 2, 4, {0.25, 0.5, 1.0}, std::nullopt, rng), InvalidInput);
}

TEST_CASE("min-gap scores are invariant under a fixed unitary change of coordinates") {
    RngStream rng(8);
    const auto ps = power_sequence(Field::Complex, 2, 1.5, 400, rng);
    const auto h = haar_unitary(2, rng);
    PointSet moved(Field::Complex, 2);
    std::vector<double> buf(4);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        h.apply_rows(ps.point(i), 2, buf);
        moved.push_back(std::span<const double>(buf));
    }
    const auto sched = default_schedule(ps);
    const double window = sched.back();
    const auto scores = [&](const PointSet& set, RngStream& r) {
        std::vector<double> out;
        for (int t = 0; t < 1000; ++t) {
            const auto rep = separation_report(Projection(haar_unitary(2, r), 1), set, sched, window);
            out.push_back(*rep.min_gaps.back());
        }
        return out;
    };
    RngStream r1(81), r2(82);
    const auto s1 = scores(ps, r1);
    const auto s2 = scores(moved, r2);
    const double d = ks_statistic(s1, s2);
    MESSAGE("KS statistic " << d);
    CHECK(d < ks_critical_value(0.01, s1.size(), s2.size()));
}
