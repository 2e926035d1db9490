#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "tameproj/errors.hpp"
#include "tameproj/generators.hpp"
#include "tameproj/rng.hpp"

using namespace tameproj;

namespace {

LatticeSpec standard_lattice(Field field, std::size_t n, std::size_t rank, double radius) {
    LatticeSpec spec{field, n, {}, radius};
    for (std::size_t i = 0; i < rank; ++i) spec.basis.push_back(standard_basis_vector(field, n, i));
    return spec;
}

// Oracle: scan a generous coefficient box and keep what lies in the ball.
std::size_t brute_force_count(const LatticeSpec& spec, int box) {
    const std::size_t r = spec.rank();
    const std::size_t dim = real_dim(spec.field, spec.n);
    std::vector<int> m(r, -box);
    std::size_t count = 0;
    for (;;) {
        std::vector<double> v(dim, 0.0);
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t i = 0; i < dim; ++i) v[i] += m[j] * spec.basis[j].coords[i];
        double s = 0.0;
        for (double x : v) s += x * x;
        if (std::sqrt(s) <= spec.radius) ++count;
        std::size_t j = 0;
        while (j < r && m[j] == box) m[j++] = -box;
        if (j == r) break;
        ++m[j];
    }
    return count;
}

std::set<std::vector<double>> as_set(const PointSet& ps) {
    std::set<std::vector<double>> out;
    for (std::size_t i = 0; i < ps.size(); ++i) out.insert({ps.point(i).begin(), ps.point(i).end()});
    return out;
}

}  // namespace

TEST_CASE("lattice_points: segment of Z in R^2") {
    const auto ps = lattice_points(standard_lattice(Field::Real, 2, 1, 2.5));
    REQUIRE(ps.size() == 5);
    const std::set<std::vector<double>> expected{{-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}};
    CHECK(as_set(ps) == expected);
    CHECK(ps.truncation_radius() == 2.5);
}

TEST_CASE("lattice_points: Z^2 disk of radius 5 has 81 points") {
    const auto spec = standard_lattice(Field::Real, 2, 2, 5.0);
    const std::size_t oracle = brute_force_count(spec, 8);
    CHECK(oracle == 81);
    CHECK(lattice_points(spec).size() == oracle);
}

TEST_CASE("lattice_points: trivial subgroup") {
    const auto ps = lattice_points(LatticeSpec{Field::Complex, 2, {}, 3.0});
    REQUIRE(ps.size() == 1);
    CHECK(norm(ps.point(0)) == 0.0);
}

TEST_CASE("lattice_points: skewed bases match a brute-force box") {
    LatticeSpec skew{Field::Real, 2, {Vector(Field::Real, 2, {1.0, 0.3}), Vector(Field::Real, 2, {0.9, 1.1})}, 6.0};
    CHECK(lattice_points(skew).size() == brute_force_count(skew, 40));

    LatticeSpec c{Field::Complex, 2,
                  {Vector(Field::Complex, 2, {1, 0, 0, 0}), Vector(Field::Complex, 2, {0.5, 0.8, 0, 0}),
                   Vector(Field::Complex, 2, {0.1, 0, 1.3, 0.2})},
                  4.0};
    CHECK(lattice_points(c).size() == brute_force_count(c, 15));
}

TEST_CASE("lattice_points: sorted by norm, symmetric, monotone in radius") {
    const auto spec = standard_lattice(Field::Complex, 2, 3, 4.5);
    const auto ps = lattice_points(spec);
    const auto norms = ps.norms();
    CHECK(std::is_sorted(norms.begin(), norms.end()));
    const auto pts = as_set(ps);
    for (auto v : pts) {
        for (double& x : v) x = -x + 0.0;
        CHECK(pts.count(v) == 1);
    }
    std::size_t prev = 0;
    for (double r : {0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
        auto s = spec;
        s.radius = r;
        const auto count = lattice_points(s).size();
        CHECK(count >= prev);
        prev = count;
    }
    CHECK(near_duplicate_pairs(ps.flat(), ps.real_dim()).empty());
}

TEST_CASE("lattice_points: errors") {
    LatticeSpec dependent{Field::Real, 2, {Vector(Field::Real, 2, {1, 1}), Vector(Field::Real, 2, {2, 2})}, 3.0};
    CHECK_THROWS_AS(lattice_points(dependent), InvalidInput);
    auto too_many = standard_lattice(Field::Real, 3, 3, 30.0);
    CHECK_THROWS_AS(lattice_points(too_many, 1000), BudgetExceeded);
    LatticeSpec over{Field::Real, 1, {Vector(Field::Real, 1, {1}), Vector(Field::Real, 1, {2})}, 3.0};
    CHECK_THROWS_AS(lattice_points(over), InvalidInput);
    auto bad_radius = standard_lattice(Field::Real, 2, 1, -1.0);
    CHECK_THROWS_AS(lattice_points(bad_radius), InvalidInput);
}

TEST_CASE("perturb: origin moves at most K") {
    PointSet origin(Field::Complex, 2);
    origin.push_back(std::vector<double>(4, 0.0));
    RngStream rng(1);
    const auto p = perturb(origin, 0.5, 1.0, rng);
    REQUIRE(p.target.size() == 1);
    CHECK(norm(p.target.point(0)) <= 1.0);
}

TEST_CASE("perturb: bound holds for every pair") {
    RngStream rng(2);
    const auto ps = power_sequence(Field::Real, 3, 2.0, 500, rng);
    for (auto [lambda, K] : {std::pair{0.01, 0.01}, std::pair{0.5, 2.0}, std::pair{0.99, 0.1}}) {
        const auto p = perturb(ps, lambda, K, rng);
        p.validate();
        double worst = -1e300;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const auto v = p.source.point(i);
            const auto w = p.target.point(p.pairing[i]);
            worst = std::max(worst, distance(v, w) - lambda * norm(v) - K);
        }
        CHECK(worst <= 0.0);
        CHECK(near_duplicate_pairs(p.target.flat(), p.target.real_dim()).empty());
    }
}

TEST_CASE("perturb: Z x {0} in C^2 with lambda 0.3, K 1, seed 7") {
    LatticeSpec spec{Field::Complex, 2, {standard_basis_vector(Field::Complex, 2, 0)}, 200.0};
    const auto ps = lattice_points(spec);
    RngStream rng(7);
    const auto p = perturb(ps, 0.3, 1.0, rng);
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double bound = 0.3 * norm(ps.point(i)) + 1.0;
        max_ratio = std::max(max_ratio, distance(ps.point(i), p.target.point(i)) / bound);
    }
    MESSAGE("max displacement ratio: " << max_ratio);
    CHECK(max_ratio <= 1.0);
    CHECK(max_ratio > 0.9);  // magnitudes are uniform on the full interval
}

TEST_CASE("perturb: deterministic given the stream, and validates parameters") {
    RngStream a(5), b(5);
    const auto ps = power_sequence(Field::Complex, 2, 1.0, 30, a);
    power_sequence(Field::Complex, 2, 1.0, 30, b);
    const auto pa = perturb(ps, 0.4, 1.0, a);
    const auto pb = perturb(ps, 0.4, 1.0, b);
    CHECK(std::equal(pa.target.flat().begin(), pa.target.flat().end(), pb.target.flat().begin()));
    CHECK_THROWS_AS(perturb(ps, 1.0, 1.0, a), InvalidInput);
    CHECK_THROWS_AS(perturb(ps, 0.0, 1.0, a), InvalidInput);
    CHECK_THROWS_AS(perturb(ps, 0.5, 0.0, a), InvalidInput);
}

TEST_CASE("power_sequence norms") {
    RngStream rng(3);
    const auto a = power_sequence(Field::Real, 2, 1.0, 3, rng);
    CHECK(norm(a.point(0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(a.point(1)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(norm(a.point(2)) == doctest::Approx(3.0).epsilon(1e-14));

    const auto b = power_sequence(Field::Complex, 3, 2.0, 4, rng);
    const double expected[] = {1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(norm(b.point(i)) == doctest::Approx(expected[i]).epsilon(1e-14));

    const auto c = power_sequence(Field::Real, 3, 3.0, 1000, rng);
    std::size_t oracle = 0;
    for (int k = 1; k <= 1000; ++k) oracle += std::cbrt(double(k)) <= 5.0 + 1e-9 ? 1 : 0;
    CHECK(oracle == 125);
    std::size_t count = 0;
    for (double r : c.norms()) count += r <= 5.0 + 1e-9 ? 1 : 0;
    CHECK(count == oracle);
    CHECK(c.provenance().find("\"rho\":3") != std::string::npos);
    CHECK_THROWS_AS(power_sequence(Field::Real, 3, 0.0, 10, rng), InvalidInput);
    CHECK_THROWS_AS(power_sequence(Field::Real, 3, 1.0, 0, rng), InvalidInput);
}

TEST_CASE("power_sequence partial sums stay below the integral bound") {
    RngStream rng(4);
    const auto ps = power_sequence(Field::Real, 2, 2.0, 100000, rng);
    auto norms = ps.norms();
    std::sort(norms.rbegin(), norms.rend());
    double sum = 0.0;
    for (double r : norms) sum += std::pow(r, -3.0);
    MESSAGE("S = " << sum);
    CHECK(sum <= 3.0);
    CHECK(sum > 2.5);  // zeta(3/2) minus a tail of about 2/sqrt(1e5)
}

TEST_CASE("embed_pad") {
    PointSet ps(Field::Complex, 1);
    ps.push_back(std::vector<double>{1, 0});
    ps.push_back(std::vector<double>{2, 0});
    const auto e = embed_pad(ps);
    CHECK(e.n() == 2);
    CHECK(std::vector<double>(e.point(0).begin(), e.point(0).end()) == std::vector<double>{1, 0, 0, 0});
    CHECK(std::vector<double>(e.point(1).begin(), e.point(1).end()) == std::vector<double>{2, 0, 0, 0});

    RngStream rng(6);
    const auto src = power_sequence(Field::Real, 3, 1.5, 100, rng);
    const auto pad = embed_pad(src);
    for (std::size_t i = 0; i < src.size(); ++i) {
        CHECK(norm(pad.point(i)) == norm(src.point(i)));
        CHECK(std::equal(src.point(i).begin(), src.point(i).end(), pad.point(i).begin()));
    }
}
