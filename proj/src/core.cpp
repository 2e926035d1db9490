#include "tameproj/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "tameproj/errors.hpp"

namespace tameproj {

std::string_view to_string(Field field) {
    return field == Field::Complex ? "complex" : "real";
}

Field parse_field(std::string_view text) {
    if (text == "real") return Field::Real;
    if (text == "complex") return Field::Complex;
    throw InvalidInput("field must be 'real' or 'complex', got '" + std::string(text) + "'");
}

Vector::Vector(Field f, std::size_t dim, std::vector<double> c)
    : field(f), n(dim), coords(std::move(c)) {
    if (n == 0) throw InvalidInput("vector dimension must be positive");
    if (coords.size() != tameproj::real_dim(field, n)) {
        throw InvalidInput("vector has " + std::to_string(coords.size()) +
                           " real coordinates, expected " +
                           std::to_string(tameproj::real_dim(field, n)));
    }
}

double norm(std::span<const double> coords) {
    double sum = 0.0;
    for (double x : coords) sum += x * x;
    return std::sqrt(sum);
}

double norm(const Vector& v) {
    for (double x : v.coords) {
        if (!std::isfinite(x)) throw InvalidInput("vector has a non-finite coordinate");
    }
    return norm(std::span<const double>(v.coords));
}

double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Vector realify(const Vector& v) {
    if (v.field != Field::Complex) throw InvalidInput("realify expects a complex vector");
    return Vector(Field::Real, 2 * v.n, v.coords);
}

PointSet::PointSet(Field field, std::size_t n, std::string provenance)
    : field_(field), n_(n), provenance_(std::move(provenance)) {
    if (n == 0) throw InvalidInput("point set dimension must be positive");
}

Vector PointSet::vector(std::size_t i) const {
    auto p = point(i);
    return Vector(field_, n_, std::vector<double>(p.begin(), p.end()));
}

void PointSet::push_back(std::span<const double> coords) {
    if (coords.size() != real_dim()) {
        throw InvalidInput("point has " + std::to_string(coords.size()) +
                           " real coordinates, expected " + std::to_string(real_dim()));
    }
    for (double x : coords) {
        if (!std::isfinite(x)) throw InvalidInput("point has a non-finite coordinate");
    }
    coords_.insert(coords_.end(), coords.begin(), coords.end());
}

void PointSet::push_back(const Vector& v) {
    if (v.field != field_ || v.n != n_) throw InvalidInput("vector does not match point set field/dimension");
    push_back(std::span<const double>(v.coords));
}

std::vector<double> PointSet::norms() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm(point(i));
    return out;
}

void PairedPointSet::validate() const {
    if (source.size() != target.size()) throw InvalidInput("paired sets differ in size");
    if (pairing.size() != source.size()) throw InvalidInput("pairing size does not match point count");
    std::vector<char> seen(pairing.size(), 0);
    for (std::size_t t : pairing) {
        if (t >= pairing.size() || seen[t]) throw InvalidInput("pairing is not a permutation");
        seen[t] = 1;
    }
}

namespace {

// Fixed sweep direction with coordinates proportional to square roots of
// primes, so no nonzero integer vector is orthogonal to it.
std::vector<double> sweep_direction(std::size_t dim) {
    std::vector<double> u;
    u.reserve(dim);
    for (unsigned p = 2; u.size() < dim; ++p) {
        bool prime = true;
        for (unsigned q = 2; q * q <= p; ++q) {
            if (p % q == 0) {
                prime = false;
                break;
            }
        }
        if (prime) u.push_back(std::sqrt(static_cast<double>(p)));
    }
    const double len = norm(std::span<const double>(u));
    for (double& x : u) x /= len;
    return u;
}

struct Sweep {
    std::vector<std::size_t> order;
    std::vector<double> key;
    std::vector<double> len;
};

Sweep make_sweep(std::span<const double> flat, std::size_t dim) {
    const std::size_t count = dim == 0 ? 0 : flat.size() / dim;
    const auto u = sweep_direction(dim);
    Sweep s;
    s.key.resize(count);
    s.len.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto p = flat.subspan(i * dim, dim);
        double dot = 0.0;
        for (std::size_t c = 0; c < dim; ++c) dot += p[c] * u[c];
        s.key[i] = dot;
        s.len[i] = norm(p);
    }
    s.order.resize(count);
    std::iota(s.order.begin(), s.order.end(), std::size_t{0});
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](std::size_t a, std::size_t b) { return s.key[a] < s.key[b]; });
    return s;
}

// Bound on the rounding error of a difference of two sweep keys.
double key_slack(const Sweep& s, std::size_t a, std::size_t b, std::size_t dim) {
    return 4.0 * static_cast<double>(dim + 1) * std::numeric_limits<double>::epsilon() *
               (s.len[a] + s.len[b]) +
           std::numeric_limits<double>::min();
}

}  // namespace

std::optional<double> min_gap_flat(std::span<const double> flat, std::size_t dim) {
    const std::size_t count = dim == 0 ? 0 : flat.size() / dim;
    if (count < 2) return std::nullopt;
    const Sweep s = make_sweep(flat, dim);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < count; ++a) {
        const std::size_t i = s.order[a];
        for (std::size_t b = a + 1; b < count; ++b) {
            const std::size_t j = s.order[b];
            if (s.key[j] - s.key[i] > best + key_slack(s, i, j, dim)) break;
            const double d = distance(flat.subspan(i * dim, dim), flat.subspan(j * dim, dim));
            best = std::min(best, d);
        }
    }
    return best;
}

namespace {

std::vector<double> window_block(const PointSet& ps, double window_radius) {
    if (!(window_radius > 0.0)) throw InvalidInput("window_radius must be positive");
    std::vector<double> block;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto p = ps.point(i);
        if (norm(p) <= window_radius) block.insert(block.end(), p.begin(), p.end());
    }
    return block;
}

}  // namespace

std::optional<double> min_pairwise_gap(const PointSet& ps, double window_radius) {
    const auto block = window_block(ps, window_radius);
    return min_gap_flat(block, ps.real_dim());
}

std::optional<double> min_pairwise_gap_bruteforce(const PointSet& ps, double window_radius) {
    const auto block = window_block(ps, window_radius);
    const std::size_t dim = ps.real_dim();
    const std::size_t count = block.size() / dim;
    if (count < 2) return std::nullopt;
    std::span<const double> flat(block);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            best = std::min(best, distance(flat.subspan(i * dim, dim), flat.subspan(j * dim, dim)));
        }
    }
    return best;
}

std::vector<std::pair<std::size_t, std::size_t>> near_duplicate_pairs(std::span<const double> flat,
                                                                      std::size_t dim,
                                                                      double tolerance) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t count = dim == 0 ? 0 : flat.size() / dim;
    if (count < 2) return pairs;
    const Sweep s = make_sweep(flat, dim);
    for (std::size_t a = 0; a < count; ++a) {
        const std::size_t i = s.order[a];
        for (std::size_t b = a + 1; b < count; ++b) {
            const std::size_t j = s.order[b];
            if (s.key[j] - s.key[i] > tolerance + key_slack(s, i, j, dim)) break;
            if (distance(flat.subspan(i * dim, dim), flat.subspan(j * dim, dim)) <= tolerance) {
                pairs.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<std::size_t> dedup_representatives(std::span<const double> flat, std::size_t dim, double tolerance) {
    const std::size_t count = dim == 0 ? 0 : flat.size() / dim;
    std::vector<std::size_t> rep(count);
    if (count == 0) return rep;
    const Sweep s = make_sweep(flat, dim);
    const double slack_scale = 8.0 * static_cast<double>(dim + 1) * std::numeric_limits<double>::epsilon();
    double max_len = 0.0;
    for (double l : s.len) max_len = std::max(max_len, l);
    const double reach = tolerance + slack_scale * max_len + std::numeric_limits<double>::min();
    std::multimap<double, std::size_t> kept;
    for (std::size_t j = 0; j < count; ++j) {
        rep[j] = j;
        const auto pj = flat.subspan(j * dim, dim);
        for (auto it = kept.lower_bound(s.key[j] - reach); it != kept.end() && it->first <= s.key[j] + reach; ++it) {
            if (distance(flat.subspan(it->second * dim, dim), pj) <= tolerance) {
                rep[j] = std::min(rep[j], it->second);
            }
        }
        if (rep[j] == j) kept.emplace(s.key[j], j);
    }
    return rep;
}

std::vector<std::size_t> dedup_indices(std::span<const double> flat, std::size_t dim, double tolerance) {
    const auto rep = dedup_representatives(flat, dim, tolerance);
    std::vector<std::size_t> out;
    out.reserve(rep.size());
    for (std::size_t j = 0; j < rep.size(); ++j) {
        if (rep[j] == j) out.push_back(j);
    }
    return out;
}

}  // namespace tameproj
