#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tameproj {

enum class Field { Real, Complex };

std::string_view to_string(Field field);
Field parse_field(std::string_view text);

/// Number of real coordinates used to store one vector of field dimension n.
constexpr std::size_t real_dim(Field field, std::size_t n) {
    return field == Field::Complex ? 2 * n : n;
}

/// Points closer than this are treated as the same point.
inline constexpr double kDedupTolerance = 1e-12;

/// A vector of R^n or C^n. Complex coordinates are interleaved (re, im).
struct Vector {
    Field field = Field::Real;
    std::size_t n = 0;
    std::vector<double> coords;

    Vector() = default;
    Vector(Field f, std::size_t dim, std::vector<double> c);

    std::size_t real_dim() const { return coords.size(); }
};

double norm(const Vector& v);
double norm(std::span<const double> coords);
double distance(std::span<const double> a, std::span<const double> b);

/// Reinterpret a complex vector as a real vector of twice the dimension.
Vector realify(const Vector& v);

/// Finite truncation of a discrete sequence. Coordinates are stored flat,
/// one block of real_dim() doubles per point, in sequence order.
class PointSet {
public:
    PointSet() = default;
    PointSet(Field field, std::size_t n, std::string provenance = {});

    Field field() const { return field_; }
    std::size_t n() const { return n_; }
    std::size_t real_dim() const { return tameproj::real_dim(field_, n_); }
    std::size_t size() const { return real_dim() == 0 ? 0 : coords_.size() / real_dim(); }
    bool empty() const { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * real_dim(), real_dim()};
    }
    Vector vector(std::size_t i) const;
    std::span<const double> flat() const { return coords_; }

    void push_back(std::span<const double> coords);
    void push_back(const Vector& v);
    void reserve(std::size_t count) { coords_.reserve(count * real_dim()); }

    const std::string& provenance() const { return provenance_; }
    void set_provenance(std::string p) { provenance_ = std::move(p); }
    std::optional<double> truncation_radius() const { return truncation_radius_; }
    void set_truncation_radius(std::optional<double> r) { truncation_radius_ = r; }

    std::vector<double> norms() const;

private:
    Field field_ = Field::Real;
    std::size_t n_ = 0;
    std::vector<double> coords_;
    std::string provenance_;
    std::optional<double> truncation_radius_;
};

/// Two equally sized point sets with a bijection between them:
/// source point i corresponds to target point pairing[i].
struct PairedPointSet {
    PointSet source;
    PointSet target;
    std::vector<std::size_t> pairing;

    /// Throws InvalidInput unless sizes agree and pairing is a permutation.
    void validate() const;
};

/// Minimum distance over pairs of distinct points whose norm is at most
/// window_radius. Absent when fewer than two points fall in the window.
std::optional<double> min_pairwise_gap(const PointSet& ps, double window_radius);

/// Exact O(N^2) reference for min_pairwise_gap.
std::optional<double> min_pairwise_gap_bruteforce(const PointSet& ps, double window_radius);

/// Minimum distance over all pairs in a flat coordinate block.
std::optional<double> min_gap_flat(std::span<const double> flat, std::size_t dim);

/// Index pairs (i < j) of points within `tolerance` of each other.
std::vector<std::pair<std::size_t, std::size_t>> near_duplicate_pairs(
    std::span<const double> flat, std::size_t dim, double tolerance = kDedupTolerance);

/// For each point, the lowest kept index within `tolerance` of it (itself if
/// kept). A point is kept unless it lies within tolerance of a lower kept one.
std::vector<std::size_t> dedup_representatives(std::span<const double> flat, std::size_t dim,
                                               double tolerance = kDedupTolerance);

/// Indices of the points kept when each cluster of near-duplicates is
/// represented by its lowest index. Returned in increasing order.
std::vector<std::size_t> dedup_indices(std::span<const double> flat, std::size_t dim,
                                       double tolerance = kDedupTolerance);

}  // namespace tameproj
