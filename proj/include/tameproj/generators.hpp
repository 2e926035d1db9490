#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tameproj/core.hpp"
#include "tameproj/rng.hpp"

namespace tameproj {

/// Discrete subgroup generated over Z by `basis`, truncated to the closed
/// ball of the given radius.
struct LatticeSpec {
    Field field = Field::Real;
    std::size_t n = 0;
    std::vector<Vector> basis;
    double radius = 0.0;

    std::size_t rank() const { return basis.size(); }
    std::string describe() const;
};

inline constexpr std::size_t kDefaultPointBudget = 1'000'000;

/// All integer combinations of the basis with norm <= radius, sorted by
/// norm (ties keep enumeration order). Coefficients are enumerated over the
/// box |m_i| <= radius / sigma_min, where sigma_min^2 is the smallest
/// eigenvalue of the Gram matrix, so nothing inside the ball is missed.
PointSet lattice_points(const LatticeSpec& spec, std::size_t budget = kDefaultPointBudget);

/// zeta(v) = v + t u with u uniform on the sphere and t uniform in
/// [0, lambda |v| + K]. Pairing is the identity.
PairedPointSet perturb(const PointSet& ps, double lambda, double K, RngStream& rng);

/// Point k (1-based) has norm k^(1/rho) and a uniformly random direction.
PointSet power_sequence(Field field, std::size_t n, double rho, std::size_t count, RngStream& rng);

/// Appends one zero field coordinate to every point.
PointSet embed_pad(const PointSet& ps);

/// Standard basis vector e_index (0-based) of the real coordinate space of
/// (field, n), as a field vector.
Vector standard_basis_vector(Field field, std::size_t n, std::size_t index);

}  // namespace tameproj
