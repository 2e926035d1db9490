#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tameproj/core.hpp"
#include "tameproj/rng.hpp"

namespace tameproj {

/// An element of U(n) (Complex) or O(n) (Real), stored row-major. Complex
/// entries are interleaved (re, im).
class GroupElement {
public:
    GroupElement() = default;
    GroupElement(Field field, std::size_t n, std::vector<double> entries);

    static GroupElement identity(Field field, std::size_t n);
    /// Permutation matrix sending coordinate perm[i] to position i.
    static GroupElement permutation(Field field, const std::vector<std::size_t>& perm);

    Field field() const { return field_; }
    std::size_t n() const { return n_; }
    std::complex<double> at(std::size_t row, std::size_t col) const;
    const std::vector<double>& entries() const { return entries_; }

    /// First `rows` field coordinates of g * v, written to out (real storage,
    /// length real_dim(field, rows)).
    void apply_rows(std::span<const double> v, std::size_t rows, std::span<double> out) const;

    /// Max-entry error of g^* g - I.
    double unitarity_residual() const;
    /// Determinant; real for orthogonal elements.
    std::complex<double> determinant() const;

    GroupElement operator*(const GroupElement& rhs) const;

private:
    Field field_ = Field::Real;
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Haar-distributed element of U(n): Gram-Schmidt on a complex Ginibre
/// matrix, which leaves the triangular factor with positive real diagonal.
GroupElement haar_unitary(std::size_t n, RngStream& rng);
/// Haar-distributed element of O(n); same construction with real Gaussians.
GroupElement haar_orthogonal(std::size_t n, RngStream& rng);
GroupElement haar_element(Field field, std::size_t n, RngStream& rng);

/// Uniform point on the unit sphere of R^dim.
Vector sphere_uniform(std::size_t dim, RngStream& rng);
/// Same, written into an existing buffer of length dim.
void sphere_uniform_into(std::span<double> out, RngStream& rng);

struct CapEstimate {
    std::size_t k = 0;
    std::size_t m = 0;
    double epsilon = 0.0;
    double mc_estimate = 0.0;
    double mc_stderr = 0.0;
    double exact_value = 0.0;
    std::size_t samples = 0;

    /// Binomial standard error evaluated at the exact probability.
    double null_stderr() const;
    /// |mc - exact| <= z * max(mc_stderr, null_stderr).
    bool agrees(double z) const;
};

/// P(norm of the first k coordinates <= epsilon) for a uniform point on the
/// unit sphere of R^(k+m); equals I_{epsilon^2}(k/2, m/2).
double cap_measure_exact(std::size_t k, std::size_t m, double epsilon);

/// Closed-form small-epsilon constant: cap_measure_exact ~ C * epsilon^k with
/// C = 1 / ((k/2) * B(k/2, m/2)).
double cap_limit_constant(std::size_t k, std::size_t m);

CapEstimate cap_measure_mc(std::size_t k, std::size_t m, double epsilon, std::size_t samples,
                           RngStream& rng);

enum class CapSource { Exact, MonteCarlo };

struct CapScalingFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::vector<double> epsilons;
    std::vector<double> values;
    /// epsilon^-k * value / C with C from cap_limit_constant.
    std::vector<double> ratio_trend;
    std::vector<CapEstimate> estimates;  // filled for CapSource::MonteCarlo
};

CapScalingFit cap_scaling_fit(std::size_t k, std::size_t m, const std::vector<double>& eps_grid,
                              std::size_t samples_per_point, RngStream& rng,
                              CapSource source = CapSource::Exact);

}  // namespace tameproj
