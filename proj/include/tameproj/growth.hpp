#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tameproj/core.hpp"
#include "tameproj/generators.hpp"

namespace tameproj {

enum class Verdict { Converging, Diverging, Uncertain };
std::string_view to_string(Verdict v);

struct PartialSum {
    std::size_t K = 0;      // number of terms (points ordered by increasing norm)
    double radius = 0.0;    // norm of the K-th point, or the requested radius
    double value = 0.0;     // sum_{k<=K} |v_k|^-s
};

struct SeriesDiagnostics {
    double s = 0.0;
    std::vector<PartialSum> partial_sums;
    std::optional<double> tail_bound_estimate;
    Verdict verdict = Verdict::Uncertain;
    std::optional<double> rho_hat;
    std::size_t excluded_origin_count = 0;
    std::string reason;
};

struct CountingFunction {
    std::vector<double> radii;
    std::vector<std::size_t> counts;
};

struct ExponentEstimate {
    double rho_hat = 0.0;
    double std_error = 0.0;
};

/// Points with norm below this are treated as the origin and left out of
/// every series.
inline constexpr double kOriginTolerance = 1e-12;

/// Partial sums of sum |v_k|^-s with the sequence ordered by increasing
/// norm. Each S_K is accumulated from the smallest term up. Empty
/// checkpoints mean K = 1, 2, 4, ... plus the total count.
SeriesDiagnostics partial_sums(const PointSet& ps, double s, std::vector<std::size_t> checkpoints = {});

/// Same, with checkpoints given as truncation radii (K = N(radius)).
SeriesDiagnostics partial_sums_at_radii(const PointSet& ps, double s, const std::vector<double>& radii);

CountingFunction counting_function(const PointSet& ps, const std::vector<double>& radii);

/// Slope of log N(r) against log r over the top decade [r_max/10, r_max].
/// Needs at least 50 points of norm >= 1.
ExponentEstimate critical_exponent(const PointSet& ps);

struct HypothesisCheck {
    double exponent_used = 0.0;
    SeriesDiagnostics diagnostics;
    Verdict satisfied = Verdict::Uncertain;
};

/// Checks sum |v_k|^-2d (Complex) or sum |v_k|^-d (Real) for a projection
/// onto d < n coordinates.
HypothesisCheck hypothesis_check(const PointSet& ps, std::size_t d);

/// sum over the nonzero lattice points of |gamma|^-(rank + epsilon), at
/// increasing truncation radii (default radius/8, /4, /2, radius).
SeriesDiagnostics lattice_series_check(const LatticeSpec& spec, double epsilon,
                                       std::vector<double> radii = {});

}  // namespace tameproj
