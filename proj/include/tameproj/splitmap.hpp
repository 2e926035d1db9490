#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tameproj/core.hpp"
#include "tameproj/projector.hpp"

namespace tameproj {

/// alpha(a, b) = (a, 0) if |a| > |b|, else (0, b), for C^n = C x C^(n-1).
struct SplitRecord {
    PairedPointSet pairing;
    double max_forward_ratio = 0.0;   // max |alpha(v) - v| / |v| over v != 0
    double max_backward_ratio = 0.0;  // max |w - alpha^-1(w)| / |w| over w != 0
    /// Targets moved outward along their nonzero factor to keep alpha injective.
    std::vector<std::size_t> adjusted;
};

SplitRecord alpha_split(const PointSet& ps);

struct SplitWitness {
    std::size_t source_index = 0;
    double ratio = 0.0;
    double bound = 0.0;
    bool forward = true;
};

struct SplitBoundCheck {
    bool forward_ok = true;
    bool backward_ok = true;
    double max_forward_ratio = 0.0;
    double max_backward_ratio = 0.0;
    std::vector<SplitWitness> witnesses;
};

inline constexpr double kSplitBoundSlack = 1e-12;

/// Recomputes both displacement ratios from the stored pairing and reports
/// every point exceeding 1/sqrt(2) (forward) or 1 (backward) by more than
/// kSplitBoundSlack.
SplitBoundCheck verify_split_bounds(const SplitRecord& sr);

/// Separation reports of the split set projected onto the first factor C
/// and onto the second factor C^(n-1). The split set is alpha(D) taken as a
/// set, i.e. before the collision adjustments, which only exist to keep the
/// pairing a bijection.
std::pair<SeparationReport, SeparationReport> split_projections_discrete(const SplitRecord& sr,
                                                                         const std::vector<double>& schedule,
                                                                         std::optional<double> window_radius);

}  // namespace tameproj
