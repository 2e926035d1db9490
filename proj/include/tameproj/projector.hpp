#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tameproj/core.hpp"
#include "tameproj/errors.hpp"
#include "tameproj/rng.hpp"
#include "tameproj/sampling.hpp"

namespace tameproj {

/// pi_g = L o g, where L keeps the first d field coordinates.
struct Projection {
    GroupElement g;
    std::size_t d = 0;

    Projection() = default;
    Projection(GroupElement element, std::size_t target_dim);

    Field field() const { return g.field(); }
    std::size_t n() const { return g.n(); }
    /// Writes the image of one point (real storage, real_dim(field, d)).
    void apply(std::span<const double> v, std::span<double> out) const;
};

/// Image set pi_g(D): near-coincident images (within kDedupTolerance) are
/// merged, keeping the first in point order.
PointSet apply_projection(const Projection& p, const PointSet& ps);

enum class Discreteness { DiscreteLooking, DenseLooking, Inconclusive };
std::string_view to_string(Discreteness d);

struct SeparationReport {
    std::vector<double> truncation_radii;
    double window_radius = 0.0;
    std::vector<std::optional<double>> min_gaps;
    std::vector<std::size_t> crowding_counts;
    Discreteness verdict = Discreteness::Inconclusive;
    std::string reason;
};

/// Compares the min gap at the last truncation with the earliest one present.
/// Over `steps` schedule intervals: DiscreteLooking if last >= first / 2,
/// DenseLooking if last <= first * 2^(-steps/2), otherwise Inconclusive.
Discreteness classify_gaps(const std::vector<std::optional<double>>& min_gaps, std::string* reason = nullptr);

/// For each truncation radius R, projects the source points with |v| <= R,
/// records the min gap between distinct image points inside the window and
/// the number of points whose image lands in the window. Without an explicit
/// window the median distinct image norm of the first truncation is used
/// (falling back to the maximum, then to later truncations, while it is 0).
SeparationReport separation_report(const Projection& p, const PointSet& ps,
                                   const std::vector<double>& schedule,
                                   std::optional<double> window_radius = std::nullopt);

/// {R/16, R/8, R/4, R/2, R} with R the largest norm in ps.
std::vector<double> default_schedule(const PointSet& ps);

/// Fraction of Haar draws g with |pi_g(v)| <= r, with the exact cap value
/// for epsilon = r / |v| alongside.
CapEstimate skr_probability_mc(const Vector& v, double r, std::size_t d, std::size_t trials, RngStream& rng);

/// Exact mu(S_{k,r}) for a point of norm `length`.
double skr_probability_exact(Field field, std::size_t n, std::size_t d, double length, double r);

struct CountingInequality {
    std::size_t N = 0;
    std::size_t trials = 0;
    double mu_hat = 0.0;      // fraction of draws with at least N points within r
    double lhs = 0.0;         // N * mu_hat
    double lhs_stderr = 0.0;
    double rhs = 0.0;         // sum of exact per-point probabilities
    bool holds = false;
};

CountingInequality counting_inequality_experiment(const PointSet& ps, std::size_t d, double r, std::size_t N,
                                                  std::size_t trials, RngStream& rng);

struct TrialScore {
    std::size_t trial = 0;
    std::optional<double> score;     // min gap at the largest truncation
    std::optional<double> tiebreak;  // min gap at the next-smaller truncation
    Discreteness verdict = Discreteness::Inconclusive;
};

struct SearchResult {
    Projection best;
    std::size_t best_trial = 0;
    SeparationReport report;
    std::vector<TrialScore> all_scores;
    std::vector<SeparationReport> reports;
};

class NoViableProjection : public Error {
public:
    NoViableProjection(const std::string& what, std::vector<SeparationReport> reports)
        : Error(what), reports_(std::move(reports)) {}
    const std::vector<SeparationReport>& reports() const { return reports_; }

private:
    std::vector<SeparationReport> reports_;
};

/// Draws `trials` Haar elements and keeps the one whose image has the
/// largest min gap at the largest truncation.
SearchResult projection_search(const PointSet& ps, std::size_t d, std::size_t trials,
                               const std::vector<double>& schedule, std::optional<double> window_radius,
                               RngStream& rng);

}  // namespace tameproj
