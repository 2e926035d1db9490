#pragma once

#include <cstdint>
#include <span>

namespace tameproj {

/// Running mean and sum of squared deviations; mergeable.
class MomentAccumulator {
public:
    void push(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    /// Unbiased sample variance; zero for fewer than two samples.
    double variance() const;
    /// Standard error of the mean.
    double stderr_of_mean() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct x values.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value at significance alpha.
double ks_critical_value(double alpha, std::size_t n_a, std::size_t n_b);

}  // namespace tameproj
