#include "tameproj/growth.hpp"

#include <algorithm>
#include <cmath>

#include "tameproj/errors.hpp"
#include "tameproj/stats.hpp"

namespace tameproj {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "Converging";
        case Verdict::Diverging: return "Diverging";
        case Verdict::Uncertain: return "Uncertain";
    }
    return "Uncertain";
}

namespace {

// Exponent separation around rho_hat; also the plateau rule on the last two
// checkpoints once more than 1e4 terms are summed.
constexpr double kExponentMargin = 0.1;
constexpr std::size_t kPlateauMinTerms = 10'000;
constexpr double kPlateauRelativeGrowth = 0.01;

struct SortedNorms {
    std::vector<double> nonzero;  // ascending
    std::size_t origin_count = 0;
};

SortedNorms sorted_norms(const PointSet& ps) {
    SortedNorms out;
    for (double r : ps.norms()) {
        if (r < kOriginTolerance) {
            ++out.origin_count;
        } else {
            out.nonzero.push_back(r);
        }
    }
    std::sort(out.nonzero.begin(), out.nonzero.end());
    return out;
}

double sum_first(const std::vector<double>& norms, std::size_t K, double s) {
    double sum = 0.0;
    for (std::size_t i = K; i-- > 0;) sum += std::pow(norms[i], -s);
    return sum;
}

void apply_verdict(SeriesDiagnostics& diag, const PointSet& ps) {
    try {
        const auto est = critical_exponent(ps);
        diag.rho_hat = est.rho_hat;
    } catch (const InsufficientData& e) {
        diag.reason = e.what();
    }
    if (diag.rho_hat) {
        const double rho = *diag.rho_hat;
        if (diag.s >= rho + kExponentMargin) {
            diag.verdict = Verdict::Converging;
        } else if (diag.s <= rho - kExponentMargin) {
            diag.verdict = Verdict::Diverging;
        } else {
            diag.verdict = Verdict::Uncertain;
            diag.reason = "s within 0.1 of the estimated critical exponent";
        }
    }
    const auto& ps_list = diag.partial_sums;
    if (ps_list.size() >= 2) {
        const auto& prev = ps_list[ps_list.size() - 2];
        const auto& last = ps_list.back();
        if (prev.K > kPlateauMinTerms && last.value - prev.value > kPlateauRelativeGrowth * prev.value) {
            diag.verdict = Verdict::Diverging;
            diag.reason = "partial sums still grow by more than 1% between the last two checkpoints";
        }
    }
    if (diag.verdict == Verdict::Converging && diag.rho_hat && !ps_list.empty()) {
        const double rho = *diag.rho_hat;
        const auto& last = ps_list.back();
        diag.tail_bound_estimate =
            static_cast<double>(last.K) * rho / ((diag.s - rho) * std::pow(last.radius, diag.s));
    }
}

void check_s(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("series exponent s must be positive");
}

}  // namespace

SeriesDiagnostics partial_sums(const PointSet& ps, double s, std::vector<std::size_t> checkpoints) {
    check_s(s);
    const auto sorted = sorted_norms(ps);
    const std::size_t total = sorted.nonzero.size();
    if (checkpoints.empty()) {
        for (std::size_t K = 1; K < total; K *= 2) checkpoints.push_back(K);
        if (total > 0) checkpoints.push_back(total);
    }
    SeriesDiagnostics diag;
    diag.s = s;
    diag.excluded_origin_count = sorted.origin_count;
    std::size_t prev = 0;
    for (std::size_t K : checkpoints) {
        if (K == 0 || K > total) throw InvalidInput("checkpoint K = " + std::to_string(K) + " outside [1, " + std::to_string(total) + "]");
        if (K <= prev) throw InvalidInput("checkpoints must be strictly increasing");
        prev = K;
        diag.partial_sums.push_back({K, sorted.nonzero[K - 1], sum_first(sorted.nonzero, K, s)});
    }
    apply_verdict(diag, ps);
    return diag;
}

SeriesDiagnostics partial_sums_at_radii(const PointSet& ps, double s, const std::vector<double>& radii) {
    check_s(s);
    const auto sorted = sorted_norms(ps);
    SeriesDiagnostics diag;
    diag.s = s;
    diag.excluded_origin_count = sorted.origin_count;
    double prev_r = 0.0;
    for (double r : radii) {
        if (!(r > prev_r)) throw InvalidInput("radii must be positive and strictly increasing");
        prev_r = r;
        const auto K = static_cast<std::size_t>(
            std::upper_bound(sorted.nonzero.begin(), sorted.nonzero.end(), r) - sorted.nonzero.begin());
        if (K == 0) continue;
        if (!diag.partial_sums.empty() && diag.partial_sums.back().K == K) continue;
        diag.partial_sums.push_back({K, r, sum_first(sorted.nonzero, K, s)});
    }
    apply_verdict(diag, ps);
    return diag;
}

CountingFunction counting_function(const PointSet& ps, const std::vector<double>& radii) {
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw InvalidInput("radii must be strictly increasing");
    }
    CountingFunction cf;
    cf.radii = radii;
    cf.counts.assign(radii.size(), 0);
    const auto norms = ps.norms();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::size_t count = 0;
        for (double r : norms) count += r <= radii[i] ? 1 : 0;
        cf.counts[i] = count;
    }
    return cf;
}

ExponentEstimate critical_exponent(const PointSet& ps) {
    auto norms = ps.norms();
    std::sort(norms.begin(), norms.end());
    const auto at_least_one = norms.end() - std::lower_bound(norms.begin(), norms.end(), 1.0);
    if (at_least_one < 50) {
        throw InsufficientData("critical_exponent needs at least 50 points of norm >= 1, got " +
                               std::to_string(at_least_one));
    }
    constexpr int kRadii = 40;
    const double r_max = norms.back();
    const double r_min = r_max / 10.0;
    std::vector<double> log_r, log_n;
    for (int i = 0; i < kRadii; ++i) {
        const double r = r_min * std::pow(10.0, static_cast<double>(i) / (kRadii - 1));
        const auto count = std::upper_bound(norms.begin(), norms.end(), r) - norms.begin();
        if (count == 0) continue;
        log_r.push_back(std::log(r));
        log_n.push_back(std::log(static_cast<double>(count)));
    }
    const auto fit = least_squares(log_r, log_n);
    return {fit.slope, fit.slope_stderr};
}

HypothesisCheck hypothesis_check(const PointSet& ps, std::size_t d) {
    if (d == 0 || d >= ps.n()) {
        throw InvalidInput("target dimension d must satisfy 0 < d < n = " + std::to_string(ps.n()));
    }
    HypothesisCheck out;
    out.exponent_used = static_cast<double>(ps.field() == Field::Complex ? 2 * d : d);
    out.diagnostics = partial_sums(ps, out.exponent_used);
    out.satisfied = out.diagnostics.verdict;
    return out;
}

SeriesDiagnostics lattice_series_check(const LatticeSpec& spec, double epsilon, std::vector<double> radii) {
    if (spec.rank() == 0) throw InvalidInput("lattice_series_check needs rank >= 1");
    if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be nonnegative");
    if (radii.empty()) radii = {spec.radius / 8.0, spec.radius / 4.0, spec.radius / 2.0, spec.radius};
    if (radii.back() > spec.radius) throw InvalidInput("checkpoint radius exceeds the lattice truncation radius");
    const PointSet ps = lattice_points(spec);
    return partial_sums_at_radii(ps, static_cast<double>(spec.rank()) + epsilon, radii);
}

}  // namespace tameproj
