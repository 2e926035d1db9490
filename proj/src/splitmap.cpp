#include "tameproj/splitmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tameproj/errors.hpp"
#include "tameproj/io.hpp"

namespace tameproj {

namespace {

void check_split_input(const PointSet& ps) {
    if (ps.field() != Field::Complex) throw InvalidInput("alpha_split needs a complex point set");
    if (ps.n() < 2) throw InvalidInput("alpha_split needs n >= 2");
}

// Scales the nonzero factor of a split point so its norm grows by `step`.
void push_outward(std::span<double> w, double step) {
    const double len = norm(std::span<const double>(w));
    if (len == 0.0) {
        w[0] = step;  // the origin moves along the first factor
        return;
    }
    const double scale = (len + step) / len;
    for (double& x : w) x *= scale;
}

// alpha applied pointwise, without any collision handling.
std::vector<double> alpha_image(const PointSet& ps) {
    const std::size_t dim = ps.real_dim();
    std::vector<double> target(ps.size() * dim, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto v = ps.point(i);
        const double a = std::hypot(v[0], v[1]);
        const double b = norm(v.subspan(2));
        double* w = &target[i * dim];
        if (a > b) {
            w[0] = v[0];
            w[1] = v[1];
        } else {
            std::copy(v.begin() + 2, v.end(), w + 2);
        }
    }
    return target;
}

}  // namespace

SplitRecord alpha_split(const PointSet& ps) {
    check_split_input(ps);
    const std::size_t dim = ps.real_dim();
    const std::size_t count = ps.size();
    std::vector<double> target = alpha_image(ps);

    // Within each cluster of coinciding targets, the j-th member (by index)
    // moves outward by j * 2 * kDedupTolerance.
    SplitRecord rec;
    for (int round = 0;; ++round) {
        const auto rep = dedup_representatives(target, dim);
        std::vector<std::size_t> members(count, 0);
        bool collided = false;
        for (std::size_t i = 0; i < count; ++i) {
            if (rep[i] == i) continue;
            collided = true;
            const std::size_t rank = ++members[rep[i]];
            push_outward(std::span<double>(&target[i * dim], dim),
                         2.0 * kDedupTolerance * static_cast<double>(rank));
            rec.adjusted.push_back(i);
        }
        if (!collided) break;
        if (round == 100) throw Error("alpha_split could not separate colliding targets");
    }
    std::sort(rec.adjusted.begin(), rec.adjusted.end());
    rec.adjusted.erase(std::unique(rec.adjusted.begin(), rec.adjusted.end()), rec.adjusted.end());

    Json prov;
    prov["kind"] = "alpha_split";
    prov["source"] = ps.provenance();
    rec.pairing.source = ps;
    rec.pairing.target = PointSet(ps.field(), ps.n(), dump_json(prov));
    rec.pairing.target.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        rec.pairing.target.push_back(std::span<const double>(&target[i * dim], dim));
    }
    rec.pairing.pairing.resize(count);
    std::iota(rec.pairing.pairing.begin(), rec.pairing.pairing.end(), std::size_t{0});

    const auto check = verify_split_bounds(rec);
    rec.max_forward_ratio = check.max_forward_ratio;
    rec.max_backward_ratio = check.max_backward_ratio;
    return rec;
}

SplitBoundCheck verify_split_bounds(const SplitRecord& sr) {
    const auto& paired = sr.pairing;
    paired.validate();
    SplitBoundCheck out;
    const double forward_bound = 1.0 / std::sqrt(2.0);
    const double backward_bound = 1.0;
    for (std::size_t i = 0; i < paired.source.size(); ++i) {
        const auto v = paired.source.point(i);
        const auto w = paired.target.point(paired.pairing[i]);
        const double gap = distance(v, w);
        const double nv = norm(v);
        const double nw = norm(w);
        if (nv > 0.0) {
            const double ratio = gap / nv;
            out.max_forward_ratio = std::max(out.max_forward_ratio, ratio);
            if (ratio > forward_bound + kSplitBoundSlack) {
                out.forward_ok = false;
                out.witnesses.push_back({i, ratio, forward_bound, true});
            }
        }
        if (nw > 0.0) {
            const double ratio = gap / nw;
            out.max_backward_ratio = std::max(out.max_backward_ratio, ratio);
            if (ratio > backward_bound + kSplitBoundSlack) {
                out.backward_ok = false;
                out.witnesses.push_back({i, ratio, backward_bound, false});
            }
        }
    }
    return out;
}

std::pair<SeparationReport, SeparationReport> split_projections_discrete(const SplitRecord& sr,
                                                                         const std::vector<double>& schedule,
                                                                         std::optional<double> window_radius) {
    const PointSet& source = sr.pairing.source;
    check_split_input(source);
    PointSet target(source.field(), source.n());
    const auto image = alpha_image(source);
    for (std::size_t i = 0; i < source.size(); ++i) {
        target.push_back(std::span<const double>(image.data() + i * source.real_dim(), source.real_dim()));
    }
    const std::size_t n = target.n();
    SeparationReport reports[2];
    std::vector<std::size_t> second_first(n);
    for (std::size_t i = 0; i + 1 < n; ++i) second_first[i] = i + 1;
    second_first[n - 1] = 0;
    const Projection first_factor(GroupElement::identity(Field::Complex, n), 1);
    const Projection second_factor(GroupElement::permutation(Field::Complex, second_first), n - 1);
    const Projection* factors[2] = {&first_factor, &second_factor};
    for (int f = 0; f < 2; ++f) {
        if (target.empty()) {
            reports[f].truncation_radii = schedule;
            reports[f].min_gaps.assign(schedule.size(), std::nullopt);
            reports[f].crowding_counts.assign(schedule.size(), 0);
            reports[f].window_radius = window_radius.value_or(0.0);
            reports[f].reason = "empty point set";
            continue;
        }
        reports[f] = separation_report(*factors[f], target, schedule, window_radius);
    }
    return {reports[0], reports[1]};
}

}  // namespace tameproj
