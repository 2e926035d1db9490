#include "tameproj/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tameproj/io.hpp"
#include "tameproj/parallel.hpp"

namespace tameproj {

Projection::Projection(GroupElement element, std::size_t target_dim) : g(std::move(element)), d(target_dim) {
    if (d == 0 || d > g.n()) throw InvalidInput("projection target dimension must satisfy 0 < d <= n");
}

void Projection::apply(std::span<const double> v, std::span<double> out) const {
    g.apply_rows(v, d, out);
}

namespace {

void check_dimensions(const Projection& p, const PointSet& ps) {
    if (p.field() != ps.field() || p.n() != ps.n()) {
        throw InvalidInput("projection is defined on " + std::string(to_string(p.field())) + "^" +
                           std::to_string(p.n()) + " but points live in " + std::string(to_string(ps.field())) +
                           "^" + std::to_string(ps.n()));
    }
}

std::vector<double> project_all(const Projection& p, const PointSet& ps) {
    const std::size_t out_dim = real_dim(p.field(), p.d);
    std::vector<double> images(ps.size() * out_dim);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        p.apply(ps.point(i), std::span<double>(images.data() + i * out_dim, out_dim));
    }
    return images;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

PointSet apply_projection(const Projection& p, const PointSet& ps) {
    check_dimensions(p, ps);
    const std::size_t out_dim = real_dim(p.field(), p.d);
    const auto images = project_all(p, ps);
    Json prov;
    prov["kind"] = "projection";
    prov["d"] = p.d;
    prov["source"] = ps.provenance();
    PointSet out(p.field(), p.d, dump_json(prov));
    for (std::size_t idx : dedup_indices(images, out_dim)) {
        out.push_back(std::span<const double>(images.data() + idx * out_dim, out_dim));
    }
    return out;
}

std::string_view to_string(Discreteness d) {
    switch (d) {
        case Discreteness::DiscreteLooking: return "DiscreteLooking";
        case Discreteness::DenseLooking: return "DenseLooking";
        case Discreteness::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Discreteness classify_gaps(const std::vector<std::optional<double>>& min_gaps, std::string* reason) {
    const auto say = [&](const char* why) {
        if (reason) *reason = why;
    };
    if (min_gaps.empty() || !min_gaps.back()) {
        say("no pair of image points in the window at the largest truncation");
        return Discreteness::Inconclusive;
    }
    std::size_t first = 0;
    while (!min_gaps[first]) ++first;
    const std::size_t last = min_gaps.size() - 1;
    if (first == last) {
        say("min gap available at a single truncation only");
        return Discreteness::Inconclusive;
    }
    const double steps = static_cast<double>(last - first);
    const double ratio = *min_gaps[last] / *min_gaps[first];
    if (ratio >= 0.5) {
        say("");
        return Discreteness::DiscreteLooking;
    }
    if (ratio <= std::pow(2.0, -steps / 2.0)) {
        say("");
        return Discreteness::DenseLooking;
    }
    say("min gap shrank, but slower than geometrically");
    return Discreteness::Inconclusive;
}

std::vector<double> default_schedule(const PointSet& ps) {
    double r_max = 0.0;
    for (double r : ps.norms()) r_max = std::max(r_max, r);
    if (!(r_max > 0.0)) throw InvalidInput("cannot build a truncation schedule for a set without nonzero points");
    return {r_max / 16.0, r_max / 8.0, r_max / 4.0, r_max / 2.0, r_max};
}

SeparationReport separation_report(const Projection& p, const PointSet& ps, const std::vector<double>& schedule,
                                   std::optional<double> window_radius) {
    check_dimensions(p, ps);
    if (schedule.size() < 3) throw InvalidInput("truncation schedule needs at least 3 radii");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] > schedule[i - 1]))) {
            throw InvalidInput("truncation schedule must be positive and strictly increasing");
        }
    }
    if (window_radius && !(*window_radius > 0.0)) throw InvalidInput("window radius must be positive");

    SeparationReport rep;
    rep.truncation_radii = schedule;
    const std::size_t out_dim = real_dim(p.field(), p.d);
    const auto images = project_all(p, ps);
    const auto source_norms = ps.norms();
    std::vector<double> image_norms(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        image_norms[i] = norm(std::span<const double>(images.data() + i * out_dim, out_dim));
    }
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return source_norms[a] < source_norms[b]; });

    const auto prefix_end = [&](double R) {
        std::size_t e = 0;
        while (e < order.size() && source_norms[order[e]] <= R) ++e;
        return e;
    };

    if (window_radius) {
        rep.window_radius = *window_radius;
    } else {
        // first truncation whose distinct images are not all at the origin
        double w = 0.0;
        for (std::size_t i = 0; i < schedule.size() && !(w > 0.0); ++i) {
            const std::size_t e = prefix_end(schedule[i]);
            std::vector<double> block;
            for (std::size_t a = 0; a < e; ++a) {
                const double* img = images.data() + order[a] * out_dim;
                block.insert(block.end(), img, img + out_dim);
            }
            std::vector<double> norms;
            for (std::size_t idx : dedup_indices(block, out_dim)) {
                norms.push_back(norm(std::span<const double>(block.data() + idx * out_dim, out_dim)));
            }
            if (norms.empty()) continue;
            w = median(norms);
            if (!(w > 0.0)) w = *std::max_element(norms.begin(), norms.end());
        }
        if (!(w > 0.0)) {
            rep.min_gaps.assign(schedule.size(), std::nullopt);
            rep.crowding_counts.assign(schedule.size(), 0);
            rep.reason = "every truncation is empty or projects to the origin; no default window radius";
            return rep;
        }
        rep.window_radius = w;
    }

    std::size_t end = 0;
    std::vector<double> block;
    std::size_t crowd = 0;
    bool any_points = false;
    for (double R : schedule) {
        const std::size_t e = prefix_end(R);
        for (; end < e; ++end) {
            const std::size_t i = order[end];
            if (image_norms[i] <= rep.window_radius) {
                ++crowd;
                const double* img = images.data() + i * out_dim;
                block.insert(block.end(), img, img + out_dim);
            }
        }
        any_points = any_points || e > 0;
        rep.crowding_counts.push_back(crowd);
        std::vector<double> distinct;
        for (std::size_t idx : dedup_indices(block, out_dim)) {
            distinct.insert(distinct.end(), block.begin() + static_cast<std::ptrdiff_t>(idx * out_dim),
                            block.begin() + static_cast<std::ptrdiff_t>((idx + 1) * out_dim));
        }
        rep.min_gaps.push_back(min_gap_flat(distinct, out_dim));
    }
    rep.verdict = classify_gaps(rep.min_gaps, &rep.reason);
    if (!any_points) rep.reason = "all truncations are empty";
    return rep;
}

double skr_probability_exact(Field field, std::size_t n, std::size_t d, double length, double r) {
    if (d == 0 || d >= n) throw InvalidInput("target dimension d must satisfy 0 < d < n");
    if (!(r > 0.0)) throw InvalidInput("radius r must be positive");
    if (length <= r) return 1.0;
    const double eps = r / length;
    return field == Field::Complex ? cap_measure_exact(2 * d, 2 * (n - d), eps) : cap_measure_exact(d, n - d, eps);
}

CapEstimate skr_probability_mc(const Vector& v, double r, std::size_t d, std::size_t trials, RngStream& rng) {
    const double length = norm(v);
    CapEstimate est;
    const bool complex = v.field == Field::Complex;
    est.k = complex ? 2 * d : d;
    est.m = complex ? 2 * (v.n - d) : v.n - d;
    est.exact_value = skr_probability_exact(v.field, v.n, d, length, r);
    est.epsilon = std::min(1.0, r / length);
    if (length <= r) {
        est.mc_estimate = 1.0;
        return est;
    }
    if (trials == 0) throw InvalidInput("trials must be positive");
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (trials + kChunk - 1) / kChunk;
    const RngStream base(rng.seed(), rng.next_u64());
    std::vector<std::size_t> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        RngStream local = base.substream(c);
        std::vector<double> out(real_dim(v.field, d));
        std::size_t count = 0;
        for (std::size_t t = c * kChunk; t < std::min(trials, (c + 1) * kChunk); ++t) {
            const auto g = haar_element(v.field, v.n, local);
            g.apply_rows(v.coords, d, out);
            if (norm(std::span<const double>(out)) <= r) ++count;
        }
        hits[c] = count;
    });
    const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    est.samples = trials;
    est.mc_estimate = static_cast<double>(total) / static_cast<double>(trials);
    est.mc_stderr = std::sqrt(est.mc_estimate * (1.0 - est.mc_estimate) / static_cast<double>(trials));
    return est;
}

CountingInequality counting_inequality_experiment(const PointSet& ps, std::size_t d, double r, std::size_t N,
                                                  std::size_t trials, RngStream& rng) {
    if (d == 0 || d >= ps.n()) throw InvalidInput("target dimension d must satisfy 0 < d < n");
    if (N == 0) throw InvalidInput("threshold N must be positive");
    if (trials < 1000) throw InvalidInput("counting inequality experiment needs at least 1000 trials");
    if (!(r > 0.0)) throw InvalidInput("radius r must be positive");
    CountingInequality out;
    out.N = N;
    out.trials = trials;
    const auto norms = ps.norms();
    for (double len : norms) out.rhs += skr_probability_exact(ps.field(), ps.n(), d, len, r);

    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (trials + kChunk - 1) / kChunk;
    const RngStream base(rng.seed(), rng.next_u64());
    std::vector<std::size_t> hits(chunks, 0);
    const std::size_t out_dim = real_dim(ps.field(), d);
    parallel_for(chunks, [&](std::size_t c) {
        RngStream local = base.substream(c);
        std::vector<double> img(out_dim);
        std::size_t count = 0;
        for (std::size_t t = c * kChunk; t < std::min(trials, (c + 1) * kChunk); ++t) {
            const Projection p(haar_element(ps.field(), ps.n(), local), d);
            std::size_t close = 0;
            for (std::size_t i = 0; i < ps.size() && close < N; ++i) {
                if (norms[i] <= r) {
                    ++close;  // the whole orbit lies in the ball
                    continue;
                }
                p.apply(ps.point(i), img);
                if (norm(std::span<const double>(img)) <= r) ++close;
            }
            if (close >= N) ++count;
        }
        hits[c] = count;
    });
    const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    out.mu_hat = static_cast<double>(total) / static_cast<double>(trials);
    const double n_thr = static_cast<double>(N);
    out.lhs = n_thr * out.mu_hat;
    out.lhs_stderr = n_thr * std::sqrt(out.mu_hat * (1.0 - out.mu_hat) / static_cast<double>(trials));
    out.holds = out.lhs <= out.rhs + 5.0 * out.lhs_stderr;
    return out;
}

SearchResult projection_search(const PointSet& ps, std::size_t d, std::size_t trials,
                               const std::vector<double>& schedule, std::optional<double> window_radius,
                               RngStream& rng) {
    if (trials == 0) throw InvalidInput("trials must be at least 1");
    if (d == 0 || d >= ps.n()) throw InvalidInput("target dimension d must satisfy 0 < d < n");
    const RngStream base(rng.seed(), rng.next_u64());
    std::vector<Projection> projections(trials);
    std::vector<SeparationReport> reports(trials);
    parallel_for(trials, [&](std::size_t t) {
        RngStream local = base.substream(t);
        projections[t] = Projection(haar_element(ps.field(), ps.n(), local), d);
        reports[t] = separation_report(projections[t], ps, schedule, window_radius);
    });

    SearchResult result;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& gaps = reports[t].min_gaps;
        TrialScore s;
        s.trial = t;
        s.score = gaps.back();
        if (gaps.size() >= 2) s.tiebreak = gaps[gaps.size() - 2];
        s.verdict = reports[t].verdict;
        result.all_scores.push_back(s);
    }
    // absent ranks below any value
    const auto better = [](const std::optional<double>& a, const std::optional<double>& b) {
        if (a && b) return *a > *b;
        return a.has_value() && !b.has_value();
    };
    const auto same = [](const std::optional<double>& a, const std::optional<double>& b) {
        return a.has_value() == b.has_value() && (!a || *a == *b);
    };
    std::size_t best = 0;
    for (std::size_t t = 1; t < trials; ++t) {
        const auto& c = result.all_scores[t];
        const auto& b = result.all_scores[best];
        if (better(c.score, b.score) || (same(c.score, b.score) && better(c.tiebreak, b.tiebreak))) best = t;
    }
    if (!result.all_scores[best].score) {
        throw NoViableProjection("no trial produced two image points in the window at the largest truncation",
                                 std::move(reports));
    }
    result.best = projections[best];
    result.best_trial = best;
    result.report = reports[best];
    result.reports = std::move(reports);
    return result;
}

}  // namespace tameproj
