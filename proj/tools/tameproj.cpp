#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tameproj/errors.hpp"
#include "tameproj/generators.hpp"
#include "tameproj/growth.hpp"
#include "tameproj/io.hpp"
#include "tameproj/projector.hpp"
#include "tameproj/sampling.hpp"
#include "tameproj/splitmap.hpp"
#include "tameproj/stats.hpp"

using namespace tameproj;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNegative = 3;
constexpr int kExitIo = 4;

class NegativeResult : public Error {
public:
    using Error::Error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput(flag + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw InvalidInput(flag + ": empty list");
    return out;
}

Json list_json(const std::vector<double>& xs) {
    Json j = Json::array();
    for (double x : xs) j.push_back(x);
    return j;
}

Json optional_json(const std::optional<double>& x) {
    return x ? Json(*x) : Json(nullptr);
}

Json run_header(const std::string& command, std::uint64_t seed, Json config) {
    Json run;
    run["tool"] = "tameproj";
    run["version"] = kToolVersion;
    run["command"] = command;
    run["seed"] = seed;
    run["config"] = std::move(config);
    return run;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string with_suffix(const std::string& prefix, const std::string& suffix) { return prefix + suffix; }

Json report_json(const SeparationReport& rep) {
    Json j;
    j["truncation_radii"] = list_json(rep.truncation_radii);
    j["window_radius"] = rep.window_radius;
    Json gaps = Json::array();
    for (const auto& g : rep.min_gaps) gaps.push_back(optional_json(g));
    j["min_gaps"] = gaps;
    j["crowding_counts"] = rep.crowding_counts;
    j["verdict"] = to_string(rep.verdict);
    j["reason"] = rep.reason;
    return j;
}

Json matrix_json(const GroupElement& g) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < g.n(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < g.n(); ++c) {
            const auto z = g.at(r, c);
            if (g.field() == Field::Complex) {
                row.push_back(Json::array({z.real(), z.imag()}));
            } else {
                row.push_back(z.real());
            }
        }
        rows.push_back(row);
    }
    return rows;
}

// --- generate ---------------------------------------------------------------

struct GenerateOptions {
    std::string kind;
    std::string field = "real";
    std::size_t dim = 0;
    std::string basis;
    std::optional<double> radius;
    std::size_t budget = kDefaultPointBudget;
    std::optional<double> rho;
    std::optional<std::size_t> count;
    std::string input;
    std::optional<double> lambda;
    std::optional<double> K;
    std::uint64_t seed = 0;
    std::string out;
};

std::vector<Vector> parse_basis(const std::string& text, Field field, std::size_t n) {
    std::vector<Vector> basis;
    std::stringstream ss(text);
    std::string item;
    const std::size_t rdim = real_dim(field, n);
    while (std::getline(ss, item, ',')) {
        if (!item.empty() && item[0] == 'e') {
            std::size_t idx = 0;
            try {
                idx = std::stoul(item.substr(1));
            } catch (const std::exception&) {
                throw InvalidInput("--basis: cannot parse '" + item + "'");
            }
            if (idx < 1 || idx > rdim) {
                throw InvalidInput("--basis: '" + item + "' is outside e1..e" + std::to_string(rdim));
            }
            basis.push_back(standard_basis_vector(field, n, idx - 1));
            continue;
        }
        std::vector<double> coords;
        std::stringstream cs(item);
        std::string c;
        while (std::getline(cs, c, ':')) coords.push_back(parse_list(c, "--basis").front());
        if (coords.size() != rdim) {
            throw InvalidInput("--basis: vector '" + item + "' needs " + std::to_string(rdim) +
                               " colon-separated real coordinates");
        }
        basis.push_back(Vector(field, n, std::move(coords)));
    }
    if (basis.empty()) throw InvalidInput("--basis: no basis vectors given");
    return basis;
}

int cmd_generate(const GenerateOptions& o) {
    Json config;
    config["kind"] = o.kind;
    const Field field = parse_field(o.field);
    RngStream rng(o.seed);
    PointSet ps;
    std::optional<PairedPointSet> paired;
    if (o.kind == "lattice") {
        if (o.dim == 0) throw InvalidInput("--dim is required for lattice");
        if (!o.radius) throw InvalidInput("--radius is required for lattice");
        if (o.basis.empty()) throw InvalidInput("--basis is required for lattice");
        LatticeSpec spec{field, o.dim, parse_basis(o.basis, field, o.dim), *o.radius};
        config["field"] = o.field;
        config["dim"] = o.dim;
        config["basis"] = o.basis;
        config["radius"] = *o.radius;
        config["budget"] = o.budget;
        ps = lattice_points(spec, o.budget);
    } else if (o.kind == "power") {
        if (o.dim == 0) throw InvalidInput("--dim is required for power");
        if (!o.rho) throw InvalidInput("--rho is required for power");
        if (!o.count) throw InvalidInput("--count is required for power");
        config["field"] = o.field;
        config["dim"] = o.dim;
        config["rho"] = *o.rho;
        config["count"] = *o.count;
        ps = power_sequence(field, o.dim, *o.rho, *o.count, rng);
    } else if (o.kind == "perturbed") {
        if (o.input.empty()) throw InvalidInput("--input is required for perturbed");
        if (!o.lambda) throw InvalidInput("--lambda is required for perturbed");
        if (!o.K) throw InvalidInput("--K is required for perturbed");
        config["input"] = o.input;
        config["lambda"] = *o.lambda;
        config["K"] = *o.K;
        paired = perturb(read_point_set(std::filesystem::path(o.input)), *o.lambda, *o.K, rng);
        ps = paired->target;
    } else if (o.kind == "embed") {
        if (o.input.empty()) throw InvalidInput("--input is required for embed");
        config["input"] = o.input;
        ps = embed_pad(read_point_set(std::filesystem::path(o.input)));
    } else {
        throw InvalidInput("--kind must be one of lattice, perturbed, power, embed");
    }
    config["out"] = o.out;
    const Json run = run_header("generate", o.seed, config);
    write_point_set(std::filesystem::path(o.out), ps, run);
    if (paired) {
        const auto path = std::filesystem::path(with_suffix(o.out, ".pairing.csv"));
        auto out = open_out(path);
        write_pairing_csv(out, paired->pairing);
        finish(out, path);
    }
    std::cout << "wrote " << ps.size() << " points to " << o.out << "\n";
    return kExitOk;
}

// --- project ------------------------------------------------------------------

struct ProjectOptions {
    std::string input;
    std::size_t d = 0;
    std::size_t trials = 16;
    std::string schedule;
    std::optional<double> window;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_project(const ProjectOptions& o) {
    const auto ps = read_point_set(std::filesystem::path(o.input));
    if (o.d == 0 || o.d >= ps.n()) {
        throw InvalidInput("--d must satisfy 0 < d < n (n = " + std::to_string(ps.n()) + ")");
    }
    if (o.trials == 0) throw InvalidInput("--trials must be at least 1");
    const auto schedule = o.schedule.empty() ? default_schedule(ps) : parse_list(o.schedule, "--schedule");
    Json config;
    config["input"] = o.input;
    config["d"] = o.d;
    config["trials"] = o.trials;
    config["schedule"] = list_json(schedule);
    config["window"] = optional_json(o.window);
    config["out"] = o.out;
    const Json run = run_header("project", o.seed, config);

    RngStream rng(o.seed);
    std::vector<SeparationReport> reports;
    std::optional<SearchResult> result;
    std::string failure;
    try {
        result = projection_search(ps, o.d, o.trials, schedule, o.window, rng);
        reports = result->reports;
    } catch (const NoViableProjection& e) {
        reports = e.reports();
        failure = e.what();
    }

    const auto csv_path = std::filesystem::path(with_suffix(o.out, ".csv"));
    auto csv = open_out(csv_path);
    csv << "trial,score_at_R_max,verdict\n";
    for (std::size_t t = 0; t < reports.size(); ++t) {
        const auto& g = reports[t].min_gaps.back();
        csv << t << "," << (g ? format_double(*g) : "") << "," << to_string(reports[t].verdict) << "\n";
    }
    finish(csv, csv_path);

    const auto sep_path = std::filesystem::path(with_suffix(o.out, ".separation.csv"));
    auto sep = open_out(sep_path);
    sep << "trial,truncation_radius,min_gap,crowding_count\n";
    for (std::size_t t = 0; t < reports.size(); ++t) {
        for (std::size_t i = 0; i < reports[t].truncation_radii.size(); ++i) {
            const auto& g = reports[t].min_gaps[i];
            sep << t << "," << format_double(reports[t].truncation_radii[i]) << ","
                << (g ? format_double(*g) : "") << "," << reports[t].crowding_counts[i] << "\n";
        }
    }
    finish(sep, sep_path);

    Json summary;
    summary["run"] = run;
    summary["field"] = to_string(ps.field());
    summary["n"] = ps.n();
    summary["points"] = ps.size();
    if (result) {
        summary["verdict"] = to_string(result->report.verdict);
        summary["best_trial"] = result->best_trial;
        summary["best_report"] = report_json(result->report);
        summary["best_g"] = matrix_json(result->best.g);
    } else {
        summary["verdict"] = "NoViableProjection";
        summary["reason"] = failure;
    }
    write_text_file(with_suffix(o.out, ".json"), dump_json(summary, 2) + "\n");
    if (!result) throw NegativeResult(failure);
    std::cout << "verdict " << to_string(result->report.verdict) << " (trial " << result->best_trial << ")\n";
    return kExitOk;
}

// --- series -------------------------------------------------------------------

struct SeriesOptions {
    std::string input;
    std::string s_list;
    std::string checkpoints;
    std::string out;
};

int cmd_series(const SeriesOptions& o) {
    const auto ps = read_point_set(std::filesystem::path(o.input));
    const auto exponents = parse_list(o.s_list, "--s");
    std::vector<std::size_t> checkpoints;
    if (!o.checkpoints.empty()) {
        for (double k : parse_list(o.checkpoints, "--checkpoints")) {
            if (!(k >= 1) || k != std::floor(k)) throw InvalidInput("--checkpoints must be positive integers");
            checkpoints.push_back(static_cast<std::size_t>(k));
        }
    }
    Json config;
    config["input"] = o.input;
    config["s"] = list_json(exponents);
    config["checkpoints"] = checkpoints;
    config["out"] = o.out;

    Json results = Json::array();
    const auto csv_path = std::filesystem::path(with_suffix(o.out, ".csv"));
    auto csv = open_out(csv_path);
    csv << "K,radius,partial_sum,s\n";
    for (double s : exponents) {
        if (!(s > 0.0)) throw InvalidInput("--s values must be positive");
        const auto diag = partial_sums(ps, s, checkpoints);
        for (const auto& p : diag.partial_sums) {
            csv << p.K << "," << format_double(p.radius) << "," << format_double(p.value) << "," << format_double(s)
                << "\n";
        }
        Json r;
        r["s"] = s;
        r["verdict"] = to_string(diag.verdict);
        r["rho_hat"] = optional_json(diag.rho_hat);
        r["tail_bound_estimate"] = optional_json(diag.tail_bound_estimate);
        r["excluded_origin_count"] = diag.excluded_origin_count;
        r["final_partial_sum"] = diag.partial_sums.empty() ? Json(nullptr) : Json(diag.partial_sums.back().value);
        r["reason"] = diag.reason;
        results.push_back(r);
    }
    finish(csv, csv_path);
    Json summary;
    summary["run"] = run_header("series", 0, config);
    summary["results"] = results;
    write_text_file(with_suffix(o.out, ".json"), dump_json(summary, 2) + "\n");
    for (const auto& r : results) {
        std::cout << "s=" << format_double(r["s"].get<double>()) << " " << r["verdict"].get<std::string>() << "\n";
    }
    return kExitOk;
}

// --- capmeasure ---------------------------------------------------------------

struct CapOptions {
    std::size_t k = 0;
    std::size_t m = 0;
    std::string eps;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_capmeasure(const CapOptions& o) {
    if (o.k == 0) throw InvalidInput("--k must be positive");
    if (o.m == 0) throw InvalidInput("--m must be positive");
    const auto grid = parse_list(o.eps, "--eps");
    Json config;
    config["k"] = o.k;
    config["m"] = o.m;
    config["eps"] = list_json(grid);
    config["samples"] = o.samples;
    config["out"] = o.out;

    RngStream rng(o.seed);
    const auto csv_path = std::filesystem::path(with_suffix(o.out, ".csv"));
    auto csv = open_out(csv_path);
    csv << "k,m,epsilon,samples,mc_estimate,mc_stderr,exact_value\n";
    Json rows = Json::array();
    for (double eps : grid) {
        const auto est = cap_measure_mc(o.k, o.m, eps, o.samples, rng);
        csv << est.k << "," << est.m << "," << format_double(eps) << "," << est.samples << ","
            << format_double(est.mc_estimate) << "," << format_double(est.mc_stderr) << ","
            << format_double(est.exact_value) << "\n";
        Json r;
        r["epsilon"] = eps;
        r["mc_estimate"] = est.mc_estimate;
        r["mc_stderr"] = est.mc_stderr;
        r["exact_value"] = est.exact_value;
        r["agrees_5_stderr"] = est.agrees(5.0);
        rows.push_back(r);
        std::cout << "eps=" << format_double(eps) << " mc=" << format_double(est.mc_estimate)
                  << " exact=" << format_double(est.exact_value) << "\n";
    }
    finish(csv, csv_path);
    Json summary;
    summary["run"] = run_header("capmeasure", o.seed, config);
    summary["rows"] = rows;
    try {
        RngStream unused(o.seed);
        const auto fit = cap_scaling_fit(o.k, o.m, grid, 0, unused);
        summary["exact_slope"] = fit.slope;
        summary["exact_slope_stderr"] = fit.slope_stderr;
        summary["ratio_trend"] = list_json(fit.ratio_trend);
    } catch (const InvalidInput&) {
        summary["exact_slope"] = nullptr;
    }
    write_text_file(with_suffix(o.out, ".json"), dump_json(summary, 2) + "\n");
    return kExitOk;
}

// --- split --------------------------------------------------------------------

struct SplitOptions {
    std::string input;
    std::string schedule;
    std::optional<double> window;
    std::string out;
};

int cmd_split(const SplitOptions& o) {
    const auto ps = read_point_set(std::filesystem::path(o.input));
    Json config;
    config["input"] = o.input;
    config["schedule"] = o.schedule;
    config["window"] = optional_json(o.window);
    config["out"] = o.out;
    const Json run = run_header("split", 0, config);
    const auto sr = alpha_split(ps);
    const auto check = verify_split_bounds(sr);
    write_paired(o.out, sr.pairing, run);

    Json summary;
    summary["run"] = run;
    summary["points"] = ps.size();
    summary["forward_ok"] = check.forward_ok;
    summary["backward_ok"] = check.backward_ok;
    summary["max_forward_ratio"] = check.max_forward_ratio;
    summary["max_backward_ratio"] = check.max_backward_ratio;
    summary["adjusted"] = sr.adjusted;
    Json witnesses = Json::array();
    for (const auto& w : check.witnesses) {
        witnesses.push_back({{"source_index", w.source_index},
                             {"ratio", w.ratio},
                             {"bound", w.bound},
                             {"direction", w.forward ? "forward" : "backward"}});
    }
    summary["witnesses"] = witnesses;
    if (!ps.empty()) {
        std::vector<double> schedule;
        if (!o.schedule.empty()) {
            schedule = parse_list(o.schedule, "--schedule");
        } else {
            try {
                schedule = default_schedule(ps);
            } catch (const InvalidInput&) {
            }
        }
        if (!schedule.empty()) {
            const auto [first, second] = split_projections_discrete(sr, schedule, o.window);
            summary["first_factor"] = report_json(first);
            summary["second_factor"] = report_json(second);
        }
    }
    write_text_file(with_suffix(o.out, ".json"), dump_json(summary, 2) + "\n");
    std::cout << "forward_ok=" << (check.forward_ok ? "true" : "false")
              << " backward_ok=" << (check.backward_ok ? "true" : "false") << "\n";
    if (!check.forward_ok || !check.backward_ok) throw NegativeResult("split bounds violated");
    return kExitOk;
}

// --- haartest -----------------------------------------------------------------

struct HaarOptions {
    std::string field = "complex";
    std::size_t n = 0;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_haartest(const HaarOptions& o) {
    const Field field = parse_field(o.field);
    if (o.n == 0) throw InvalidInput("--n must be positive");
    if (o.samples < 2) throw InvalidInput("--samples must be at least 2");
    Json config;
    config["field"] = o.field;
    config["n"] = o.n;
    config["samples"] = o.samples;
    config["out"] = o.out;

    RngStream rng(o.seed);
    MomentAccumulator acc;
    double residual = 0.0;
    std::vector<double> plain, shifted;
    const auto h = haar_element(field, o.n, rng);
    for (std::size_t i = 0; i < o.samples; ++i) {
        const auto g = haar_element(field, o.n, rng);
        acc.push(std::norm(g.at(0, 0)));
        residual = std::max(residual, g.unitarity_residual());
        if (i % 2 == 0) {
            plain.push_back(std::abs(g.at(0, 0)));
        } else {
            shifted.push_back(std::abs((h * g).at(0, 0)));
        }
    }
    const double expected = 1.0 / static_cast<double>(o.n);
    const double ks = ks_statistic(plain, shifted);
    const double ks_crit = ks_critical_value(0.01, plain.size(), shifted.size());
    Json summary;
    summary["run"] = run_header("haartest", o.seed, config);
    summary["mean_abs_u11_squared"] = acc.mean();
    summary["stderr"] = acc.stderr_of_mean();
    summary["expected"] = expected;
    summary["within_4_stderr"] = std::abs(acc.mean() - expected) <= 4.0 * acc.stderr_of_mean();
    summary["max_unitarity_residual"] = residual;
    summary["ks_statistic"] = ks;
    summary["ks_critical_1pct"] = ks_crit;
    summary["ks_pass"] = ks < ks_crit;
    write_text_file(o.out, dump_json(summary, 2) + "\n");
    std::cout << "mean |u11|^2 = " << format_double(acc.mean()) << " (expected " << format_double(expected) << ")\n";
    return kExitOk;
}

// --- skr ----------------------------------------------------------------------

struct SkrOptions {
    std::string input;
    std::optional<double> r;
    std::size_t d = 0;
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_skr(const SkrOptions& o) {
    const auto ps = read_point_set(std::filesystem::path(o.input));
    if (!o.r || !(*o.r > 0.0)) throw InvalidInput("--r must be given and positive");
    if (o.d == 0 || o.d >= ps.n()) {
        throw InvalidInput("--d must satisfy 0 < d < n (n = " + std::to_string(ps.n()) + ")");
    }
    if (o.trials == 0) throw InvalidInput("--trials must be positive");
    Json config;
    config["input"] = o.input;
    config["r"] = *o.r;
    config["d"] = o.d;
    config["trials"] = o.trials;
    config["out"] = o.out;

    RngStream rng(o.seed);
    const auto csv_path = std::filesystem::path(with_suffix(o.out, ".csv"));
    auto csv = open_out(csv_path);
    csv << "point_index,norm,k,m,epsilon,samples,mc_estimate,mc_stderr,exact_value\n";
    double mc_sum = 0.0, exact_sum = 0.0;
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto v = ps.vector(i);
        const auto est = skr_probability_mc(v, *o.r, o.d, o.trials, rng);
        csv << i << "," << format_double(norm(v)) << "," << est.k << "," << est.m << "," << format_double(est.epsilon)
            << "," << est.samples << "," << format_double(est.mc_estimate) << "," << format_double(est.mc_stderr)
            << "," << format_double(est.exact_value) << "\n";
        mc_sum += est.mc_estimate;
        exact_sum += est.exact_value;
        if (!est.agrees(5.0)) ++disagreements;
    }
    finish(csv, csv_path);
    Json summary;
    summary["run"] = run_header("skr", o.seed, config);
    summary["points"] = ps.size();
    summary["sum_mc"] = mc_sum;
    summary["sum_exact"] = exact_sum;
    summary["points_outside_5_stderr"] = disagreements;
    write_text_file(with_suffix(o.out, ".json"), dump_json(summary, 2) + "\n");
    std::cout << "sum of exact probabilities " << format_double(exact_sum) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experiments with discrete sets, random projections and tameness diagnostics"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Write a point set (JSONL)");
    g->add_option("--kind", gen.kind, "lattice | perturbed | power | embed")->required();
    g->add_option("--field", gen.field, "real | complex")->capture_default_str();
    g->add_option("--dim", gen.dim, "Field dimension n");
    g->add_option("--basis", gen.basis, "Comma-separated basis: eK (1-based real coordinate) or x1:x2:...");
    g->add_option("--radius", gen.radius, "Truncation radius (lattice)");
    g->add_option("--budget", gen.budget, "Maximum number of lattice points")->capture_default_str();
    g->add_option("--rho", gen.rho, "Growth exponent (power)");
    g->add_option("--count", gen.count, "Number of points (power)");
    g->add_option("--input", gen.input, "Input point set (perturbed, embed)");
    g->add_option("--lambda", gen.lambda, "Relative perturbation bound in (0,1) (perturbed)");
    g->add_option("--K", gen.K, "Absolute perturbation bound > 0 (perturbed)");
    g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output JSONL path")->required();

    ProjectOptions proj;
    auto* p = app.add_subcommand("project", "Search random projections for a discrete-looking image");
    p->add_option("--input", proj.input, "Input point set")->required();
    p->add_option("--d", proj.d, "Target dimension, 0 < d < n")->required();
    p->add_option("--trials", proj.trials, "Number of Haar draws")->capture_default_str();
    p->add_option("--schedule", proj.schedule, "Comma-separated truncation radii (default R/16,R/8,R/4,R/2,R)");
    p->add_option("--window", proj.window, "Window radius (default: median first-truncation image norm)");
    p->add_option("--seed", proj.seed, "Random seed")->capture_default_str();
    p->add_option("--out", proj.out, "Output prefix")->required();

    SeriesOptions ser;
    auto* s = app.add_subcommand("series", "Partial sums of sum |v_k|^-s");
    s->add_option("--input", ser.input, "Input point set")->required();
    s->add_option("--s", ser.s_list, "Comma-separated exponents")->required();
    s->add_option("--checkpoints", ser.checkpoints, "Comma-separated K values (default 1,2,4,...,N)");
    s->add_option("--out", ser.out, "Output prefix")->required();

    CapOptions cap;
    auto* c = app.add_subcommand("capmeasure", "Monte Carlo and exact spherical cap measures");
    c->add_option("--k", cap.k, "Number of constrained coordinates")->required();
    c->add_option("--m", cap.m, "Number of free coordinates")->required();
    c->add_option("--eps", cap.eps, "Comma-separated epsilons in (0,1]")->required();
    c->add_option("--samples", cap.samples, "Samples per epsilon")->capture_default_str();
    c->add_option("--seed", cap.seed, "Random seed")->capture_default_str();
    c->add_option("--out", cap.out, "Output prefix")->required();

    SplitOptions spl;
    auto* sp = app.add_subcommand("split", "Split a complex point set into C x C^(n-1)");
    sp->add_option("--input", spl.input, "Input point set")->required();
    sp->add_option("--schedule", spl.schedule, "Comma-separated truncation radii for the factor reports");
    sp->add_option("--window", spl.window, "Window radius for the factor reports");
    sp->add_option("--out", spl.out, "Output prefix")->required();

    HaarOptions haar;
    auto* h = app.add_subcommand("haartest", "Statistics of the Haar sampler");
    h->add_option("--field", haar.field, "real | complex")->capture_default_str();
    h->add_option("--n", haar.n, "Matrix size")->required();
    h->add_option("--samples", haar.samples, "Number of draws")->capture_default_str();
    h->add_option("--seed", haar.seed, "Random seed")->capture_default_str();
    h->add_option("--out", haar.out, "Output JSON path")->required();

    SkrOptions skr;
    auto* k = app.add_subcommand("skr", "Probability that a random projection lands within r");
    k->add_option("--input", skr.input, "Input point set")->required();
    k->add_option("--r", skr.r, "Radius")->required();
    k->add_option("--d", skr.d, "Target dimension, 0 < d < n")->required();
    k->add_option("--trials", skr.trials, "Haar draws per point")->capture_default_str();
    k->add_option("--seed", skr.seed, "Random seed")->capture_default_str();
    k->add_option("--out", skr.out, "Output prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*p) return cmd_project(proj);
        if (*s) return cmd_series(ser);
        if (*c) return cmd_capmeasure(cap);
        if (*sp) return cmd_split(spl);
        if (*h) return cmd_haartest(haar);
        if (*k) return cmd_skr(skr);
    } catch (const NegativeResult& e) {
        std::cerr << "negative result: " << e.what() << "\n";
        return kExitNegative;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitNegative;
    } catch (const InsufficientSamples& e) {
        std::cerr << "insufficient samples: " << e.what() << "\n";
        return kExitNegative;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNegative;
    }
    return kExitUsage;
}
