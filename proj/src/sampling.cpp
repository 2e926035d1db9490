#include "tameproj/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "tameproj/errors.hpp"
#include "tameproj/parallel.hpp"
#include "tameproj/special.hpp"
#include "tameproj/stats.hpp"

namespace tameproj {

using cd = std::complex<double>;

GroupElement::GroupElement(Field field, std::size_t n, std::vector<double> entries)
    : field_(field), n_(n), entries_(std::move(entries)) {
    if (n == 0) throw InvalidInput("group element dimension must be positive");
    if (entries_.size() != n * tameproj::real_dim(field, n)) {
        throw InvalidInput("group element has wrong number of entries");
    }
}

GroupElement GroupElement::identity(Field field, std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    return permutation(field, perm);
}

GroupElement GroupElement::permutation(Field field, const std::vector<std::size_t>& perm) {
    const std::size_t n = perm.size();
    const std::size_t w = field == Field::Complex ? 2 : 1;
    std::vector<double> e(n * n * w, 0.0);
    std::vector<char> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || seen[perm[i]]) throw InvalidInput("not a permutation");
        seen[perm[i]] = 1;
        e[(i * n + perm[i]) * w] = 1.0;
    }
    return GroupElement(field, n, std::move(e));
}

cd GroupElement::at(std::size_t row, std::size_t col) const {
    if (field_ == Field::Complex) {
        const std::size_t idx = 2 * (row * n_ + col);
        return {entries_[idx], entries_[idx + 1]};
    }
    return {entries_[row * n_ + col], 0.0};
}

void GroupElement::apply_rows(std::span<const double> v, std::size_t rows, std::span<double> out) const {
    if (v.size() != tameproj::real_dim(field_, n_)) throw InvalidInput("vector dimension mismatch");
    if (rows > n_ || out.size() != tameproj::real_dim(field_, rows)) {
        throw InvalidInput("output dimension mismatch");
    }
    const double* e = entries_.data();
    if (field_ == Field::Complex) {
        for (std::size_t r = 0; r < rows; ++r) {
            double re = 0.0, im = 0.0;
            const double* row = e + 2 * r * n_;
            for (std::size_t c = 0; c < n_; ++c) {
                const double gr = row[2 * c], gi = row[2 * c + 1];
                const double vr = v[2 * c], vi = v[2 * c + 1];
                re += gr * vr - gi * vi;
                im += gr * vi + gi * vr;
            }
            out[2 * r] = re;
            out[2 * r + 1] = im;
        }
    } else {
        for (std::size_t r = 0; r < rows; ++r) {
            double acc = 0.0;
            const double* row = e + r * n_;
            for (std::size_t c = 0; c < n_; ++c) acc += row[c] * v[c];
            out[r] = acc;
        }
    }
}

double GroupElement::unitarity_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            cd acc = 0.0;
            for (std::size_t k = 0; k < n_; ++k) acc += std::conj(at(k, i)) * at(k, j);
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

cd GroupElement::determinant() const {
    std::vector<cd> a(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) a[i * n_ + j] = at(i, j);
    cd det = 1.0;
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n_; ++r) {
            if (std::abs(a[r * n_ + col]) > std::abs(a[pivot * n_ + col])) pivot = r;
        }
        if (a[pivot * n_ + col] == cd(0.0)) return 0.0;
        if (pivot != col) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(a[pivot * n_ + j], a[col * n_ + j]);
            det = -det;
        }
        const cd p = a[col * n_ + col];
        det *= p;
        for (std::size_t r = col + 1; r < n_; ++r) {
            const cd f = a[r * n_ + col] / p;
            for (std::size_t j = col; j < n_; ++j) a[r * n_ + j] -= f * a[col * n_ + j];
        }
    }
    return det;
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    if (field_ != rhs.field_ || n_ != rhs.n_) throw InvalidInput("group elements do not match");
    std::vector<double> e(entries_.size());
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            cd acc = 0.0;
            for (std::size_t k = 0; k < n_; ++k) acc += at(i, k) * rhs.at(k, j);
            if (field_ == Field::Complex) {
                e[2 * (i * n_ + j)] = acc.real();
                e[2 * (i * n_ + j) + 1] = acc.imag();
            } else {
                e[i * n_ + j] = acc.real();
            }
        }
    }
    return GroupElement(field_, n_, std::move(e));
}

namespace {

constexpr double kUnitarityTolerance = 1e-12;

// Columns of a Ginibre matrix orthonormalized by Gram-Schmidt with one
// reorthogonalization pass. The implied triangular factor has positive real
// diagonal, which is the normalization that makes the result Haar.
GroupElement ginibre_orthonormalized(Field field, std::size_t n, RngStream& rng) {
    if (n == 0) throw InvalidInput("group dimension must be positive");
    const bool complex = field == Field::Complex;
    std::vector<cd> q(n * n);  // column-major
    for (;;) {
        for (auto& z : q) z = complex ? cd(rng.gaussian(), rng.gaussian()) : cd(rng.gaussian(), 0.0);
        bool degenerate = false;
        for (std::size_t j = 0; j < n && !degenerate; ++j) {
            cd* col = &q[j * n];
            double original = 0.0;
            for (std::size_t r = 0; r < n; ++r) original += std::norm(col[r]);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    const cd* qi = &q[i * n];
                    cd proj = 0.0;
                    for (std::size_t r = 0; r < n; ++r) proj += std::conj(qi[r]) * col[r];
                    for (std::size_t r = 0; r < n; ++r) col[r] -= proj * qi[r];
                }
            }
            double len = 0.0;
            for (std::size_t r = 0; r < n; ++r) len += std::norm(col[r]);
            len = std::sqrt(len);
            if (!(len > 1e-10 * std::sqrt(original))) {
                degenerate = true;
                break;
            }
            for (std::size_t r = 0; r < n; ++r) col[r] /= len;
        }
        if (degenerate) continue;
        std::vector<double> e(n * tameproj::real_dim(field, n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const cd z = q[j * n + i];
                if (complex) {
                    e[2 * (i * n + j)] = z.real();
                    e[2 * (i * n + j) + 1] = z.imag();
                } else {
                    e[i * n + j] = z.real();
                }
            }
        }
        GroupElement g(field, n, std::move(e));
        if (g.unitarity_residual() <= kUnitarityTolerance) return g;
    }
}

}  // namespace

GroupElement haar_unitary(std::size_t n, RngStream& rng) {
    return ginibre_orthonormalized(Field::Complex, n, rng);
}

GroupElement haar_orthogonal(std::size_t n, RngStream& rng) {
    return ginibre_orthonormalized(Field::Real, n, rng);
}

GroupElement haar_element(Field field, std::size_t n, RngStream& rng) {
    return field == Field::Complex ? haar_unitary(n, rng) : haar_orthogonal(n, rng);
}

void sphere_uniform_into(std::span<double> out, RngStream& rng) {
    if (out.empty()) throw InvalidInput("sphere dimension must be positive");
    for (;;) {
        double sum = 0.0;
        for (double& x : out) {
            x = rng.gaussian();
            sum += x * x;
        }
        const double len = std::sqrt(sum);
        if (len < 1e-150) continue;
        for (double& x : out) x /= len;
        return;
    }
}

Vector sphere_uniform(std::size_t dim, RngStream& rng) {
    std::vector<double> coords(dim);
    sphere_uniform_into(coords, rng);
    return Vector(Field::Real, dim, std::move(coords));
}

double CapEstimate::null_stderr() const {
    if (samples == 0) return 0.0;
    return std::sqrt(exact_value * (1.0 - exact_value) / static_cast<double>(samples));
}

bool CapEstimate::agrees(double z) const {
    return std::abs(mc_estimate - exact_value) <= z * std::max(mc_stderr, null_stderr());
}

namespace {

void check_cap_args(std::size_t k, std::size_t m, double epsilon) {
    if (k == 0 || m == 0) throw InvalidInput("cap measure needs k, m >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw InvalidInput("cap measure needs epsilon in (0, 1], got " + std::to_string(epsilon));
    }
}

}  // namespace

double cap_measure_exact(std::size_t k, std::size_t m, double epsilon) {
    check_cap_args(k, m, epsilon);
    if (epsilon == 1.0) return 1.0;
    return regularized_incomplete_beta(0.5 * static_cast<double>(k), 0.5 * static_cast<double>(m),
                                       epsilon * epsilon);
}

double cap_limit_constant(std::size_t k, std::size_t m) {
    const double a = 0.5 * static_cast<double>(k);
    const double b = 0.5 * static_cast<double>(m);
    return std::exp(-log_beta(a, b)) / a;
}

CapEstimate cap_measure_mc(std::size_t k, std::size_t m, double epsilon, std::size_t samples,
                           RngStream& rng) {
    check_cap_args(k, m, epsilon);
    if (samples < 1000) throw InvalidInput("cap_measure_mc needs at least 1000 samples");
    constexpr std::size_t kChunk = 1 << 16;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    const RngStream base(rng.seed(), rng.next_u64());
    const double eps2 = epsilon * epsilon;
    std::vector<std::size_t> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        RngStream local = base.substream(c);
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(samples, begin + kChunk);
        std::vector<double> x(k + m);
        std::size_t count = 0;
        for (std::size_t s = begin; s < end; ++s) {
            sphere_uniform_into(x, local);
            double head = 0.0, tail = 0.0;
            for (std::size_t i = 0; i < k; ++i) head += x[i] * x[i];
            for (std::size_t i = k; i < k + m; ++i) tail += x[i] * x[i];
            // head <= eps^2 (head + tail), without normalizing
            if (head <= eps2 * (head + tail)) ++count;
        }
        hits[c] = count;
    });
    std::size_t total = 0;
    for (auto h : hits) total += h;
    CapEstimate est;
    est.k = k;
    est.m = m;
    est.epsilon = epsilon;
    est.samples = samples;
    est.mc_estimate = static_cast<double>(total) / static_cast<double>(samples);
    est.mc_stderr = std::sqrt(est.mc_estimate * (1.0 - est.mc_estimate) / static_cast<double>(samples));
    est.exact_value = cap_measure_exact(k, m, epsilon);
    return est;
}

CapScalingFit cap_scaling_fit(std::size_t k, std::size_t m, const std::vector<double>& eps_grid,
                              std::size_t samples_per_point, RngStream& rng, CapSource source) {
    if (eps_grid.size() < 4) throw InvalidInput("cap_scaling_fit needs at least 4 grid points");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 0.5)) {
            throw InvalidInput("cap_scaling_fit grid must lie in (0, 0.5]");
        }
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
            throw InvalidInput("cap_scaling_fit grid must be strictly decreasing");
        }
    }
    CapScalingFit fit;
    const double limit = cap_limit_constant(k, m);
    std::vector<double> log_eps, log_val;
    for (double eps : eps_grid) {
        double value;
        if (source == CapSource::Exact) {
            value = cap_measure_exact(k, m, eps);
        } else {
            const auto est = cap_measure_mc(k, m, eps, samples_per_point, rng);
            if (est.mc_estimate == 0.0) {
                std::ostringstream msg;
                msg << "no Monte Carlo hits at epsilon = " << eps << " with " << samples_per_point << " samples";
                throw InsufficientSamples(msg.str());
            }
            fit.estimates.push_back(est);
            value = est.mc_estimate;
        }
        fit.epsilons.push_back(eps);
        fit.values.push_back(value);
        fit.ratio_trend.push_back(value / (limit * std::pow(eps, static_cast<double>(k))));
        log_eps.push_back(std::log(eps));
        log_val.push_back(std::log(value));
    }
    const auto ls = least_squares(log_eps, log_val);
    fit.slope = ls.slope;
    fit.slope_stderr = ls.slope_stderr;
    return fit;
}

}  // namespace tameproj
