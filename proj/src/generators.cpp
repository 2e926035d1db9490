#include "tameproj/generators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "tameproj/errors.hpp"
#include "tameproj/io.hpp"
#include "tameproj/sampling.hpp"

namespace tameproj {

std::string LatticeSpec::describe() const {
    Json j;
    j["kind"] = "lattice";
    j["field"] = std::string(to_string(field));
    j["n"] = n;
    Json b = Json::array();
    for (const auto& v : basis) b.push_back(v.coords);
    j["basis"] = b;
    j["radius"] = radius;
    return dump_json(j);
}

Vector standard_basis_vector(Field field, std::size_t n, std::size_t index) {
    const std::size_t dim = real_dim(field, n);
    if (index >= dim) throw InvalidInput("basis index out of range");
    std::vector<double> c(dim, 0.0);
    c[index] = 1.0;
    return Vector(field, n, std::move(c));
}

PointSet lattice_points(const LatticeSpec& spec, std::size_t budget) {
    if (spec.n == 0) throw InvalidInput("lattice dimension must be positive");
    if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) throw InvalidInput("lattice radius must be positive");
    const std::size_t dim = real_dim(spec.field, spec.n);
    const std::size_t r = spec.rank();
    if (r > dim) throw InvalidInput("lattice rank exceeds the real dimension");
    for (const auto& b : spec.basis) {
        if (b.field != spec.field || b.n != spec.n) throw InvalidInput("basis vector does not match lattice field/dimension");
        norm(b);  // rejects non-finite coordinates
    }

    PointSet ps(spec.field, spec.n, spec.describe());
    ps.set_truncation_radius(spec.radius);
    if (r == 0) {
        ps.push_back(std::vector<double>(dim, 0.0));
        return ps;
    }

    Eigen::MatrixXd basis(dim, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < dim; ++i) basis(i, j) = spec.basis[j].coords[i];
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    if (!(gram.determinant() > 1e-10)) throw InvalidInput("lattice basis is rank-deficient (Gram determinant <= 1e-10)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double sigma_min = std::sqrt(eig.eigenvalues().minCoeff());
    const double bound = std::floor(spec.radius / sigma_min * (1.0 + 1e-12) + 1e-9);
    const double box = std::pow(2.0 * bound + 1.0, static_cast<double>(r));
    if (box > 1e10) throw BudgetExceeded("lattice enumeration box has " + format_double(box) + " cells");
    const auto m_max = static_cast<long long>(bound);

    std::vector<long long> coef(r, -m_max);
    std::vector<double> v(dim);
    std::vector<double> coords;
    std::vector<double> norms;
    for (;;) {
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t j = 0; j < r; ++j) {
            if (coef[j] == 0) continue;
            const double c = static_cast<double>(coef[j]);
            for (std::size_t i = 0; i < dim; ++i) v[i] += c * spec.basis[j].coords[i];
        }
        const double len = norm(std::span<const double>(v));
        if (len <= spec.radius) {
            if (norms.size() >= budget) {
                throw BudgetExceeded("lattice enumeration exceeds the point budget of " + std::to_string(budget));
            }
            coords.insert(coords.end(), v.begin(), v.end());
            norms.push_back(len);
        }
        std::size_t j = 0;
        while (j < r && coef[j] == m_max) {
            coef[j] = -m_max;
            ++j;
        }
        if (j == r) break;
        ++coef[j];
    }

    std::vector<std::size_t> order(norms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });
    ps.reserve(order.size());
    for (std::size_t idx : order) ps.push_back(std::span<const double>(coords.data() + idx * dim, dim));
    return ps;
}

PairedPointSet perturb(const PointSet& ps, double lambda, double K, RngStream& rng) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidInput("lambda must lie in (0, 1)");
    if (!(K > 0.0) || !std::isfinite(K)) throw InvalidInput("K must be positive");
    constexpr int kMaxRetries = 100;
    const std::size_t dim = ps.real_dim();
    const std::size_t count = ps.size();

    PairedPointSet out;
    out.source = ps;
    std::vector<double> target(count * dim);
    std::vector<double> dir(dim);
    std::vector<int> retries(count, 0);

    const auto draw = [&](std::size_t i) {
        const auto v = ps.point(i);
        const double bound = lambda * norm(v) + K;
        for (;;) {
            sphere_uniform_into(dir, rng);
            const double t = rng.uniform() * bound;
            double* w = &target[i * dim];
            for (std::size_t c = 0; c < dim; ++c) w[c] = v[c] + t * dir[c];
            if (distance(std::span<const double>(w, dim), v) <= bound) return;
            if (++retries[i] > kMaxRetries) throw Error("perturb: displacement bound check kept failing");
        }
    };
    for (std::size_t i = 0; i < count; ++i) draw(i);

    for (;;) {
        const auto dups = near_duplicate_pairs(target, dim);
        if (dups.empty()) break;
        std::vector<std::size_t> redo;
        for (const auto& pr : dups) redo.push_back(pr.second);
        std::sort(redo.begin(), redo.end());
        redo.erase(std::unique(redo.begin(), redo.end()), redo.end());
        for (std::size_t i : redo) {
            if (++retries[i] > kMaxRetries) {
                throw Error("perturb: point " + std::to_string(i) + " still collides after " +
                            std::to_string(kMaxRetries) + " retries");
            }
            draw(i);
        }
    }

    Json prov;
    prov["kind"] = "perturbed";
    prov["lambda"] = lambda;
    prov["K"] = K;
    prov["source"] = ps.provenance();
    out.target = PointSet(ps.field(), ps.n(), dump_json(prov));
    out.target.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.target.push_back(std::span<const double>(&target[i * dim], dim));
    out.pairing.resize(count);
    std::iota(out.pairing.begin(), out.pairing.end(), std::size_t{0});
    return out;
}

PointSet power_sequence(Field field, std::size_t n, double rho, std::size_t count, RngStream& rng) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("rho must be positive");
    if (count == 0) throw InvalidInput("count must be at least 1");
    Json prov;
    prov["kind"] = "power";
    prov["field"] = std::string(to_string(field));
    prov["n"] = n;
    prov["rho"] = rho;
    prov["count"] = count;
    PointSet ps(field, n, dump_json(prov));
    const std::size_t dim = real_dim(field, n);
    ps.reserve(count);
    std::vector<double> x(dim);
    for (std::size_t k = 1; k <= count; ++k) {
        const double radius = std::pow(static_cast<double>(k), 1.0 / rho);
        sphere_uniform_into(x, rng);
        for (double& c : x) c *= radius;
        ps.push_back(x);
    }
    ps.set_truncation_radius(std::pow(static_cast<double>(count), 1.0 / rho));
    return ps;
}

PointSet embed_pad(const PointSet& ps) {
    Json prov;
    prov["kind"] = "embed";
    prov["source"] = ps.provenance();
    PointSet out(ps.field(), ps.n() + 1, dump_json(prov));
    out.set_truncation_radius(ps.truncation_radius());
    out.reserve(ps.size());
    std::vector<double> x(out.real_dim(), 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto p = ps.point(i);
        std::copy(p.begin(), p.end(), x.begin());
        out.push_back(x);
    }
    return out;
}

}  // namespace tameproj
