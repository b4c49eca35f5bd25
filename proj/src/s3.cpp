#include "bsk/s3.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bsk/errors.hpp"
#include "bsk/parallel.hpp"

namespace bsk::s3 {

namespace {
constexpr double kPi = std::numbers::pi;
}

Point4::Point4(const Vec4& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("Point4: zero or non-finite vector");
    x = v / n;
}

FrameBasis frame_at(const Point4& p) {
    const double x1 = p.x[0], y1 = p.x[1], x2 = p.x[2], y2 = p.x[3];
    FrameBasis f;
    f.xi = Vec4(-y1, x1, -y2, x2);
    f.x1 = Vec4(-x2, y2, x1, -y1);
    f.x2 = Vec4(-y2, -x2, y1, x1);
    return f;
}

double contact_eval(const Point4& q, const Vec4& v) {
    return frame_at(q).xi.dot(v);
}

double deta_eval(const Point4& /*q*/, const Vec4& u, const Vec4& v) {
    return 2.0 * (u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]);
}

TwoForm3 hodge_star(const OneForm3& b, double conformal_factor) {
    return TwoForm3{conformal_factor * b.c};
}

OneForm3 hodge_star(const TwoForm3& w, double conformal_factor) {
    return OneForm3{w.c / conformal_factor};
}

void assert_orientation() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        std::mt19937_64 rng(0x5eedb5c0ff11u);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            Vec4 v(dist(rng), dist(rng), dist(rng), dist(rng));
            if (v.norm() < 1e-3) continue;
            const Point4 p(v);
            const FrameBasis f = frame_at(p);
            TwoForm3 deta;
            deta.c[0] = deta_eval(p, f.x1, f.x2);
            deta.c[1] = deta_eval(p, f.x2, f.xi);
            deta.c[2] = deta_eval(p, f.xi, f.x1);
            const OneForm3 star = hodge_star(deta);
            // eta components in the frame coframe are (1, 0, 0)
            if (std::abs(star.c[0] - 2.0) > 1e-12 || std::abs(star.c[1]) > 1e-12 ||
                std::abs(star.c[2]) > 1e-12) {
                throw std::logic_error("orientation check failed: *d(eta) != +2 eta");
            }
        }
    });
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

GridS3::GridS3(int n_s, int n_theta, int n_psi) {
    if (n_s < 4 || n_theta < 4 || n_psi < 4)
        throw ConfigError("GridS3: resolution must be at least (4,4,4)");

    std::vector<double> gs, gw;
    gauss_legendre(n_s, gs, gw);
    // Map [-1,1] -> [0,pi] against the density sin^2 s.
    std::vector<double> s_nodes(n_s), s_weights(n_s);
    for (int i = 0; i < n_s; ++i) {
        s_nodes[i] = 0.5 * kPi * (gs[i] + 1.0);
        const double sn = std::sin(s_nodes[i]);
        s_weights[i] = 0.5 * kPi * gw[i] * sn * sn;
    }
    assemble(s_nodes, s_weights, n_theta, n_psi);
}

GridS3::GridS3(const std::vector<double>& s_breaks, int per_segment, int n_theta, int n_psi) {
    if (s_breaks.size() < 2 || per_segment < 2 || n_theta < 4 || n_psi < 4)
        throw ConfigError("GridS3: need >= 2 s-breaks, >= 2 points per segment, angular >= 4");
    for (std::size_t i = 0; i + 1 < s_breaks.size(); ++i)
        if (!(s_breaks[i] < s_breaks[i + 1]))
            throw ConfigError("GridS3: s_breaks must be strictly increasing");

    std::vector<double> gs, gw;
    gauss_legendre(per_segment, gs, gw);
    std::vector<double> s_nodes, s_weights;
    for (std::size_t seg = 0; seg + 1 < s_breaks.size(); ++seg) {
        const double lo = s_breaks[seg], hi = s_breaks[seg + 1];
        for (int i = 0; i < per_segment; ++i) {
            const double s = 0.5 * (hi - lo) * (gs[i] + 1.0) + lo;
            const double sn = std::sin(s);
            s_nodes.push_back(s);
            s_weights.push_back(0.5 * (hi - lo) * gw[i] * sn * sn);
        }
    }
    assemble(s_nodes, s_weights, n_theta, n_psi);
}

void GridS3::assemble(const std::vector<double>& s_nodes, const std::vector<double>& s_weights,
                      int n_theta, int n_psi) {
    assert_orientation();
    spec_ = GridSpec{static_cast<int>(s_nodes.size()), n_theta, n_psi};

    std::vector<double> ts, tw;
    gauss_legendre(n_theta, ts, tw);
    std::vector<double> t_nodes(n_theta), t_weights(n_theta);
    for (int j = 0; j < n_theta; ++j) {
        t_nodes[j] = 0.5 * kPi * (ts[j] + 1.0);
        t_weights[j] = 0.5 * kPi * tw[j] * std::sin(t_nodes[j]);
    }
    const double psi_w = 2.0 * kPi / n_psi;

    s_nodes_1d_ = s_nodes;
    const std::size_t total = s_nodes.size() * n_theta * n_psi;
    nodes_.reserve(total);
    weights_.reserve(total);
    s_values_.reserve(total);
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
        const double s = s_nodes[i];
        const double cs = std::cos(s), ss = std::sin(s);
        for (int j = 0; j < n_theta; ++j) {
            const double t = t_nodes[j];
            const double ct = std::cos(t), st = std::sin(t);
            for (int k = 0; k < n_psi; ++k) {
                const double u = (2.0 * kPi * k) / n_psi;
                Vec4 v(cs, ss * st * std::cos(u), ss * st * std::sin(u), ss * ct);
                nodes_.emplace_back(v);
                weights_.push_back(s_weights[i] * t_weights[j] * psi_w);
                s_values_.push_back(s);
            }
        }
    }
}

double GridS3::weight_sum() const {
    return pairwise_sum(weights_.data(), weights_.size());
}

GridS3 build_grid(int n_s, int n_theta, int n_psi) {
    return GridS3(n_s, n_theta, n_psi);
}

double quadrature(const GridS3& grid, const std::function<double(std::size_t, const Point4&)>& f) {
    std::vector<double> vals(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) vals[i] = grid.weight(i) * f(i, grid.node(i));
    });
    return pairwise_sum(vals.data(), vals.size());
}

double quadrature(const GridS3& grid, const std::function<double(const Point4&)>& f) {
    return quadrature(grid, [&](std::size_t, const Point4& p) { return f(p); });
}

}  // namespace bsk::s3
