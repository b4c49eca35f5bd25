#include "bsk/flow.hpp"

#include <cmath>
#include <numbers>

#include "bsk/errors.hpp"
#include "bsk/parallel.hpp"

namespace bsk::flow {

namespace {
constexpr double kPi = std::numbers::pi;

using maps::MapS3;
using maps::ProfileTable;
using s3::Point4;

double energy_density(const MapS3& map, const Point4& p, double c) {
    const maps::FormSample fs = maps::pullback_sample(map, p);
    return 0.5 * (c * fs.beta.norm2() + fs.omega.norm2() / c);
}

// Caches the grid nodes bucketed by profile-knot segment so that the gradient
// with respect to one interior value only re-evaluates the affected s-band
// (a Fritsch-Butland slope depends on the two adjacent secants).
class ReducedEnergy {
  public:
    ReducedEnergy(const Profile& prof, double c, const GridS3& grid)
        : c_(c), grid_(grid), n_interior_(prof.s_nodes.size()) {
        knots_ = prof.to_table().knots();
        const std::size_t n_seg = knots_.size() - 1;
        seg_nodes_.resize(n_seg);
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double s = grid_.s_of(i);
            std::size_t seg = n_seg - 1;
            for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
                if (s < knots_[j + 1]) {
                    seg = j;
                    break;
                }
            }
            seg_nodes_[seg].push_back(i);
        }
    }

    double full(const Profile& prof) const {
        const MapS3 map = maps::profile_suspension_map(prof.to_table());
        std::vector<double> terms(grid_.size());
        parallel_for(grid_.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                terms[i] = grid_.weight(i) * energy_density(map, grid_.node(i), c_);
        });
        const double e = pairwise_sum(terms.data(), terms.size());
        if (!std::isfinite(e)) throw EvalError("reduced_energy: non-finite energy");
        return e;
    }

    // Energy restricted to the segments affected by interior node i (knot i+1).
    double band(const Profile& prof, std::size_t i) const {
        const MapS3 map = maps::profile_suspension_map(prof.to_table());
        const std::size_t knot = i + 1;
        const std::size_t lo = knot >= 3 ? knot - 3 : 0;
        const std::size_t hi = std::min(seg_nodes_.size(), knot + 3);
        double sum = 0.0;
        for (std::size_t seg = lo; seg < hi; ++seg)
            for (std::size_t node : seg_nodes_[seg])
                sum += grid_.weight(node) * energy_density(map, grid_.node(node), c_);
        return sum;
    }

    std::vector<double> gradient(const Profile& prof, double eps) const {
        std::vector<double> g(n_interior_);
        parallel_for(n_interior_, [&](std::size_t lo_i, std::size_t hi_i) {
            for (std::size_t i = lo_i; i < hi_i; ++i) {
                Profile plus = prof;
                plus.alpha[i] += eps;
                Profile minus = prof;
                minus.alpha[i] -= eps;
                g[i] = (band(plus, i) - band(minus, i)) / (2.0 * eps);
            }
        });
        return g;
    }

  private:
    double c_;
    const GridS3& grid_;
    std::size_t n_interior_;
    std::vector<double> knots_;
    std::vector<std::vector<std::size_t>> seg_nodes_;
};

}  // namespace

maps::ProfileTable Profile::to_table() const {
    std::vector<double> s{0.0};
    s.insert(s.end(), s_nodes.begin(), s_nodes.end());
    s.push_back(kPi);
    std::vector<double> a{0.0};
    a.insert(a.end(), alpha.begin(), alpha.end());
    a.push_back(target_degree * kPi);
    return maps::ProfileTable(std::move(s), std::move(a));
}

Profile make_profile(int target_degree, int n_interior,
                     const std::function<double(double)>& alpha0) {
    if (n_interior < 1) throw ConfigError("make_profile: need at least one interior node");
    Profile p;
    p.target_degree = target_degree;
    p.s_nodes.resize(n_interior);
    p.alpha.resize(n_interior);
    for (int i = 0; i < n_interior; ++i) {
        p.s_nodes[i] = kPi * (i + 1) / (n_interior + 1);
        p.alpha[i] = alpha0(p.s_nodes[i]);
        if (!std::isfinite(p.alpha[i])) throw ConfigError("make_profile: non-finite alpha");
    }
    return p;
}

double reduced_energy(const Profile& prof, double c, const GridS3& grid) {
    if (!(c > 0.0)) throw ConfigError("reduced_energy: coupling must be positive");
    return ReducedEnergy(prof, c, grid).full(prof);
}

std::vector<double> energy_gradient(const Profile& prof, double c, const GridS3& grid,
                                    double eps) {
    if (!(c > 0.0)) throw ConfigError("energy_gradient: coupling must be positive");
    return ReducedEnergy(prof, c, grid).gradient(prof, eps);
}

FlowResult minimize(Profile prof, double c, const GridS3& grid, const FlowOptions& opts) {
    if (prof.target_degree < 1) throw ConfigError("minimize: target degree B >= 1 required");
    if (!(opts.step > 0.0)) throw ConfigError("minimize: step must be positive");
    if (!(c > 0.0)) throw ConfigError("minimize: coupling must be positive");

    // The descent works on a composite s-rule aligned with the spline
    // segments: a knot-hat perturbation is then integrated panel-exactly and
    // the sampled energy cannot hide sub-grid wiggles (a global rule coarser
    // than the knot spacing aliases the gradient and lets the flow tunnel
    // below the topological bound). The angular directions are low-degree
    // trigonometric polynomials for suspension maps, so 16 points suffice.
    const GridS3 work(prof.to_table().knots(), 4, std::min(grid.spec().n_theta, 16),
                      std::min(grid.spec().n_psi, 16));

    const ReducedEnergy eval(prof, c, work);
    FlowResult result;
    double energy = eval.full(prof);
    result.energy_trace.push_back(energy);

    double step = opts.step;
    bool converged = false;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        const std::vector<double> g = eval.gradient(prof, opts.fd_eps);
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < opts.grad_tol) {
            converged = true;
            break;
        }

        bool accepted = false;
        double trial_step = step;
        while (trial_step >= 1e-12) {
            Profile trial = prof;
            for (std::size_t i = 0; i < g.size(); ++i) trial.alpha[i] -= trial_step * g[i];
            const double trial_energy = eval.full(trial);
            if (trial_energy < energy) {
                prof = std::move(trial);
                energy = trial_energy;
                result.energy_trace.push_back(energy);
                accepted = true;
                break;
            }
            trial_step *= 0.5;
        }
        if (!accepted) break;  // step collapse: stagnation
        step = std::min(opts.step, trial_step * 2.0);
    }

    result.profile = std::move(prof);
    result.converged = converged;
    result.iterations = iter;
    const MapS3 final_map = maps::profile_suspension_map(result.profile.to_table());
    result.report = analysis::bound_report(final_map, analysis::Coupling::constant(c), work);
    return result;
}

}  // namespace bsk::flow
