#pragma once

#include <functional>
#include <vector>

#include "bsk/analysis.hpp"
#include "bsk/maps.hpp"
#include "bsk/s3.hpp"

// Equivariant (suspension-ansatz) gradient-flow minimization of the energy.

namespace bsk::flow {

using analysis::EnergyReport;
using s3::GridS3;

// Interior profile values on a uniform grid in (0, pi); the boundary
// alpha(0) = 0, alpha(pi) = B*pi is pinned, never evolved.
struct Profile {
    int target_degree = 1;              // B
    std::vector<double> s_nodes;        // interior, uniform
    std::vector<double> alpha;

    maps::ProfileTable to_table() const;
};

Profile make_profile(int target_degree, int n_interior,
                     const std::function<double(double)>& alpha0);

// Builds the profile-suspension map and evaluates the full 3D energy; no
// dimensional reduction is assumed.
double reduced_energy(const Profile& prof, double c, const GridS3& grid);

// Central-difference gradient of reduced_energy with respect to the interior
// values; evaluated per component on the affected s-band only.
std::vector<double> energy_gradient(const Profile& prof, double c, const GridS3& grid,
                                    double eps = 1e-5);

struct FlowOptions {
    double step = 0.5;
    int max_iter = 500;
    double grad_tol = 2e-4;
    double fd_eps = 1e-5;  // profile perturbation for the energy gradient
};

struct FlowResult {
    Profile profile;
    std::vector<double> energy_trace;  // initial energy plus one entry per accepted step
    EnergyReport report;
    bool converged = false;
    int iterations = 0;
};

// Gradient descent with backtracking on the interior profile values.
FlowResult minimize(Profile prof, double c, const GridS3& grid, const FlowOptions& opts = {});

}  // namespace bsk::flow
