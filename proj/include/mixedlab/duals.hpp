#pragma once

// Dual profiles Phi^0 / Phi^1 and their dt^k cap-trace ladders. The ladder
// uses the adjoint equation itself, dt Phi = -drho^2 Phi / rho, instead of
// k-fold time differencing: the time grid is only first order and repeated
// time differences would amplify noise like h_t^{-k}.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "grid.hpp"
#include "solver.hpp"

namespace mixedlab {

struct DualProfile {
    int j = 0;
    AdjointSolution sol;
    double epsilon_ladder = 0.25;
    // left_traces[k] = dt^k Phi(0, rho) for rho >= 0; right_traces[k] in
    // the reflected coordinate sigma = -rho at t = 1. Levels k >= 1 are
    // only meaningful on |rho| >= epsilon_ladder.
    std::vector<std::vector<double>> left_traces;
    std::vector<std::vector<double>> right_traces;
};

inline JumpSpec dual_jumps(int j) {
    if (j == 0) return {0.0, -1.0}; // [Phi^0] = 0, [drho Phi^0] = -1
    if (j == 1) return {1.0, 0.0};  // [Phi^1] = 1, [drho Phi^1] = 0
    throw config_error("dual profile label must be 0 or 1");
}

namespace detail {

// one ladder step on a half-line trace; sign is -1 on the left half-line
// and +1 on the reflected right one (rho = -sigma flips the quotient)
inline std::vector<double> ladder_step(const std::vector<double>& tau, double h, double sign) {
    auto d2 = second_derivative_line(tau, h);
    std::vector<double> out(tau.size());
    for (std::size_t k = 1; k < tau.size(); ++k) out[k] = sign * d2[k] / (k * h);
    // quadratic extrapolation at rho = 0 keeps the array finite; the value
    // is never used by consumers (hats and gram live on |rho| >= epsilon)
    if (tau.size() >= 4) out[0] = 3.0 * out[1] - 3.0 * out[2] + out[3];
    return out;
}

} // namespace detail

inline DualProfile build_dual(const SpaceTimeGrid& g, int j, int k_max,
                              double epsilon_ladder = -1.0) {
    if (k_max < 0) throw config_error("build_dual: k_max must be >= 0");
    if (epsilon_ladder < 0.0) epsilon_ladder = std::max(0.25, 4.0 * g.h_rho);
    if (epsilon_ladder < 2.0 * g.h_rho)
        throw config_error("build_dual: epsilon_ladder below 2*h_rho (quotient amplification)");
    DualProfile d;
    d.j = j;
    d.epsilon_ladder = epsilon_ladder;
    d.sol = solve_adjoint(g, dual_jumps(j));
    d.left_traces.push_back(adjoint_left_trace(d.sol));
    d.right_traces.push_back(adjoint_right_trace(d.sol));
    for (int k = 1; k <= k_max; ++k) {
        d.left_traces.push_back(detail::ladder_step(d.left_traces.back(), g.h_rho, -1.0));
        d.right_traces.push_back(detail::ladder_step(d.right_traces.back(), g.h_rho, +1.0));
    }
    return d;
}

// Gram matrix of the stacked trace functions {dt^k Phi^(j) : j in {0,1},
// k = 1..k_max} on one side, under the half-line L2 inner product on
// rho >= epsilon. Row/column order: (j=0,k=1..k_max), then (j=1,...).
inline Eigen::MatrixXd gram_matrix(const DualProfile& phi0, const DualProfile& phi1,
                                   int k_max, bool left_side, double epsilon) {
    if (static_cast<int>(phi0.left_traces.size()) <= k_max ||
        static_cast<int>(phi1.left_traces.size()) <= k_max)
        throw config_error("gram_matrix: ladders shallower than k_max");
    const auto& g = phi0.sol.field.grid;
    const int k0 = std::max(1, static_cast<int>(std::ceil(epsilon / g.h_rho)));
    auto pick = [&](int which, int k) -> const std::vector<double>& {
        const DualProfile& p = which == 0 ? phi0 : phi1;
        return left_side ? p.left_traces[k] : p.right_traces[k];
    };
    const int n = 2 * k_max;
    Eigen::MatrixXd G(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const auto& fa = pick(a / k_max, 1 + a % k_max);
            const auto& fb = pick(b / k_max, 1 + b % k_max);
            double s = 0.0;
            const int last = g.n_half() - 1;
            for (int k = k0; k <= last; ++k) {
                double w = (k == k0 || k == last) ? 0.5 : 1.0;
                s += w * fa[k] * fb[k];
            }
            G(a, b) = s * g.h_rho;
        }
    }
    return G;
}

inline double duality_residual(const MixedProblem& p, const Field& omega,
                               const DualProfile& phi, int j) {
    return duality_residual(p, omega, phi.sol, j);
}

} // namespace mixedlab
