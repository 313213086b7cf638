#pragma once

// Global space-time assembly and direct solve for the mixed-type problem
//   rho dt Omega - drho^2 Omega = scale * G
// (forward in t for rho > 0, backward for rho < 0, caps on opposite ends)
// and for its adjoint with prescribed interface jumps. The problem is not
// an evolution: both solves are single sparse systems over the whole grid.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <ostream>
#include <vector>

#include "grid.hpp"

namespace mixedlab {

struct MixedProblem {
    SpaceTimeGrid grid;
    Field G;
    SideData data;
    double scale = 1.0;
};

struct JumpSpec {
    double value_jump = 0.0;      // [Phi](t,0) = Phi(0+) - Phi(0-)
    double derivative_jump = 0.0; // [drho Phi](t,0)
};

using Triplet = Eigen::Triplet<double>;

namespace detail {

// Hager-style 1-norm estimate of ||A^{-1}||, using the existing
// factorization for A and A^T solves.
template <class Solver>
double inverse_norm1_estimate(Solver& lu, int n) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        Eigen::VectorXd y = lu.solve(x);
        double norm1 = y.lpNorm<1>();
        Eigen::VectorXd xi(n);
        for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        Eigen::VectorXd z = lu.transpose().solve(xi);
        int jmax = 0;
        z.cwiseAbs().maxCoeff(&jmax);
        est = std::max(est, norm1);
        if (std::abs(z[jmax]) <= z.dot(x)) break;
        x.setZero();
        x[jmax] = 1.0;
    }
    return est;
}

inline double matrix_norm1(const Eigen::SparseMatrix<double>& A) {
    double best = 0.0;
    for (int k = 0; k < A.outerSize(); ++k) {
        double col = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

inline Eigen::VectorXd factor_and_solve(std::vector<Triplet>& trip, Eigen::VectorXd& rhs,
                                        double cond_threshold, double* cond_out) {
    const int n = static_cast<int>(rhs.size());
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw numeric_error("sparse factorization failed (singular system)");
    double cond = matrix_norm1(A) * inverse_norm1_estimate(lu, n);
    if (cond_out) *cond_out = cond;
    if (cond > cond_threshold)
        throw numeric_error("system conditioning estimate " + std::to_string(cond) +
                            " exceeds threshold");
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw numeric_error("sparse solve failed");
    return x;
}

} // namespace detail

// --- primal assembly -------------------------------------------------------
//
// Unknowns: n_t * n_rho nodal values, idx(i,j) = i*n_rho + j.
// Rows: Dirichlet at rho = +-R; cap t=0 for rho>0, cap t=1 for rho<0;
// the degenerate relation -drho^2 Omega = scale*G on the whole rho=0
// column; upwinded first-order time differences elsewhere.
inline void assemble_mixed(const MixedProblem& p, std::vector<Triplet>& trip,
                           Eigen::VectorXd& rhs) {
    const auto& g = p.grid;
    if (static_cast<int>(p.data.left.size()) != g.n_half())
        throw config_error("solve_mixed: side data length mismatch");
    if (!p.G.grid.same_as(g)) throw config_error("solve_mixed: G grid mismatch");
    if (!(p.scale > 0.0)) throw config_error("solve_mixed: scale must be positive");
    const int m = g.interface_index;
    const int N = g.n_t * g.n_rho;
    const double ht = g.h_t, hr = g.h_rho, hr2 = hr * hr;
    auto idx = [&](int i, int j) { return i * g.n_rho + j; };
    trip.clear();
    rhs = Eigen::VectorXd::Zero(N);
    for (int i = 0; i < g.n_t; ++i) {
        for (int j = 0; j < g.n_rho; ++j) {
            const int k = idx(i, j);
            const double rho = g.rho(j);
            if (j == 0 || j == g.n_rho - 1) { // truncation Dirichlet
                trip.emplace_back(k, k, 1.0);
                continue;
            }
            if (j > m && i == 0) { // cap t=0, rho>0
                trip.emplace_back(k, k, 1.0);
                rhs[k] = p.data.left[j - m];
                continue;
            }
            if (j < m && i == g.n_t - 1) { // cap t=1, rho<0 (reflected storage)
                trip.emplace_back(k, k, 1.0);
                rhs[k] = p.data.right[m - j];
                continue;
            }
            if (j == m) { // degenerate interface row: -d2 Omega = scale*G
                trip.emplace_back(k, idx(i, j - 1), -1.0 / hr2);
                trip.emplace_back(k, idx(i, j), 2.0 / hr2);
                trip.emplace_back(k, idx(i, j + 1), -1.0 / hr2);
                rhs[k] = p.scale * p.G.at(i, j);
                continue;
            }
            if (j > m) { // backward difference, anchored at the t=0 cap
                trip.emplace_back(k, idx(i, j), rho / ht);
                trip.emplace_back(k, idx(i - 1, j), -rho / ht);
            } else { // forward difference, anchored at the t=1 cap
                trip.emplace_back(k, idx(i + 1, j), rho / ht);
                trip.emplace_back(k, idx(i, j), -rho / ht);
            }
            trip.emplace_back(k, idx(i, j - 1), -1.0 / hr2);
            trip.emplace_back(k, idx(i, j), 2.0 / hr2);
            trip.emplace_back(k, idx(i, j + 1), -1.0 / hr2);
            rhs[k] = p.scale * p.G.at(i, j);
        }
    }
}

inline Field solve_mixed(const MixedProblem& p, double cond_threshold = 1e12,
                         double* cond_out = nullptr) {
    std::vector<Triplet> trip;
    Eigen::VectorXd rhs;
    assemble_mixed(p, trip, rhs);
    Eigen::VectorXd x = detail::factor_and_solve(trip, rhs, cond_threshold, cond_out);
    Field out(p.grid);
    for (int i = 0; i < p.grid.n_t; ++i)
        for (int j = 0; j < p.grid.n_rho; ++j)
            out.at(i, j) = x[i * p.grid.n_rho + j];
    return out;
}

// --- adjoint ----------------------------------------------------------------
//
// -rho dt Phi - drho^2 Phi = 0, caps reversed (Phi=0 at t=1 for rho>0 and
// at t=0 for rho<0). The interface column is doubled: the stored field
// carries the minus limit at column m, and a separate array carries the
// plus limit, so the system has n_t*(n_rho+1) unknowns. Jump rows tie the
// two limits together with one-sided second-order stencils.
struct AdjointSolution {
    Field field;              // minus limit stored at the interface column
    std::vector<double> plus; // plus limit Phi(t_i, 0+)
    JumpSpec jumps;
};

inline void assemble_adjoint(const SpaceTimeGrid& g, const JumpSpec& jumps,
                             std::vector<Triplet>& trip, Eigen::VectorXd& rhs) {
    const int m = g.interface_index;
    const int N = g.n_t * (g.n_rho + 1);
    const double ht = g.h_t, hr = g.h_rho, hr2 = hr * hr;
    auto idx = [&](int i, int j) { return i * g.n_rho + j; };
    auto pidx = [&](int i) { return g.n_t * g.n_rho + i; };
    trip.clear();
    rhs = Eigen::VectorXd::Zero(N);
    for (int i = 0; i < g.n_t; ++i) {
        for (int j = 0; j < g.n_rho; ++j) {
            const int k = idx(i, j);
            const double rho = g.rho(j);
            if (j == 0 || j == g.n_rho - 1) { trip.emplace_back(k, k, 1.0); continue; }
            if (j > m && i == g.n_t - 1) { trip.emplace_back(k, k, 1.0); continue; } // cap t=1
            if (j < m && i == 0) { trip.emplace_back(k, k, 1.0); continue; }         // cap t=0
            if (j == m) {
                if (i == 0) {
                    // minus corner takes the t=0 cap (continuation of rho<0)
                    trip.emplace_back(k, k, 1.0);
                } else {
                    // value jump: Phi(0+) - Phi(0-) = value_jump
                    trip.emplace_back(k, pidx(i), 1.0);
                    trip.emplace_back(k, idx(i, m), -1.0);
                    rhs[k] = jumps.value_jump;
                }
                continue;
            }
            // adjoint upwinding is reversed: forward rows for rho>0
            // (anchored at the t=1 cap), backward rows for rho<0
            if (j > m) {
                trip.emplace_back(k, idx(i + 1, j), -rho / ht);
                trip.emplace_back(k, idx(i, j), rho / ht);
            } else {
                trip.emplace_back(k, idx(i, j), -rho / ht);
                trip.emplace_back(k, idx(i - 1, j), rho / ht);
            }
            // second derivative; neighbours adjacent to the interface see
            // the appropriate one-sided limit
            const int jm = (j == m + 1) ? pidx(i) : idx(i, j - 1);
            const int jp = (j == m - 1) ? idx(i, m) : idx(i, j + 1);
            trip.emplace_back(k, jm, -1.0 / hr2);
            trip.emplace_back(k, idx(i, j), 2.0 / hr2);
            trip.emplace_back(k, jp, -1.0 / hr2);
        }
    }
    for (int i = 0; i < g.n_t; ++i) {
        const int k = pidx(i);
        if (i == g.n_t - 1) {
            // plus corner takes the t=1 cap (continuation of rho>0)
            trip.emplace_back(k, k, 1.0);
        } else if (i == 0) {
            // the minus corner is capped, so the value-jump row determines
            // the plus limit here
            trip.emplace_back(k, pidx(0), 1.0);
            trip.emplace_back(k, idx(0, m), -1.0);
            rhs[k] = jumps.value_jump;
        } else {
            // derivative jump: d+ - d- = derivative_jump with one-sided
            // 2nd-order stencils on each side
            trip.emplace_back(k, pidx(i), -3.0 / (2.0 * hr));
            trip.emplace_back(k, idx(i, m + 1), 4.0 / (2.0 * hr));
            trip.emplace_back(k, idx(i, m + 2), -1.0 / (2.0 * hr));
            trip.emplace_back(k, idx(i, m), -3.0 / (2.0 * hr));
            trip.emplace_back(k, idx(i, m - 1), 4.0 / (2.0 * hr));
            trip.emplace_back(k, idx(i, m - 2), -1.0 / (2.0 * hr));
            rhs[k] = jumps.derivative_jump;
        }
    }
}

inline AdjointSolution solve_adjoint(const SpaceTimeGrid& g, const JumpSpec& jumps,
                                     double cond_threshold = 1e12,
                                     double* cond_out = nullptr) {
    if (g.n_rho < 7) throw config_error("solve_adjoint: grid too small for jump stencils");
    std::vector<Triplet> trip;
    Eigen::VectorXd rhs;
    assemble_adjoint(g, jumps, trip, rhs);
    Eigen::VectorXd x = detail::factor_and_solve(trip, rhs, cond_threshold, cond_out);
    AdjointSolution out{Field(g), std::vector<double>(g.n_t), jumps};
    for (int i = 0; i < g.n_t; ++i) {
        for (int j = 0; j < g.n_rho; ++j) out.field.at(i, j) = x[i * g.n_rho + j];
        out.plus[i] = x[g.n_t * g.n_rho + i];
    }
    return out;
}

// half-line cap traces of an adjoint solution: left = Phi(0, rho>=0)
// (plus limit at rho=0), right = Phi(1, rho<=0) reflected onto sigma>=0
inline std::vector<double> adjoint_left_trace(const AdjointSolution& a) {
    const auto& g = a.field.grid;
    std::vector<double> out(g.n_half());
    out[0] = a.plus[0];
    for (int k = 1; k < g.n_half(); ++k) out[k] = a.field.at(0, g.interface_index + k);
    return out;
}

inline std::vector<double> adjoint_right_trace(const AdjointSolution& a) {
    const auto& g = a.field.grid;
    std::vector<double> out(g.n_half());
    for (int k = 0; k < g.n_half(); ++k) out[k] = a.field.at(g.n_t - 1, g.interface_index - k);
    return out;
}

// Discrete defect of the duality identity
//   int_0^1 drho^j Omega(t,0) dt =
//     intint scale*G*Phi + int_0^inf rho Xi_L Phi_L - int_{-inf}^0 rho Xi_R Phi_R
inline double duality_residual(const MixedProblem& p, const Field& omega,
                               const AdjointSolution& phi, int j) {
    const auto& g = p.grid;
    if (!omega.grid.same_as(g) || !phi.field.grid.same_as(g))
        throw config_error("duality_residual: grid mismatch");
    if (j != 0 && j != 1) throw config_error("duality_residual: j must be 0 or 1");
    const int m = g.interface_index;

    // lhs: trapezoid in t of the interface trace (or its centered rho-derivative)
    std::vector<double> tr(g.n_t);
    for (int i = 0; i < g.n_t; ++i) {
        if (j == 0) tr[i] = omega.at(i, m);
        else tr[i] = (omega.at(i, m + 1) - omega.at(i, m - 1)) / (2.0 * g.h_rho);
    }
    double lhs = trapezoid(tr, g.h_t);

    // volume term; the doubled interface column enters as the mean of the
    // two one-sided limits
    double vol = 0.0;
    for (int i = 0; i < g.n_t; ++i) {
        double wt = (i == 0 || i == g.n_t - 1) ? 0.5 : 1.0;
        for (int jj = 0; jj < g.n_rho; ++jj) {
            double wr = (jj == 0 || jj == g.n_rho - 1) ? 0.5 : 1.0;
            double ph = (jj == m) ? 0.5 * (phi.field.at(i, m) + phi.plus[i]) : phi.field.at(i, jj);
            vol += wt * wr * p.scale * p.G.at(i, jj) * ph;
        }
    }
    vol *= g.h_t * g.h_rho;

    // cap terms
    auto phiL = adjoint_left_trace(phi);
    auto phiR = adjoint_right_trace(phi);
    double termL = 0.0, termR = 0.0;
    for (int k = 0; k < g.n_half(); ++k) {
        double w = (k == 0 || k == g.n_half() - 1) ? 0.5 : 1.0;
        double rho = k * g.h_rho;
        termL += w * rho * p.data.left[k] * phiL[k];
        termR += w * (-rho) * p.data.right[k] * phiR[k]; // original coordinate rho = -sigma
    }
    termL *= g.h_rho;
    termR *= g.h_rho;

    return std::abs(lhs - (vol + termL - termR));
}

inline void dump_matrix(std::ostream& os, const std::vector<Triplet>& trip) {
    for (const auto& t : trip) os << t.row() << ' ' << t.col() << ' ' << t.value() << '\n';
}

} // namespace mixedlab
