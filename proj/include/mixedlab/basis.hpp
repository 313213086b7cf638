#pragma once

// Biorthogonal bump families for the constraint functionals. The raw
// dictionary is a set of translated C^2 bumps in the support band; the
// biorthogonal vectors come from a minimum-norm solve of M C = I where
// M[(j,k), b] = ell_j^{(k)}[bump_b].

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degree.hpp"
#include "duals.hpp"
#include "functionals.hpp"
#include "grid.hpp"

namespace mixedlab {

struct BasisFamily {
    int k_star = 0;
    std::vector<HatData> bumps;
    std::vector<HatData> vectors; // e_j^{(k)}, index j*k_star + (k-1)
    Eigen::MatrixXd gram;         // functional x bump evaluation matrix
    Eigen::MatrixXd coeffs;       // bump x functional combination weights
    double condition = 0.0;       // sigma_max / sigma_min of gram
};

inline int functional_index(int j, int k, int k_star) { return j * k_star + (k - 1); }

inline BasisFamily build_basis(int k_star, const DualProfile& phi0, const DualProfile& phi1,
                               int n_bumps, double bump_width = 0.9) {
    if (k_star < 1) throw config_error("build_basis: k_star must be >= 1");
    if (n_bumps < 2 * k_star) throw config_error("build_basis: need n_bumps >= 2*k_star");
    const auto& g = phi0.sol.field.grid;
    if (g.radius < 4.0) throw config_error("build_basis: radius too small for the support band");

    BasisFamily fam;
    fam.k_star = k_star;

    // alternate sides over equispaced centers inside the support band,
    // which starts at the ladder cutoff on coarse grids
    const double band_lo = std::max({0.5, phi0.epsilon_ladder, phi1.epsilon_ladder});
    const double lo = band_lo + bump_width, hi = g.radius - 1.0 - bump_width;
    if (hi <= lo) throw config_error("build_basis: bump width too large for the band");
    const int per_side = (n_bumps + 1) / 2;
    for (int b = 0; b < n_bumps; ++b) {
        int side = b % 2;
        int slot = b / 2;
        double c = per_side == 1 ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * slot / (per_side - 1);
        fam.bumps.push_back(bump_hat(g, side, c, bump_width));
    }

    const int F = 2 * k_star;
    fam.gram = Eigen::MatrixXd(F, n_bumps);
    for (int b = 0; b < n_bumps; ++b)
        for (int j = 0; j < 2; ++j)
            for (int k = 1; k <= k_star; ++k)
                fam.gram(functional_index(j, k, k_star), b) =
                    eval_l(j, k, fam.bumps[b], phi0, phi1);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fam.gram,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double smax = sv(0), smin = sv(sv.size() - 1);
    fam.condition = smax / smin;
    if (smin < 1e-10 * smax) {
        // name the functional that the dictionary cannot reach: largest
        // component of the deficient left singular direction
        Eigen::VectorXd u = svd.matrixU().col(sv.size() - 1).cwiseAbs();
        int r;
        u.maxCoeff(&r);
        int j = r / k_star, k = 1 + r % k_star;
        throw numeric_error("build_basis: degenerate family, functional ell_" +
                            std::to_string(j) + "^(" + std::to_string(k) +
                            ") is not reachable from the bump dictionary");
    }

    // minimum-norm C with M C = I
    fam.coeffs = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();

    for (int r = 0; r < F; ++r) {
        HatData e(g);
        for (int b = 0; b < n_bumps; ++b) {
            for (int m = 0; m < e.n(); ++m) {
                e.left[m] += fam.coeffs(b, r) * fam.bumps[b].left[m];
                e.right[m] += fam.coeffs(b, r) * fam.bumps[b].right[m];
            }
        }
        fam.vectors.push_back(e);
    }
    return fam;
}

// re-evaluated biorthogonality defect matrix ell_i^{(m)}[e_j^{(k)}] - delta
inline Eigen::MatrixXd biorthogonality_defect(const BasisFamily& fam, const DualProfile& phi0,
                                              const DualProfile& phi1) {
    const int F = 2 * fam.k_star;
    Eigen::MatrixXd D(F, F);
    for (int r = 0; r < F; ++r) {
        int i = r / fam.k_star, m = 1 + r % fam.k_star;
        for (int c = 0; c < F; ++c)
            D(r, c) = eval_l(i, m, fam.vectors[c], phi0, phi1) - (r == c ? 1.0 : 0.0);
    }
    return D;
}

struct IndependenceReport {
    Eigen::VectorXd sv_left, sv_right; // trace Gram singular values per side
    std::vector<std::string> degree_table;
    bool degrees_predict_independence = false;
    std::vector<std::string> flags;
};

inline IndependenceReport independence_report(const DualProfile& phi0, const DualProfile& phi1,
                                              int k_star, double epsilon = 0.5) {
    if (k_star < 1) throw config_error("independence_report: k_star must be >= 1");
    IndependenceReport rep;
    auto GL = gram_matrix(phi0, phi1, k_star, true, epsilon);
    auto GR = gram_matrix(phi0, phi1, k_star, false, epsilon);
    rep.sv_left = Eigen::JacobiSVD<Eigen::MatrixXd>(GL).singularValues();
    rep.sv_right = Eigen::JacobiSVD<Eigen::MatrixXd>(GR).singularValues();
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k <= k_star; ++k) {
            FormalTerm t{j, k, Rational{1, 1}};
            rep.degree_table.push_back("dt^{-" + std::to_string(k) + "}Phi^(" +
                                       std::to_string(j) + "): d0=" +
                                       std::to_string(degree(t, 0)) +
                                       " d1=" + std::to_string(degree(t, 1)));
        }
    rep.degrees_predict_independence = predict_independence(k_star);
    double cutoff = 1e-10 * std::max(rep.sv_left(0), rep.sv_right(0));
    if ((rep.sv_left(rep.sv_left.size() - 1) < cutoff ||
         rep.sv_right(rep.sv_right.size() - 1) < cutoff) &&
        rep.degrees_predict_independence)
        rep.flags.push_back("numerical near-dependency not explained by the degree certificates");
    return rep;
}

} // namespace mixedlab
