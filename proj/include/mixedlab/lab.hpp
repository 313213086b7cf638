#pragma once

// End-to-end experiments: coefficient solves (direct and Picard), the
// regularity dichotomy, and the rigidity-moment test.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "basis.hpp"
#include "duals.hpp"
#include "functionals.hpp"
#include "grid.hpp"
#include "solver.hpp"

namespace mixedlab {

struct CoefficientVector {
    int k_star = 0;
    std::vector<double> c0, c1; // basis coefficients, k = 1..k_star
    std::vector<double> qL, qR; // corrector coefficients
    bool has_mass = false;
    double c_minus1 = 0.0;

    double norm() const {
        double s = 0.0;
        for (double x : c0) s += x * x;
        for (double x : c1) s += x * x;
        for (double x : qL) s += x * x;
        for (double x : qR) s += x * x;
        if (has_mass) s += c_minus1 * c_minus1;
        return std::sqrt(s);
    }

    double distance(const CoefficientVector& o) const {
        double s = 0.0;
        for (int k = 0; k < k_star; ++k) {
            s += (c0[k] - o.c0[k]) * (c0[k] - o.c0[k]);
            s += (c1[k] - o.c1[k]) * (c1[k] - o.c1[k]);
            s += (qL[k] - o.qL[k]) * (qL[k] - o.qL[k]);
            s += (qR[k] - o.qR[k]) * (qR[k] - o.qR[k]);
        }
        return std::sqrt(s);
    }
};

inline CorrectorQ corrector_from(const CoefficientVector& a) {
    CorrectorQ Q;
    Q.k_star = a.k_star;
    Q.qL = a.qL;
    Q.qR = a.qR;
    return Q;
}

// Xi = base + sum_k (c0 e0^{(k)} + c1 e1^{(k)}) + Q
inline SideData assemble_data(const HatData& base, const CoefficientVector& a,
                              const BasisFamily& fam, const SpaceTimeGrid& g) {
    if (fam.k_star != a.k_star) throw config_error("assemble_data: k_star mismatch");
    CorrectorQ Q = corrector_from(a);
    SideData out(g.n_half());
    auto ql = Q.sample(g, false), qr = Q.sample(g, true);
    for (int m = 0; m < g.n_half(); ++m) {
        out.left[m] = base.left[m] + ql[m];
        out.right[m] = base.right[m] + qr[m];
    }
    for (int k = 1; k <= a.k_star; ++k)
        for (int m = 0; m < g.n_half(); ++m) {
            const auto& e0 = fam.vectors[functional_index(0, k, a.k_star)];
            const auto& e1 = fam.vectors[functional_index(1, k, a.k_star)];
            out.left[m] += a.c0[k - 1] * e0.left[m] + a.c1[k - 1] * e1.left[m];
            out.right[m] += a.c0[k - 1] * e0.right[m] + a.c1[k - 1] * e1.right[m];
        }
    return out;
}

namespace detail {

// singular parts P^{(m)} of the level-m data, per side, m = 0..k_star-1:
// P^{(0)} = Q, P^{(m)} = D3 P^{(m-1)} + scale * D1 G_{m-1} with the
// operators taken in the original coordinate (sign flips on the reflected
// right half-line)
struct LevelParts {
    std::vector<std::vector<double>> left, right;       // P^{(m)}
    std::vector<std::vector<double>> g_left, g_right;   // cap traces of dt^m G
};

inline LevelParts build_level_parts(const Field& G, const CorrectorQ& Q, int k_star,
                                    double scale) {
    const auto& g = G.grid;
    LevelParts lp;
    Field dG = G;
    for (int m = 0; m < k_star; ++m) {
        SideData tr = source_cap_traces(dG);
        lp.g_left.push_back(tr.left);
        lp.g_right.push_back(tr.right);
        if (m + 1 < k_star) dG = time_derivative(dG);
    }
    lp.left.push_back(Q.sample(g, false));
    lp.right.push_back(Q.sample(g, true));
    for (int m = 1; m < k_star; ++m) {
        auto pl = apply_D3(lp.left[m - 1], g.h_rho);
        auto d1l = apply_D1(lp.g_left[m - 1], g.h_rho);
        for (std::size_t i = 0; i < pl.size(); ++i) pl[i] += scale * d1l[i];
        auto pr = apply_D3(lp.right[m - 1], g.h_rho);
        auto d1r = apply_D1(lp.g_right[m - 1], g.h_rho);
        for (std::size_t i = 0; i < pr.size(); ++i) pr[i] = -pr[i] - scale * d1r[i];
        lp.left.push_back(pl);
        lp.right.push_back(pr);
    }
    return lp;
}

} // namespace detail

// right-hand side beta_j^{(k)} + alpha_j^{(k)} of the k-th constraint
inline double constraint_rhs(int j, int k, const Field& G, const detail::LevelParts& lp,
                             const DualProfile& phi, double scale) {
    const double h = G.grid.h_rho;
    std::vector<double> gl = lp.g_left[k - 1], gr = lp.g_right[k - 1];
    for (auto& x : gl) x *= scale;
    for (auto& x : gr) x *= scale;
    double beta = eval_beta_sampled(j, gl, gr, lp.left[k - 1], lp.right[k - 1], h, phi);
    double alpha = eval_alpha(j, G, phi, k, scale);
    return beta + alpha;
}

// one-shot coefficient solve: q from build_Q, then biorthogonality gives
// c_j^{(k)} = RHS_j^{(k)} - ell_j^{(k)}[base]
inline CoefficientVector solve_coefficients_direct(const HatData& base, const Field& G,
                                                   const BasisFamily& fam,
                                                   const DualProfile& phi0,
                                                   const DualProfile& phi1, int k_star,
                                                   double scale = 1.0) {
    if (fam.k_star != k_star) throw config_error("solve_coefficients_direct: k_star mismatch");
    CoefficientVector a;
    a.k_star = k_star;
    CorrectorQ Q = build_Q(G, k_star, scale);
    a.qL = Q.qL;
    a.qR = Q.qR;
    auto lp = detail::build_level_parts(G, Q, k_star, scale);
    for (int k = 1; k <= k_star; ++k) {
        a.c0.push_back(constraint_rhs(0, k, G, lp, phi0, scale) - eval_l(0, k, base, phi0, phi1));
        a.c1.push_back(constraint_rhs(1, k, G, lp, phi1, scale) - eval_l(1, k, base, phi0, phi1));
    }
    return a;
}

// residuals |ell_j^{(k)}[Xi_hat] - RHS_j^{(k)}| for all 2 k_star constraints
inline std::vector<double> constraint_residuals(const CoefficientVector& a, const HatData& base,
                                                const Field& G, const BasisFamily& fam,
                                                const DualProfile& phi0, const DualProfile& phi1,
                                                double scale = 1.0) {
    const auto& g = G.grid;
    HatData hat(g);
    for (int m = 0; m < hat.n(); ++m) {
        hat.left[m] = base.left[m];
        hat.right[m] = base.right[m];
    }
    for (int k = 1; k <= a.k_star; ++k)
        for (int m = 0; m < hat.n(); ++m) {
            const auto& e0 = fam.vectors[functional_index(0, k, a.k_star)];
            const auto& e1 = fam.vectors[functional_index(1, k, a.k_star)];
            hat.left[m] += a.c0[k - 1] * e0.left[m] + a.c1[k - 1] * e1.left[m];
            hat.right[m] += a.c0[k - 1] * e0.right[m] + a.c1[k - 1] * e1.right[m];
        }
    auto lp = detail::build_level_parts(G, corrector_from(a), a.k_star, scale);
    std::vector<double> out;
    for (int k = 1; k <= a.k_star; ++k) {
        out.push_back(std::abs(eval_l(0, k, hat, phi0, phi1) -
                               constraint_rhs(0, k, G, lp, phi0, scale)));
        out.push_back(std::abs(eval_l(1, k, hat, phi0, phi1) -
                               constraint_rhs(1, k, G, lp, phi1, scale)));
    }
    return out;
}

struct PicardHistory {
    std::vector<double> steps;  // |A^{n+1} - A^n|
    std::vector<double> ratios; // consecutive step ratios
    int iterations = 0;
    bool converged = false;
};

// Fixed-point loop for solution-dependent sources: A -> data -> solve ->
// G_map -> A. Throws after three consecutive non-contracting steps.
inline CoefficientVector solve_coefficients_picard(
    const HatData& base, const std::function<Field(const Field&)>& G_map,
    const BasisFamily& fam, const DualProfile& phi0, const DualProfile& phi1, int k_star,
    const SpaceTimeGrid& g, double scale, int max_iter, double tol, PicardHistory* history,
    double damping = 1.0) {
    if (max_iter < 1) throw config_error("picard: max_iter must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw config_error("picard: damping in (0,1]");
    CoefficientVector a;
    a.k_star = k_star;
    a.c0.assign(k_star, 0.0);
    a.c1.assign(k_star, 0.0);
    a.qL.assign(k_star, 0.0);
    a.qR.assign(k_star, 0.0);
    Field omega(g);
    PicardHistory hist;
    int bad = 0;
    for (int it = 0; it < max_iter; ++it) {
        Field G = G_map(omega);
        CoefficientVector next =
            solve_coefficients_direct(base, G, fam, phi0, phi1, k_star, scale);
        if (damping < 1.0) {
            for (int k = 0; k < k_star; ++k) {
                next.c0[k] = damping * next.c0[k] + (1.0 - damping) * a.c0[k];
                next.c1[k] = damping * next.c1[k] + (1.0 - damping) * a.c1[k];
                next.qL[k] = damping * next.qL[k] + (1.0 - damping) * a.qL[k];
                next.qR[k] = damping * next.qR[k] + (1.0 - damping) * a.qR[k];
            }
        }
        double step = next.distance(a);
        if (!hist.steps.empty() && hist.steps.back() > 0.0) {
            double ratio = step / hist.steps.back();
            hist.ratios.push_back(ratio);
            bad = ratio >= 1.0 ? bad + 1 : 0;
            if (bad >= 3) {
                hist.iterations = it + 1;
                if (history) *history = hist;
                throw numeric_error("picard iteration diverges: contraction ratio >= 1 for 3 "
                                    "consecutive steps");
            }
        }
        hist.steps.push_back(step);
        a = next;
        MixedProblem p{g, G, assemble_data(base, a, fam, g), scale};
        omega = solve_mixed(p);
        hist.iterations = it + 1;
        if (step <= tol) {
            hist.converged = true;
            break;
        }
    }
    if (history) *history = hist;
    if (!hist.converged)
        throw numeric_error("picard iteration did not converge in " + std::to_string(max_iter) +
                            " iterations");
    return a;
}

// --- regularity dichotomy ---------------------------------------------------

struct RegularityReport {
    std::vector<std::pair<int, int>> levels;      // (n_t, n_rho)
    std::vector<std::vector<double>> norms;       // [k-1][level]
    std::vector<std::vector<double>> ratios;      // [k-1][level-1]
    std::vector<std::string> verdicts;            // per k: bounded | diverging
    double bounded_threshold = 1.5;
};

// discrete L^2((0,1); H^1) norm of dt^k Omega: k-fold first differences in
// t, centered rho derivative, trapezoid-free row sums (ratio comparisons
// only, constants cancel)
inline double dt_k_h1_norm(const Field& omega, int k) {
    const auto& g = omega.grid;
    if (g.n_t <= k) throw config_error("dt_k_h1_norm: too few time nodes");
    std::vector<std::vector<double>> d(g.n_t, std::vector<double>(g.n_rho));
    for (int i = 0; i < g.n_t; ++i)
        for (int j = 0; j < g.n_rho; ++j) d[i][j] = omega.at(i, j);
    int rows = g.n_t;
    for (int m = 0; m < k; ++m) {
        for (int i = 0; i + 1 < rows; ++i)
            for (int j = 0; j < g.n_rho; ++j) d[i][j] = (d[i + 1][j] - d[i][j]) / g.h_t;
        --rows;
    }
    double s = 0.0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < g.n_rho; ++j) {
            double dr = 0.0;
            if (j > 0 && j + 1 < g.n_rho) dr = (d[i][j + 1] - d[i][j - 1]) / (2.0 * g.h_rho);
            s += d[i][j] * d[i][j] + dr * dr;
        }
    }
    return std::sqrt(s * g.h_t * g.h_rho);
}

using ScalarFn = std::function<double(double)>;
using SourceFn = std::function<double(double, double)>;

// linear interpolant of half-line samples, zero beyond the last node; lets
// data assembled on one grid drive solves across refinement levels
inline ScalarFn halfline_interpolant(std::vector<double> samples, double h) {
    return [samples = std::move(samples), h](double rho) {
        double x = rho / h;
        int i = static_cast<int>(x);
        if (i < 0) return samples.front();
        if (i + 1 >= static_cast<int>(samples.size())) return 0.0;
        double u = x - i;
        return (1.0 - u) * samples[i] + u * samples[i + 1];
    };
}

inline RegularityReport regularity_report(const ScalarFn& xi_left, const ScalarFn& xi_right,
                                          const SourceFn& source,
                                          const std::vector<std::pair<int, int>>& levels,
                                          double R, int k_star, double scale = 1.0,
                                          double bounded_threshold = 1.5) {
    if (levels.size() < 3) throw config_error("regularity_report: need >= 3 refinement levels");
    if (k_star < 1) throw config_error("regularity_report: k_star must be >= 1");
    RegularityReport rep;
    rep.levels = levels;
    rep.bounded_threshold = bounded_threshold;
    rep.norms.assign(k_star, {});
    rep.ratios.assign(k_star, {});
    for (auto [nt, nr] : levels) {
        SpaceTimeGrid g = make_grid(nt, nr, R);
        MixedProblem p;
        p.grid = g;
        p.G = Field::sample(g, source);
        p.data = SideData(g.n_half());
        for (int m = 0; m < g.n_half(); ++m) {
            p.data.left[m] = xi_left(m * g.h_rho);
            p.data.right[m] = xi_right(m * g.h_rho);
        }
        p.scale = scale;
        Field omega = solve_mixed(p);
        for (int k = 1; k <= k_star; ++k) rep.norms[k - 1].push_back(dt_k_h1_norm(omega, k));
    }
    for (int k = 0; k < k_star; ++k) {
        bool zero = true;
        for (std::size_t l = 1; l < rep.norms[k].size(); ++l) {
            double lo = rep.norms[k][l - 1];
            rep.ratios[k].push_back(lo > 0.0 ? rep.norms[k][l] / lo : 1.0);
            if (rep.norms[k][l] > 1e-13) zero = false;
        }
        double last = rep.ratios[k].back();
        rep.verdicts.push_back(zero || last <= bounded_threshold ? "bounded" : "diverging");
    }
    return rep;
}

inline void write_regularity_csv(std::ostream& os, const RegularityReport& rep) {
    os << "level,k,norm,ratio,verdict\n";
    for (std::size_t l = 0; l < rep.levels.size(); ++l)
        for (std::size_t k = 0; k < rep.norms.size(); ++k) {
            double ratio = l == 0 ? 0.0 : rep.ratios[k][l - 1];
            os << l << ',' << (k + 1) << ',' << rep.norms[k][l] << ',' << ratio << ','
               << rep.verdicts[k] << '\n';
        }
}

// --- rigidity moments -------------------------------------------------------

// Strip problem (rho dt + drho^2) f = 0 on (0,1) x (eps,R) with f = 0 at
// both caps and at rho = R, f = g at rho = eps. The row set is
// overdetermined (rigidity: only f = 0 is compatible); solved in weighted
// least squares via the normal equations. Boundary rows carry weight
// 1/h_rho^2 to match the PDE row scale; the g rows keep weight 1 so the
// incompatible data cannot dominate.
struct RigidityResult {
    std::vector<double> moments; // int_0^1 t^n f(t,eps) dt
    double f_max = 0.0;
    double trace_max = 0.0; // max |f(t,eps) - g(t)|
};

inline RigidityResult rigidity_moments(double epsilon, const std::vector<double>& g_samples,
                                       int n_max, int n_rho_strip, double R) {
    if (!(epsilon > 0.0 && epsilon < R)) throw config_error("rigidity_moments: bad epsilon");
    if (n_max < 0) throw config_error("rigidity_moments: n_max must be >= 0");
    const int nt = static_cast<int>(g_samples.size());
    if (nt < 4) throw config_error("rigidity_moments: need >= 4 time samples");
    const int nr = n_rho_strip;
    if (nr < 4) throw config_error("rigidity_moments: strip too narrow");
    const double ht = 1.0 / (nt - 1), hr = (R - epsilon) / (nr - 1);
    const int N = nt * nr;
    auto idx = [&](int i, int j) { return i * nr + j; };
    std::vector<Triplet> trip;
    std::vector<double> rhs_rows;
    int nrow = 0;
    auto add = [&](std::initializer_list<std::pair<int, double>> entries, double b) {
        for (auto [c, v] : entries) trip.emplace_back(nrow, c, v);
        rhs_rows.push_back(b);
        ++nrow;
    };
    const double wcap = 1.0 / (hr * hr);
    for (int i = 0; i + 1 < nt; ++i)
        for (int j = 1; j + 1 < nr; ++j) {
            double rho = epsilon + j * hr;
            add({{idx(i + 1, j), rho / ht},
                 {idx(i, j), -rho / ht - 2.0 / (hr * hr)},
                 {idx(i, j - 1), 1.0 / (hr * hr)},
                 {idx(i, j + 1), 1.0 / (hr * hr)}},
                0.0);
        }
    for (int j = 0; j < nr; ++j) {
        add({{idx(0, j), wcap}}, 0.0);
        add({{idx(nt - 1, j), wcap}}, 0.0);
    }
    for (int i = 0; i < nt; ++i) {
        add({{idx(i, 0), 1.0}}, g_samples[i]);
        add({{idx(i, nr - 1), wcap}}, 0.0);
    }
    Eigen::SparseMatrix<double> A(nrow, N);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rhs_rows.data(), nrow);
    Eigen::SparseMatrix<double> AtA = (A.transpose() * A).pruned();
    Eigen::VectorXd Atb = A.transpose() * b;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(AtA);
    if (lu.info() != Eigen::Success) throw numeric_error("rigidity_moments: normal equations singular");
    Eigen::VectorXd f = lu.solve(Atb);

    RigidityResult out;
    std::vector<double> trace(nt), tn(nt);
    for (int i = 0; i < nt; ++i) {
        trace[i] = f[idx(i, 0)];
        out.trace_max = std::max(out.trace_max, std::abs(trace[i] - g_samples[i]));
    }
    for (int i = 0; i < N; ++i) out.f_max = std::max(out.f_max, std::abs(f[i]));
    for (int n = 0; n <= n_max; ++n) {
        for (int i = 0; i < nt; ++i) tn[i] = std::pow(i * ht, n) * trace[i];
        out.moments.push_back(trapezoid(tn, ht));
    }
    return out;
}

} // namespace mixedlab
