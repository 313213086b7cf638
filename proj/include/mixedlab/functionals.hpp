#pragma once

// Constraint functionals: ell_0/ell_1 and their order-k extensions, alpha,
// beta, the D1/D3 quotient operators, the polynomial corrector Q and the
// mass functional ell_{-1}.
//
// Sign conventions. Right-side data is stored on the reflected half-line
// sigma = -rho. The quotient operators divide by the *original* rho, so one
// application of D1 or D3 on the right side picks up a minus sign in the
// reflected storage. Chasing that sign through the integrated-by-parts
// identity shows the weighted form int rho dt^k Phi * hat (as printed, with
// the right integral in the original coordinate) equals (-1)^k times the
// canonical form ell_j[D3^{k-1} hat]; eval_l exposes both and the tests pin
// the ratio.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "duals.hpp"
#include "fs.hpp"
#include "grid.hpp"

namespace mixedlab {

// plateau cutoff: 1 on [0,1], quintic smoothstep down to 0 at 2
inline double chi_cutoff(double r) {
    r = std::abs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double u = r - 1.0;
    return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// compactly supported hat data (Xi_hat), both sides on the positive
// half-line with the usual reflection for the right cap
struct HatData {
    double h = 0.0;
    std::vector<double> left, right;

    explicit HatData(const SpaceTimeGrid& g)
        : h(g.h_rho), left(g.n_half(), 0.0), right(g.n_half(), 0.0) {}
    HatData() = default;

    int n() const { return static_cast<int>(left.size()); }
};

// smooth C^2 bump (1-u^2)^3 translated to [center-width, center+width]
inline double bump_profile(double rho, double center, double width) {
    double u = (rho - center) / width;
    if (std::abs(u) >= 1.0) return 0.0;
    double v = 1.0 - u * u;
    return v * v * v;
}

inline HatData bump_hat(const SpaceTimeGrid& g, int side, double center, double width,
                        double amplitude = 1.0) {
    if (side != 0 && side != 1) throw config_error("bump_hat: side must be 0 (left) or 1 (right)");
    if (!(width > 0.0)) throw config_error("bump_hat: width must be positive");
    HatData hat(g);
    auto& v = side == 0 ? hat.left : hat.right;
    for (int k = 0; k < hat.n(); ++k) v[k] = amplitude * bump_profile(k * g.h_rho, center, width);
    return hat;
}

// hats must live in [support_lo, R-1]: away from the interface (quotients,
// trace ladders) and away from the truncation edge
inline void check_hat_support(const HatData& hat, double R, double support_lo = 0.5) {
    for (int k = 0; k < hat.n(); ++k) {
        double rho = k * hat.h;
        if (rho >= support_lo && rho <= R - 1.0) continue;
        if (std::abs(hat.left[k]) > 1e-14 || std::abs(hat.right[k]) > 1e-14)
            throw config_error("hat data leaks outside the support band [" +
                               std::to_string(support_lo) + ", R-1]");
    }
}

// D1 f = (f - chi f(0)) / rho on half-line samples, rho = k*h; the rho=0
// value is the L'Hopital limit f'(0)
inline std::vector<double> apply_D1(const std::vector<double>& f, double h) {
    if (f.size() < 3) throw config_error("apply_D1: need at least 3 samples");
    std::vector<double> out(f.size());
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = (f[k] - chi_cutoff(k * h) * f[0]) / (k * h);
    out[0] = one_sided_first(f, h);
    if (!std::isfinite(out[0])) throw numeric_error("apply_D1: limit at 0 not finite");
    return out;
}

// D3 f = (drho^2 f - chi drho^2 f(0)) / rho; limit at 0 is f'''(0)
// (one-sided 2nd-order stencil; chi is flat at 0 so it contributes nothing)
inline std::vector<double> apply_D3(const std::vector<double>& f, double h) {
    if (f.size() < 5) throw config_error("apply_D3: need at least 5 samples");
    auto d2 = second_derivative_line(f, h);
    std::vector<double> out(f.size());
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = (d2[k] - chi_cutoff(k * h) * d2[0]) / (k * h);
    out[0] = (-2.5 * f[0] + 9.0 * f[1] - 12.0 * f[2] + 7.0 * f[3] - 1.5 * f[4]) / (h * h * h);
    if (!std::isfinite(out[0])) throw numeric_error("apply_D3: limit at 0 not finite");
    return out;
}

// k-fold D3 in the *original* coordinate: on the reflected right half-line
// each application flips sign
inline std::vector<double> d3_power_side(std::vector<double> f, double h, int k, bool right) {
    for (int m = 0; m < k; ++m) {
        f = apply_D3(f, h);
        if (right)
            for (auto& x : f) x = -x;
    }
    return f;
}

enum class EllForm { ibp, weighted };

// ell_j^{(k)}. `ibp` is the canonical composition ell_j[D3^{k-1} hat];
// `weighted` integrates the dt^k trace ladder against the hat as printed in
// the source display. weighted = (-1)^k * ibp in the continuum.
inline double eval_l(int j, int k, const HatData& hat, const DualProfile& phi0,
                     const DualProfile& phi1, EllForm form = EllForm::ibp) {
    if (k < 1) throw config_error("eval_l: k must be >= 1");
    const DualProfile& phi = j == 0 ? phi0 : phi1;
    if (phi.j != j) throw config_error("eval_l: dual profile label mismatch");
    const auto& g = phi.sol.field.grid;
    if (hat.n() != g.n_half() || std::abs(hat.h - g.h_rho) > 1e-14 * g.h_rho)
        throw config_error("eval_l: hat grid mismatch");
    check_hat_support(hat, g.radius, std::max(0.5, phi.epsilon_ladder));
    const double h = g.h_rho;

    if (form == EllForm::ibp) {
        auto fL = d3_power_side(hat.left, h, k - 1, false);
        auto fR = d3_power_side(hat.right, h, k - 1, true);
        auto d2L = second_derivative_line(phi.left_traces[0], h);
        auto d2R = second_derivative_line(phi.right_traces[0], h);
        // right term: -int_{-inf}^0 d2 Phi_R * D3^{k-1} hat_R in the
        // original coordinate; fR already carries the reflection signs
        return integrate_halfline(d2L, fL, h) - integrate_halfline(d2R, fR, h);
    }

    if (static_cast<int>(phi.left_traces.size()) <= k)
        throw config_error("eval_l: dual ladder shallower than k");
    // int_0^inf rho dt^k Phi_L hat_L - int_{-inf}^0 rho dt^k Phi_R hat_R
    std::vector<double> wl(hat.n()), wr(hat.n());
    for (int m = 0; m < hat.n(); ++m) {
        wl[m] = m * h * phi.left_traces[k][m];
        wr[m] = m * h * phi.right_traces[k][m]; // -rho = sigma on the right
    }
    return integrate_halfline(wl, hat.left, h) + integrate_halfline(wr, hat.right, h);
}

// centered time derivative, one-sided second order at the end caps
inline Field time_derivative(const Field& f) {
    const auto& g = f.grid;
    if (g.n_t < 4) throw config_error("time_derivative: need n_t >= 4");
    Field out(g);
    for (int jj = 0; jj < g.n_rho; ++jj) {
        for (int i = 1; i + 1 < g.n_t; ++i)
            out.at(i, jj) = (f.at(i + 1, jj) - f.at(i - 1, jj)) / (2.0 * g.h_t);
        out.at(0, jj) = (-3.0 * f.at(0, jj) + 4.0 * f.at(1, jj) - f.at(2, jj)) / (2.0 * g.h_t);
        out.at(g.n_t - 1, jj) =
            (3.0 * f.at(g.n_t - 1, jj) - 4.0 * f.at(g.n_t - 2, jj) + f.at(g.n_t - 3, jj)) /
            (2.0 * g.h_t);
    }
    return out;
}

// alpha_j^{(k)} = -scale * intint dt^k G * Phi^j
inline double eval_alpha(int j, const Field& G, const DualProfile& phi, int k = 1,
                         double scale = 1.0) {
    const auto& g = G.grid;
    if (!phi.sol.field.grid.same_as(g)) throw config_error("eval_alpha: grid mismatch");
    if (k < 1) throw config_error("eval_alpha: k must be >= 1");
    (void)j;
    Field dG = G;
    for (int m = 0; m < k; ++m) dG = time_derivative(dG);
    const auto& a = phi.sol;
    const int mid = g.interface_index;
    double s = 0.0;
    for (int i = 0; i < g.n_t; ++i) {
        double wt = (i == 0 || i == g.n_t - 1) ? 0.5 : 1.0;
        for (int jj = 0; jj < g.n_rho; ++jj) {
            double wr = (jj == 0 || jj == g.n_rho - 1) ? 0.5 : 1.0;
            double ph = (jj == mid) ? 0.5 * (a.field.at(i, mid) + a.plus[i]) : a.field.at(i, jj);
            s += wt * wr * dG.at(i, jj) * ph;
        }
    }
    return -scale * s * g.h_t * g.h_rho;
}

// beta on pre-sampled half-line data: gl/gr are the (scaled) cap traces of
// the source at the relevant derivative level, pl/pr the singular part
// (Q at level 1). Right-side derivative converts with d/drho = -d/dsigma.
inline double eval_beta_sampled(int j, const std::vector<double>& gl,
                                const std::vector<double>& gr, const std::vector<double>& pl,
                                const std::vector<double>& pr, double h,
                                const DualProfile& phi) {
    if (phi.j != j) throw config_error("eval_beta: dual profile label mismatch");
    const auto& phiL = phi.left_traces[0];
    const auto& phiR = phi.right_traces[0];
    if (gl.size() != phiL.size() || pl.size() != phiL.size() || gr.size() != phiR.size() ||
        pr.size() != phiR.size())
        throw config_error("eval_beta: sample length mismatch");
    auto d2pl = second_derivative_line(pl, h);
    auto d2pr = second_derivative_line(pr, h);
    std::vector<double> wl(gl.size()), wr(gr.size());
    for (std::size_t m = 0; m < gl.size(); ++m) {
        wl[m] = gl[m] + d2pl[m];
        wr[m] = gr[m] + d2pr[m];
    }
    double t1 = -integrate_halfline(phiL, wl, h);
    double t2 = integrate_halfline(phiR, wr, h); // reflected measure keeps the + sign
    double jump;
    if (j == 0) {
        jump = pl[0] - pr[0];
    } else {
        double dL = one_sided_first(pl, h);
        double dR = -one_sided_first(pr, h);
        jump = dL - dR;
    }
    return t1 + t2 - jump;
}

// corrector Q(rho) = chi(rho) sum_k q_{2+3(k-1)} rho^{2+3(k-1)}. The right
// cap coefficients are stored in the reflected coordinate, so both sides
// sample identically.
struct CorrectorQ {
    int k_star = 0;
    std::vector<double> qL, qR; // q_{*,2+3(k-1)}, k = 1..k_star

    double eval_side(double rho, bool right) const {
        const auto& q = right ? qR : qL;
        double s = 0.0;
        for (int k = 1; k <= k_star; ++k) s += q[k - 1] * std::pow(rho, 2 + 3 * (k - 1));
        return chi_cutoff(rho) * s;
    }

    std::vector<double> sample(const SpaceTimeGrid& g, bool right) const {
        std::vector<double> out(g.n_half());
        for (int m = 0; m < g.n_half(); ++m) out[m] = eval_side(m * g.h_rho, right);
        return out;
    }
};

// cap traces of a source field: left = G(0, rho >= 0), right = G(1, rho <= 0)
// in the reflected coordinate
inline SideData source_cap_traces(const Field& G) {
    const auto& g = G.grid;
    SideData out(g.n_half());
    for (int k = 0; k < g.n_half(); ++k) {
        out.left[k] = G.at(0, g.interface_index + k);
        out.right[k] = G.at(g.n_t - 1, g.interface_index - k);
    }
    return out;
}

namespace detail {

// one-sided derivative of order d at the first node from n samples,
// weights from the local Vandermonde system (exact on degree n-1)
inline double one_sided_derivative(const std::vector<double>& f, double h, int d, int n) {
    if (static_cast<int>(f.size()) < n) throw config_error("one_sided_derivative: too few samples");
    if (n <= d) throw config_error("one_sided_derivative: stencil narrower than order");
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int p = 0; p < n; ++p) {
        double fact = 1.0;
        for (int q = 2; q <= p; ++q) fact *= q;
        for (int i = 0; i < n; ++i) V(p, i) = std::pow(static_cast<double>(i), p) / fact;
        if (p == d) b[p] = 1.0;
    }
    Eigen::VectorXd w = V.fullPivLu().solve(b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f[i];
    return s / std::pow(h, d);
}

} // namespace detail

// q_{*,2+3(k-1)} = -scale * drho^{3(k-1)} G_*(0) / (2+3(k-1))!, meeting the
// corrector conditions drho^{2+3m} Q(0) = -scale * drho^{3m} G(0) exactly
inline CorrectorQ build_Q(const Field& G, int k_star, double scale = 1.0) {
    if (k_star < 0) throw config_error("build_Q: k_star must be >= 0");
    const auto& g = G.grid;
    const int width = 3 * k_star + 2;
    if (k_star > 0 && g.n_half() < width)
        throw config_error("build_Q: grid too small for derivative stencils of width " +
                           std::to_string(width));
    SideData tr = source_cap_traces(G);
    CorrectorQ Q;
    Q.k_star = k_star;
    for (int k = 1; k <= k_star; ++k) {
        const int d = 3 * (k - 1);
        double fact = 1.0;
        for (int q = 2; q <= 2 + d; ++q) fact *= q;
        double gl = d == 0 ? tr.left[0] : detail::one_sided_derivative(tr.left, g.h_rho, d, width);
        double gr = d == 0 ? tr.right[0] : detail::one_sided_derivative(tr.right, g.h_rho, d, width);
        Q.qL.push_back(-scale * gl / fact);
        Q.qR.push_back(-scale * gr / fact);
    }
    return Q;
}

// beta_j as in the k = 1 constraint: G traces plus the corrector
inline double eval_beta(int j, const SideData& g_traces, const CorrectorQ& Q,
                        const DualProfile& phi, double scale = 1.0) {
    const auto& g = phi.sol.field.grid;
    if (g_traces.n() != g.n_half()) throw config_error("eval_beta: trace length mismatch");
    std::vector<double> gl(g_traces.left), gr(g_traces.right);
    for (auto& x : gl) x *= scale;
    for (auto& x : gr) x *= scale;
    return eval_beta_sampled(j, gl, gr, Q.sample(g, false), Q.sample(g, true), g.h_rho, phi);
}

// mass functional ell_{-1}[F] = int_0^1 F_R(L^{-1/3}(z'-1)) / ubar'(1,z') dz'
// with ubar' = f'' of the Falkner-Skan profile at x = 1. F_right is given in
// the reflected coordinate, so the argument is sigma = L^{-1/3}(1-z').
inline double eval_l_minus1(const std::vector<double>& F_right, double h, const FSProfile& fs,
                            double L, double denom_floor = 1e-3) {
    if (!(L > 0.0)) throw config_error("eval_l_minus1: L must be positive");
    if (F_right.size() < 2) throw config_error("eval_l_minus1: too few samples");
    auto sample_F = [&](double sigma) {
        double x = sigma / h;
        int i = static_cast<int>(x);
        if (i < 0) return F_right.front();
        if (i + 1 >= static_cast<int>(F_right.size())) return 0.0;
        double u = x - i;
        return (1.0 - u) * F_right[i] + u * F_right[i + 1];
    };
    auto fpp_at = [&](double z) {
        double x = z / fs.d_eta;
        int i = static_cast<int>(x);
        if (i + 1 >= static_cast<int>(fs.fpp.size())) throw config_error("eval_l_minus1: z beyond fs samples");
        double u = x - i;
        return (1.0 - u) * fs.fpp[i] + u * fs.fpp[i + 1];
    };
    const int nq = 2001;
    const double dz = 1.0 / (nq - 1);
    const double scale = std::pow(L, -1.0 / 3.0);
    double s = 0.0;
    for (int i = 0; i < nq; ++i) {
        double z = i * dz;
        double F = sample_F(scale * (1.0 - z));
        if (F == 0.0) continue;
        double den = fpp_at(z);
        if (std::abs(den) < denom_floor)
            throw numeric_error("eval_l_minus1: ubar'(1,z') below threshold on integrand support");
        double w = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
        s += w * F / den;
    }
    return s * dz;
}

} // namespace mixedlab
