#pragma once

// Grids, discrete fields and one-sided trace containers shared by the
// numerical modules. Everything lives on a uniform tensor grid over
// (t, rho) in (0,1) x (-R, R) with rho = 0 as an exact node.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixedlab {

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpaceTimeGrid {
    int n_t = 0;
    int n_rho = 0;
    double radius = 0.0;
    double h_t = 0.0;
    double h_rho = 0.0;
    int interface_index = 0;

    double t(int i) const { return i * h_t; }
    double rho(int j) const { return -radius + j * h_rho; }
    // number of nodes on one closed half-line [0, R]
    int n_half() const { return interface_index + 1; }

    bool same_as(const SpaceTimeGrid& o) const {
        return n_t == o.n_t && n_rho == o.n_rho && radius == o.radius;
    }
};

inline SpaceTimeGrid make_grid(int n_t, int n_rho, double R) {
    if (n_t < 2) throw config_error("make_grid: n_t must be >= 2");
    if (n_rho < 3) throw config_error("make_grid: n_rho must be >= 3");
    if (n_rho % 2 == 0) throw config_error("make_grid: n_rho must be odd so rho=0 is a node");
    if (!(R > 0.0)) throw config_error("make_grid: R must be positive");
    SpaceTimeGrid g;
    g.n_t = n_t;
    g.n_rho = n_rho;
    g.radius = R;
    g.h_t = 1.0 / (n_t - 1);
    g.h_rho = 2.0 * R / (n_rho - 1);
    g.interface_index = (n_rho - 1) / 2;
    return g;
}

struct Field {
    SpaceTimeGrid grid;
    std::vector<double> values; // row-major, t outer, rho inner

    Field() = default;
    explicit Field(const SpaceTimeGrid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.n_t) * g.n_rho, fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n_rho + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n_rho + j]; }

    template <class F>
    static Field sample(const SpaceTimeGrid& g, F&& f) {
        Field out(g);
        for (int i = 0; i < g.n_t; ++i)
            for (int j = 0; j < g.n_rho; ++j)
                out.at(i, j) = f(g.t(i), g.rho(j));
        return out;
    }
};

// One-sided cap data. Both caps are stored on the positive half-line
// coordinate; the right cap (rho < 0, t = 1) uses sigma = -rho.
struct SideData {
    std::vector<double> left;  // Xi_L(rho_k), rho_k = k * h_rho, k = 0..n_half-1
    std::vector<double> right; // Xi_R(-sigma_k) in the reflected coordinate

    SideData() = default;
    explicit SideData(int n_half) : left(n_half, 0.0), right(n_half, 0.0) {}

    int n() const { return static_cast<int>(left.size()); }
};

// reflection between the signed rho index and the half-line index
inline int reflect_index(const SpaceTimeGrid& g, int half_k) { return g.interface_index - half_k; }

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline void check_decay(const SideData& d, double tol) {
    if (d.left.empty()) return;
    if (std::abs(d.left.back()) > tol || std::abs(d.right.back()) > tol)
        throw numeric_error("side data does not decay at |rho| = R");
}

// Second derivative in rho along each time row. Centered 3-point stencil in
// the interior, one-sided second-order stencils at the edges (exact on
// quadratics everywhere).
inline std::vector<double> second_derivative_line(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 3) throw config_error("second_derivative: need at least 3 samples");
    std::vector<double> out(n);
    const double h2 = h * h;
    for (int j = 1; j + 1 < n; ++j) out[j] = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / h2;
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3 < n ? 3 : 2]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4 >= 0 ? n - 4 : n - 3]) / h2;
    if (n == 3) { out[0] = out[1]; out[2] = out[1]; } // quadratic through 3 points
    return out;
}

inline Field second_derivative_rho(const Field& f) {
    Field out(f.grid);
    std::vector<double> row(f.grid.n_rho);
    for (int i = 0; i < f.grid.n_t; ++i) {
        for (int j = 0; j < f.grid.n_rho; ++j) row[j] = f.at(i, j);
        auto d = second_derivative_line(row, f.grid.h_rho);
        for (int j = 0; j < f.grid.n_rho; ++j) out.at(i, j) = d[j];
    }
    return out;
}

// one-sided first derivative, 2nd order, at the first sample of a half-line
inline double one_sided_first(const std::vector<double>& f, double h) {
    if (f.size() < 3) throw config_error("one_sided_first: need 3 samples");
    return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

// Composite trapezoid of trace * weight over a uniform half-line.
inline double integrate_halfline(const std::vector<double>& trace,
                                 const std::vector<double>& weight, double h) {
    if (trace.size() != weight.size())
        throw config_error("integrate_halfline: length mismatch");
    const std::size_t n = trace.size();
    if (n == 0) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        s += w * trace[k] * weight[k];
    }
    return s * h;
}

inline double trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> one(f.size(), 1.0);
    return integrate_halfline(f, one, h);
}

} // namespace mixedlab
