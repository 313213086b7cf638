// mixedlab command-line front end.
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric failure,
// 4 dichotomy failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "mixedlab/basis.hpp"
#include "mixedlab/config.hpp"
#include "mixedlab/csv.hpp"
#include "mixedlab/degree.hpp"
#include "mixedlab/duals.hpp"
#include "mixedlab/fs.hpp"
#include "mixedlab/functionals.hpp"
#include "mixedlab/grid.hpp"
#include "mixedlab/lab.hpp"
#include "mixedlab/solver.hpp"
#include "mixedlab/svg.hpp"

namespace ml = mixedlab;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    int nt = 65;
    int nrho = 129;
    double R = 8.0;
    double scale = 1.0;
    int kstar = 1;
    std::string out;
    long seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--nt", o.nt, "time nodes");
    cmd->add_option("--nrho", o.nrho, "space nodes (odd)");
    cmd->add_option("--R", o.R, "domain half-width");
    cmd->add_option("--scale", o.scale, "source scale factor");
    cmd->add_option("--kstar", o.kstar, "constraint order");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed recorded in the manifest");
}

void emit_manifest(const CommonOpts& o, const std::map<std::string, std::string>& extra) {
    ml::ConfigMap m;
    m["nt"] = std::to_string(o.nt);
    m["nrho"] = std::to_string(o.nrho);
    m["R"] = ml::fmt17(o.R);
    m["scale"] = ml::fmt17(o.scale);
    m["kstar"] = std::to_string(o.kstar);
    m["seed"] = std::to_string(o.seed);
    for (const auto& [k, v] : extra) m[k] = v;
    std::cout << "# manifest\n";
    ml::write_manifest(std::cout, m);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        std::ofstream os(fs::path(o.out) / "manifest.txt");
        ml::write_manifest(os, m);
    }
}

double gauss(double rho) { return std::exp(-rho * rho); }

ml::SourceFn make_source(const std::string& name) {
    if (name == "zero") return [](double, double) { return 0.0; };
    if (name == "gauss") return [](double, double rho) { return gauss(rho); };
    if (name == "tgauss") return [](double t, double rho) { return t * gauss(rho); };
    throw ml::config_error("unknown source family " + name);
}

ml::ScalarFn make_data(const std::string& name) {
    if (name == "zero") return [](double) { return 0.0; };
    if (name == "gauss") return [](double rho) { return gauss(rho); };
    throw ml::config_error("unknown data family " + name);
}

double field_l2_error(const ml::Field& a, const ml::SourceFn& exact) {
    const auto& g = a.grid;
    double s = 0.0;
    for (int i = 0; i < g.n_t; ++i)
        for (int j = 0; j < g.n_rho; ++j) {
            double d = a.at(i, j) - exact(g.t(i), g.rho(j));
            s += d * d;
        }
    return std::sqrt(s * g.h_t * g.h_rho);
}

ml::MixedProblem manufactured_problem(const ml::SpaceTimeGrid& g, bool linear_in_t,
                                      ml::SourceFn* exact_out) {
    auto amp = [linear_in_t](double t) { return linear_in_t ? 1.0 + 0.5 * t : std::sin(1.2 + t); };
    auto damp = [linear_in_t](double t) { return linear_in_t ? 0.5 : std::cos(1.2 + t); };
    auto exact = [amp](double t, double rho) { return amp(t) * gauss(rho); };
    if (exact_out) *exact_out = exact;
    ml::MixedProblem p;
    p.grid = g;
    p.G = ml::Field::sample(g, [&](double t, double rho) {
        return rho * damp(t) * gauss(rho) - amp(t) * (4.0 * rho * rho - 2.0) * gauss(rho);
    });
    p.data = ml::SideData(g.n_half());
    for (int m = 0; m < g.n_half(); ++m) {
        double rho = m * g.h_rho;
        p.data.left[m] = exact(0.0, rho);
        p.data.right[m] = exact(1.0, -rho);
    }
    p.scale = 1.0;
    return p;
}

// default compact base data, both sides (supported in the band)
ml::HatData default_base(const ml::SpaceTimeGrid& g) {
    ml::HatData base(g);
    for (int m = 0; m < base.n(); ++m) {
        double rho = m * g.h_rho;
        base.left[m] = 0.7 * ml::bump_profile(rho, 2.0, 0.8);
        base.right[m] = 0.5 * ml::bump_profile(rho, 2.5, 0.9);
    }
    return base;
}

int cmd_solve(const CommonOpts& o, const std::string& data, const std::string& source,
              bool manufactured, bool heatmap) {
    if (manufactured) {
        std::vector<std::pair<int, int>> levels{{33, 65}, {65, 129}, {129, 257}};
        for (int variant = 0; variant < 2; ++variant) {
            bool linear = variant == 0;
            std::vector<double> errs;
            for (auto [nt, nr] : levels) {
                auto g = ml::make_grid(nt, nr, o.R);
                ml::SourceFn exact;
                auto p = manufactured_problem(g, linear, &exact);
                errs.push_back(field_l2_error(ml::solve_mixed(p), exact));
            }
            std::cout << (linear ? "spatial" : "temporal") << " errors:";
            for (double e : errs) std::cout << ' ' << e;
            std::cout << "\norders:";
            for (std::size_t i = 1; i < errs.size(); ++i)
                std::cout << ' ' << std::log2(errs[i - 1] / errs[i]);
            std::cout << '\n';
        }
        emit_manifest(o, {{"mode", "manufactured"}});
        return 0;
    }
    auto g = ml::make_grid(o.nt, o.nrho, o.R);
    ml::MixedProblem p;
    p.grid = g;
    p.G = ml::Field::sample(g, make_source(source));
    p.data = ml::SideData(g.n_half());
    auto d = make_data(data);
    for (int m = 0; m < g.n_half(); ++m) {
        p.data.left[m] = d(m * g.h_rho);
        p.data.right[m] = d(m * g.h_rho);
    }
    p.scale = o.scale;
    ml::check_decay(p.data, 1e-8);
    double cond = 0.0;
    ml::Field omega = ml::solve_mixed(p, 1e12, &cond);
    std::string dir = o.out.empty() ? "." : o.out;
    fs::create_directories(dir);
    ml::write_field_csv((fs::path(dir) / "solution.csv").string(), omega);
    if (heatmap) ml::write_svg_heatmap((fs::path(dir) / "solution.svg").string(), omega);
    std::cout << "wrote " << dir << "/solution.csv (cond estimate " << cond << ")\n";
    emit_manifest(o, {{"data", data}, {"source", source}});
    return 0;
}

void write_trace_csv(const std::string& path, const std::vector<std::vector<double>>& traces,
                     double h) {
    std::ofstream os(path);
    if (!os) throw ml::config_error("cannot open " + path);
    os << "k,rho,value\n";
    for (std::size_t k = 0; k < traces.size(); ++k)
        for (std::size_t m = 0; m < traces[k].size(); ++m)
            os << k << ',' << ml::fmt17(m * h) << ',' << ml::fmt17(traces[k][m]) << '\n';
}

int cmd_adjoint(const CommonOpts& o, int j, int kmax) {
    auto g = ml::make_grid(o.nt, o.nrho, o.R);
    auto phi = ml::build_dual(g, j, kmax);
    const auto& L = phi.left_traces[0];
    const auto& R = phi.right_traces[0];
    std::cout << "phi" << j << "_L(0)=" << L[0] << " dphi" << j << "_L(0)="
              << ml::one_sided_first(L, g.h_rho) << '\n';
    std::cout << "phi" << j << "_R(0)=" << R[0] << " dphi" << j << "_R(0)="
              << -ml::one_sided_first(R, g.h_rho) << '\n';
    std::cout << "tail |phi(+-R)| = " << std::abs(L.back()) << ' ' << std::abs(R.back()) << '\n';
    std::string dir = o.out.empty() ? "." : o.out;
    fs::create_directories(dir);
    write_trace_csv((fs::path(dir) / ("phi" + std::to_string(j) + "_left.csv")).string(),
                    phi.left_traces, g.h_rho);
    write_trace_csv((fs::path(dir) / ("phi" + std::to_string(j) + "_right.csv")).string(),
                    phi.right_traces, g.h_rho);
    ml::write_field_csv((fs::path(dir) / ("phi" + std::to_string(j) + ".csv")).string(),
                        phi.sol.field);
    emit_manifest(o, {{"j", std::to_string(j)}, {"kmax", std::to_string(kmax)}});
    return 0;
}

int cmd_basis(const CommonOpts& o, int nbumps, double width) {
    auto g = ml::make_grid(o.nt, o.nrho, o.R);
    auto phi0 = ml::build_dual(g, 0, o.kstar);
    auto phi1 = ml::build_dual(g, 1, o.kstar);
    if (nbumps <= 0) nbumps = 4 * o.kstar;
    auto fam = ml::build_basis(o.kstar, phi0, phi1, nbumps, width);
    auto D = ml::biorthogonality_defect(fam, phi0, phi1);
    std::cout << "condition " << fam.condition << '\n';
    std::cout << "biorthogonality defect " << D.cwiseAbs().maxCoeff() << " (tolerance "
              << 1e-8 * fam.condition << ")\n";
    std::string dir = o.out.empty() ? "." : o.out;
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / "basis.csv");
    os << "name,rho,value\n";
    for (int r = 0; r < 2 * o.kstar; ++r) {
        int jj = r / o.kstar, k = 1 + r % o.kstar;
        std::string name = "e" + std::to_string(jj) + "_k" + std::to_string(k);
        const auto& e = fam.vectors[r];
        for (int m = 0; m < e.n(); ++m)
            os << name << "_L," << ml::fmt17(m * g.h_rho) << ',' << ml::fmt17(e.left[m]) << '\n';
        for (int m = 0; m < e.n(); ++m)
            os << name << "_R," << ml::fmt17(m * g.h_rho) << ',' << ml::fmt17(e.right[m]) << '\n';
    }
    emit_manifest(o, {{"nbumps", std::to_string(nbumps)}, {"width", ml::fmt17(width)}});
    return 0;
}

int cmd_coeffs(const CommonOpts& o, const std::string& source, bool picard, double L,
               double coupling, int max_iter, double tol) {
    auto g = ml::make_grid(o.nt, o.nrho, o.R);
    auto phi0 = ml::build_dual(g, 0, o.kstar);
    auto phi1 = ml::build_dual(g, 1, o.kstar);
    auto fam = ml::build_basis(o.kstar, phi0, phi1, 4 * o.kstar);
    auto base = default_base(g);
    ml::Field G0 = ml::Field::sample(g, make_source(source));
    ml::CoefficientVector a;
    ml::PicardHistory hist;
    if (picard) {
        double scale = std::pow(L, 2.0 / 3.0);
        auto G_map = [&](const ml::Field& omega) {
            double e = 0.0;
            for (int i = 0; i < g.n_t; ++i)
                for (int jj = 1; jj + 1 < g.n_rho; ++jj) {
                    double dr = (omega.at(i, jj + 1) - omega.at(i, jj - 1)) / (2.0 * g.h_rho);
                    e += dr * dr;
                }
            e *= g.h_t * g.h_rho;
            ml::Field out = G0;
            for (auto& v : out.values) v *= 1.0 + coupling * e;
            return out;
        };
        a = ml::solve_coefficients_picard(base, G_map, fam, phi0, phi1, o.kstar, g, scale,
                                          max_iter, tol, &hist);
        std::cout << "picard converged in " << hist.iterations << " iterations\nratios:";
        for (double r : hist.ratios) std::cout << ' ' << r;
        std::cout << '\n';
    } else {
        a = ml::solve_coefficients_direct(base, G0, fam, phi0, phi1, o.kstar, o.scale);
    }
    std::cout << "coefficients (k, c0, c1, qL, qR):\n";
    for (int k = 1; k <= o.kstar; ++k)
        std::cout << "  " << k << ' ' << ml::fmt17(a.c0[k - 1]) << ' ' << ml::fmt17(a.c1[k - 1])
                  << ' ' << ml::fmt17(a.qL[k - 1]) << ' ' << ml::fmt17(a.qR[k - 1]) << '\n';
    if (!picard) {
        auto res = ml::constraint_residuals(a, base, G0, fam, phi0, phi1, o.scale);
        std::cout << "constraint residuals:";
        for (double r : res) std::cout << ' ' << r;
        std::cout << '\n';
    }
    emit_manifest(o, {{"source", source},
                      {"picard", picard ? "1" : "0"},
                      {"L", ml::fmt17(L)},
                      {"coupling", ml::fmt17(coupling)}});
    return 0;
}

int cmd_dichotomy(const CommonOpts& o, int levels_n, double threshold) {
    if (o.kstar < 1) throw ml::config_error("dichotomy: k_star must be >= 1");
    if (levels_n < 3) throw ml::config_error("dichotomy: need at least 3 refinement levels");
    std::vector<std::pair<int, int>> levels;
    for (int l = 0; l < levels_n; ++l)
        levels.emplace_back(33 << l, 64 * (1 << l) + 1);

    // assemble constrained data on the finest level's grid
    auto g = ml::make_grid(levels.back().first, levels.back().second, o.R);
    auto phi0 = ml::build_dual(g, 0, o.kstar);
    auto phi1 = ml::build_dual(g, 1, o.kstar);
    auto fam = ml::build_basis(o.kstar, phi0, phi1, 4 * o.kstar);
    auto base = default_base(g);
    auto source = make_source("gauss");
    ml::Field G = ml::Field::sample(g, source);
    auto a = ml::solve_coefficients_direct(base, G, fam, phi0, phi1, o.kstar, o.scale);
    auto good = ml::assemble_data(base, a, fam, g);
    auto bad_a = a;
    bad_a.qL[0] += 0.5; // shifts Xi_L''(0) by 1, violating the k = 1 constraint
    auto bad = ml::assemble_data(base, bad_a, fam, g);

    auto repA = ml::regularity_report(ml::halfline_interpolant(good.left, g.h_rho),
                                      ml::halfline_interpolant(good.right, g.h_rho), source,
                                      levels, o.R, o.kstar, o.scale, threshold);
    auto repB = ml::regularity_report(ml::halfline_interpolant(bad.left, g.h_rho),
                                      ml::halfline_interpolant(bad.right, g.h_rho), source,
                                      levels, o.R, o.kstar, o.scale, threshold);

    std::string dir = o.out.empty() ? "." : o.out;
    fs::create_directories(dir);
    {
        std::ofstream os(fs::path(dir) / "dichotomy_constrained.csv");
        ml::write_regularity_csv(os, repA);
        std::ofstream os2(fs::path(dir) / "dichotomy_violated.csv");
        ml::write_regularity_csv(os2, repB);
        ml::write_svg_curves((fs::path(dir) / "dichotomy.svg").string(),
                             {{"constrained", repA.norms[0]}, {"violated", repB.norms[0]}});
    }
    std::cout << "constrained verdict(k=1): " << repA.verdicts[0] << ", ratios:";
    for (double r : repA.ratios[0]) std::cout << ' ' << r;
    std::cout << "\nviolated verdict(k=1): " << repB.verdicts[0] << ", ratios:";
    for (double r : repB.ratios[0]) std::cout << ' ' << r;
    std::cout << '\n';
    emit_manifest(o, {{"levels", std::to_string(levels_n)}, {"threshold", ml::fmt17(threshold)}});
    bool ok = repA.verdicts[0] == "bounded" && repB.verdicts[0] == "diverging";
    if (!ok) {
        std::cerr << "dichotomy failed: expected (bounded, diverging)\n";
        return 4;
    }
    return 0;
}

int cmd_moments(const CommonOpts& o, double eps, int nmax, int nrstrip) {
    std::vector<double> gs(o.nt);
    for (int i = 0; i < o.nt; ++i) {
        double t = static_cast<double>(i) / (o.nt - 1);
        gs[i] = t * (1.0 - t);
    }
    auto res = ml::rigidity_moments(eps, gs, nmax, nrstrip, o.R);
    std::cout << "moments:";
    for (double m : res.moments) std::cout << ' ' << m;
    std::cout << "\n|f|_inf = " << res.f_max << "  trace defect = " << res.trace_max << '\n';
    emit_manifest(o, {{"eps", ml::fmt17(eps)},
                      {"nmax", std::to_string(nmax)},
                      {"nrstrip", std::to_string(nrstrip)}});
    return 0;
}

int cmd_fs(const CommonOpts& o, double beta, const std::string& branch, double eta_max) {
    if (branch != "attached" && branch != "reversed")
        throw ml::config_error("fs: branch must be attached or reversed");
    auto br = branch == "reversed" ? ml::FSBranch::reversed : ml::FSBranch::attached;
    auto p = ml::fs_solve(beta, eta_max, 1e-7, br);
    std::cout << "beta=" << beta << " fpp0=" << ml::fmt17(p.fpp0) << " n=" << p.n
              << " reversed=" << (p.reversed ? 1 : 0) << " residual=" << ml::fs_residual(p)
              << '\n';
    std::string dir = o.out.empty() ? "." : o.out;
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / "fs_profile.csv");
    os << "eta,f,fp,fpp\n";
    for (std::size_t i = 0; i < p.f.size(); ++i)
        os << ml::fmt17(i * p.d_eta) << ',' << ml::fmt17(p.f[i]) << ',' << ml::fmt17(p.fp[i])
           << ',' << ml::fmt17(p.fpp[i]) << '\n';
    emit_manifest(o, {{"beta", ml::fmt17(beta)}, {"branch", branch}});
    return 0;
}

int cmd_report(const CommonOpts& o, double beta) {
    auto g = ml::make_grid(o.nt, o.nrho, o.R);
    std::cout << "== dual profiles ==\n";
    std::vector<ml::DualProfile> phis;
    for (int j = 0; j < 2; ++j) {
        phis.push_back(ml::build_dual(g, j, std::max(1, o.kstar)));
        const auto& L = phis[j].left_traces[0];
        const auto& R = phis[j].right_traces[0];
        std::cout << "phi" << j << ": L(0)=" << L[0] << " L'(0)=" << ml::one_sided_first(L, g.h_rho)
                  << " R(0)=" << R[0] << " R'(0)=" << -ml::one_sided_first(R, g.h_rho) << '\n';
    }
    std::cout << "== duality residuals (manufactured) ==\n";
    ml::SourceFn exact;
    auto p = manufactured_problem(g, true, &exact);
    auto omega = ml::solve_mixed(p);
    for (int j = 0; j < 2; ++j)
        std::cout << "j=" << j << ": " << ml::duality_residual(p, omega, phis[j], j) << '\n';
    if (o.kstar >= 1) {
        std::cout << "== trace gram spectra (k <= " << o.kstar << ") ==\n";
        auto rep = ml::independence_report(phis[0], phis[1], o.kstar);
        std::cout << "left:";
        for (int i = 0; i < rep.sv_left.size(); ++i) std::cout << ' ' << rep.sv_left(i);
        std::cout << "\nright:";
        for (int i = 0; i < rep.sv_right.size(); ++i) std::cout << ' ' << rep.sv_right(i);
        std::cout << "\n== degree table ==\n";
        for (const auto& line : rep.degree_table) std::cout << line << '\n';
        std::cout << "degree calculus predicts independence: "
                  << (rep.degrees_predict_independence ? "yes" : "no") << '\n';
        for (const auto& f : rep.flags) std::cout << "flag: " << f << '\n';
    }
    std::cout << "== dependency certificates ==\n";
    // dt^2 Phi^1 = dt Phi^1 + Phi^0 and dt^2 Phi^1 = dt Phi^0 + Phi^1
    auto c1 = ml::check_dependency({1, 0, {1, 1}}, {{1, 1, {1, 1}}, {0, 2, {1, 1}}});
    auto c2 = ml::check_dependency({1, 0, {1, 1}}, {{0, 1, {1, 1}}, {1, 2, {1, 1}}});
    std::cout << c1.render() << '\n' << c2.render() << '\n';
    std::cout << "== falkner-skan ==\n";
    auto fsp = ml::fs_solve(beta);
    std::cout << "beta=" << beta << " fpp0=" << ml::fmt17(fsp.fpp0)
              << " residual=" << ml::fs_residual(fsp) << '\n';
    std::cout << "== rigidity moments (eps=0.5, g=t(1-t)) ==\n";
    std::vector<double> gs(o.nt);
    for (int i = 0; i < o.nt; ++i) {
        double t = static_cast<double>(i) / (o.nt - 1);
        gs[i] = t * (1.0 - t);
    }
    auto rig = ml::rigidity_moments(0.5, gs, 4, (o.nrho - 1) / 2 + 1, o.R);
    std::cout << "moments:";
    for (double m : rig.moments) std::cout << ' ' << m;
    std::cout << "\n|f|_inf = " << rig.f_max << '\n';
    emit_manifest(o, {{"beta", ml::fmt17(beta)}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the mixed-type degenerate parabolic problem"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "plain-text key-value config file (flags win)");

    CommonOpts o;

    auto* solve = app.add_subcommand("solve", "solve the mixed problem");
    std::string data = "zero", source = "zero";
    bool manufactured = false, heatmap = false;
    add_common(solve, o);
    solve->add_option("--data", data, "data family: zero|gauss");
    solve->add_option("--source", source, "source family: zero|gauss|tgauss");
    solve->add_flag("--manufactured", manufactured, "run the manufactured refinement study");
    solve->add_flag("--heatmap", heatmap, "also write an SVG heatmap");

    auto* adjoint = app.add_subcommand("adjoint", "build a dual profile");
    int j = 0, kmax = 1;
    add_common(adjoint, o);
    adjoint->add_option("--j", j, "profile label 0|1");
    adjoint->add_option("--kmax", kmax, "trace ladder depth");

    auto* basis = app.add_subcommand("basis", "build the biorthogonal family");
    int nbumps = 0;
    double width = 0.9;
    add_common(basis, o);
    basis->add_option("--nbumps", nbumps, "dictionary size (default 4*kstar)");
    basis->add_option("--width", width, "bump width");

    auto* coeffs = app.add_subcommand("coeffs", "solve the constraint system");
    bool picard = false;
    double L = 0.1, coupling = 1.0, tol = 1e-10;
    int max_iter = 40;
    std::string csource = "gauss";
    add_common(coeffs, o);
    coeffs->add_option("--source", csource, "source family");
    coeffs->add_flag("--picard", picard, "use the fixed-point loop");
    coeffs->add_option("--L", L, "coupling length scale");
    coeffs->add_option("--coupling", coupling, "nonlinear coupling strength");
    coeffs->add_option("--max-iter", max_iter, "picard iteration cap");
    coeffs->add_option("--tol", tol, "picard stopping tolerance");

    auto* dich = app.add_subcommand("dichotomy", "run the regularity dichotomy");
    int levels_n = 3;
    double threshold = 1.5;
    add_common(dich, o);
    dich->add_option("--levels", levels_n, "number of refinement levels");
    dich->add_option("--threshold", threshold, "bounded verdict threshold");

    auto* moments = app.add_subcommand("moments", "rigidity moment test");
    double eps = 0.5;
    int nmax = 4, nrstrip = 61;
    add_common(moments, o);
    moments->add_option("--eps", eps, "strip offset");
    moments->add_option("--nmax", nmax, "highest moment");
    moments->add_option("--nrstrip", nrstrip, "strip space nodes");

    auto* fscmd = app.add_subcommand("fs", "falkner-skan profile");
    double beta = 0.0, eta_max = 12.0;
    std::string branch = "attached";
    add_common(fscmd, o);
    fscmd->add_option("--beta", beta, "pressure gradient parameter");
    fscmd->add_option("--branch", branch, "attached|reversed");
    fscmd->add_option("--etamax", eta_max, "far-field cutoff");

    auto* report = app.add_subcommand("report", "consolidated diagnostics");
    add_common(report, o);
    report->add_option("--beta", beta, "falkner-skan beta");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) return cmd_solve(o, data, source, manufactured, heatmap);
        if (*adjoint) return cmd_adjoint(o, j, kmax);
        if (*basis) return cmd_basis(o, nbumps, width);
        if (*coeffs) return cmd_coeffs(o, csource, picard, L, coupling, max_iter, tol);
        if (*dich) return cmd_dichotomy(o, levels_n, threshold);
        if (*moments) return cmd_moments(o, eps, nmax, nrstrip);
        if (*fscmd) return cmd_fs(o, beta, branch, eta_max);
        if (*report) return cmd_report(o, beta);
    } catch (const ml::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ml::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
