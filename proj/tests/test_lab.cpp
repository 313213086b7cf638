#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedlab/lab.hpp"

using namespace mixedlab;

namespace {

struct Setup {
    SpaceTimeGrid g;
    DualProfile phi0, phi1;
    BasisFamily fam;
    HatData base;
};

Setup make_setup(int k_star, int nt = 33, int nr = 65) {
    Setup s{make_grid(nt, nr, 8.0), {}, {}, {}, {}};
    s.phi0 = build_dual(s.g, 0, k_star);
    s.phi1 = build_dual(s.g, 1, k_star);
    s.fam = build_basis(k_star, s.phi0, s.phi1, 4 * k_star);
    s.base = HatData(s.g);
    for (int m = 0; m < s.base.n(); ++m) {
        double rho = m * s.g.h_rho;
        s.base.left[m] = 0.7 * bump_profile(rho, 2.0, 0.8);
        s.base.right[m] = 0.5 * bump_profile(rho, 2.5, 0.9);
    }
    return s;
}

Field gauss_source(const SpaceTimeGrid& g) {
    return Field::sample(g, [](double, double rho) { return std::exp(-rho * rho); });
}

} // namespace

TEST_CASE("zero source and zero base give the zero coefficient vector") {
    auto s = make_setup(1);
    Field G(s.g);
    HatData zero(s.g);
    auto a = solve_coefficients_direct(zero, G, s.fam, s.phi0, s.phi1, 1);
    CHECK(std::abs(a.c0[0]) < 1e-12);
    CHECK(std::abs(a.c1[0]) < 1e-12);
    CHECK(a.qL[0] == 0.0);
    CHECK(a.qR[0] == 0.0);
    CHECK(a.norm() < 1e-12);
}

TEST_CASE("base data shifts the coefficients by its functional values") {
    auto s = make_setup(1);
    Field G = gauss_source(s.g);
    HatData zero(s.g);
    auto a0 = solve_coefficients_direct(zero, G, s.fam, s.phi0, s.phi1, 1);
    auto ab = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, 1);
    CHECK(ab.c0[0] == Catch::Approx(a0.c0[0] - eval_l(0, 1, s.base, s.phi0, s.phi1)).margin(1e-12));
    CHECK(ab.c1[0] == Catch::Approx(a0.c1[0] - eval_l(1, 1, s.base, s.phi0, s.phi1)).margin(1e-12));
    CHECK(ab.qL[0] == a0.qL[0]); // corrector only sees the source
}

TEST_CASE("direct solve meets the constraints") {
    for (int ks : {1, 2}) {
        auto s = make_setup(ks, ks == 1 ? 33 : 65, ks == 1 ? 65 : 129);
        Field G = gauss_source(s.g);
        auto a = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, ks);
        auto res = constraint_residuals(a, s.base, G, s.fam, s.phi0, s.phi1);
        REQUIRE(res.size() == static_cast<std::size_t>(2 * ks));
        for (double r : res) CHECK(r < 1e-8 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("scale propagates linearly into corrector and constraints") {
    auto s = make_setup(1);
    Field G = gauss_source(s.g);
    auto a1 = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, 1, 1.0);
    auto a2 = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, 1, 2.0);
    CHECK(a2.qL[0] == Catch::Approx(2.0 * a1.qL[0]).margin(1e-12));
    auto res = constraint_residuals(a2, s.base, G, s.fam, s.phi0, s.phi1, 2.0);
    for (double r : res) CHECK(r < 1e-8 * std::max(1.0, a2.norm()));
}

TEST_CASE("assembled data evaluates to the constraint right-hand sides") {
    auto s = make_setup(1);
    Field G = gauss_source(s.g);
    auto a = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, 1);
    auto data = assemble_data(s.base, a, s.fam, s.g);
    // Xi = hat + Q: subtracting the corrector must recover the hat part,
    // whose functional values are the biorthogonal combination
    auto ql = corrector_from(a).sample(s.g, false);
    HatData hat(s.g);
    for (int m = 0; m < hat.n(); ++m) hat.left[m] = data.left[m] - ql[m];
    auto qr = corrector_from(a).sample(s.g, true);
    for (int m = 0; m < hat.n(); ++m) hat.right[m] = data.right[m] - qr[m];
    double l0 = eval_l(0, 1, hat, s.phi0, s.phi1);
    auto lp = detail::build_level_parts(G, corrector_from(a), 1, 1.0);
    CHECK(l0 == Catch::Approx(constraint_rhs(0, 1, G, lp, s.phi0, 1.0)).margin(1e-8));
}

TEST_CASE("picard with a solution-independent map reproduces the direct solve") {
    auto s = make_setup(1);
    Field G = gauss_source(s.g);
    auto direct = solve_coefficients_direct(s.base, G, s.fam, s.phi0, s.phi1, 1);
    PicardHistory hist;
    auto fixed = solve_coefficients_picard(
        s.base, [&](const Field&) { return G; }, s.fam, s.phi0, s.phi1, 1, s.g, 1.0, 10, 1e-12,
        &hist);
    CHECK(hist.converged);
    CHECK(hist.iterations <= 3);
    CHECK(fixed.distance(direct) < 1e-10);
}

namespace {

// energy-coupled source map: G = G0 * (1 + c * intint |drho Omega|^2)
std::function<Field(const Field&)> coupled_map(const SpaceTimeGrid& g, const Field& G0,
                                               double coupling) {
    return [&g, G0, coupling](const Field& omega) {
        double e = 0.0;
        for (int i = 0; i < g.n_t; ++i)
            for (int j = 1; j + 1 < g.n_rho; ++j) {
                double dr = (omega.at(i, j + 1) - omega.at(i, j - 1)) / (2.0 * g.h_rho);
                e += dr * dr;
            }
        e *= g.h_t * g.h_rho;
        Field out = G0;
        for (auto& v : out.values) v *= 1.0 + coupling * e;
        return out;
    };
}

double contraction_ratio(const Setup& s, const Field& G0, double L, double coupling) {
    PicardHistory hist;
    double scale = std::pow(L, 2.0 / 3.0);
    solve_coefficients_picard(s.base, coupled_map(s.g, G0, coupling), s.fam, s.phi0, s.phi1, 1,
                              s.g, scale, 60, 1e-12, &hist);
    double worst = 0.0;
    for (double r : hist.ratios) worst = std::max(worst, r);
    return worst;
}

} // namespace

TEST_CASE("picard contraction sharpens as L decreases and diverges at O(1) coupling") {
    auto s = make_setup(1);
    Field G0 = gauss_source(s.g);
    double r_small = contraction_ratio(s, G0, 0.01, 1.0);
    double r_large = contraction_ratio(s, G0, 0.1, 1.0);
    INFO("ratio(L=0.01)=" << r_small << " ratio(L=0.1)=" << r_large);
    CHECK(r_small < r_large);
    CHECK(r_large < 1.0);
    CHECK_THROWS_AS(contraction_ratio(s, G0, 1.0, 2000.0), numeric_error);
}

TEST_CASE("picard guards") {
    auto s = make_setup(1);
    Field G = gauss_source(s.g);
    auto id = [&](const Field&) { return G; };
    CHECK_THROWS_AS(solve_coefficients_picard(s.base, id, s.fam, s.phi0, s.phi1, 1, s.g, 1.0, 0,
                                              1e-12, nullptr),
                    config_error);
    CHECK_THROWS_AS(solve_coefficients_picard(s.base, id, s.fam, s.phi0, s.phi1, 1, s.g, 1.0, 10,
                                              1e-12, nullptr, 1.5),
                    config_error);
    // unreachable tolerance inside one iteration
    CHECK_THROWS_AS(solve_coefficients_picard(s.base, id, s.fam, s.phi0, s.phi1, 1, s.g, 1.0, 1,
                                              0.0, nullptr),
                    numeric_error);
}

TEST_CASE("time-derivative seminorms on polynomial fields") {
    auto g = make_grid(17, 33, 8.0);
    auto lin = Field::sample(g, [](double t, double) { return 2.0 * t; });
    CHECK(dt_k_h1_norm(lin, 1) == Catch::Approx(2.0 * std::sqrt(g.h_t * g.h_rho * (g.n_t - 1) *
                                                                g.n_rho))
                                      .epsilon(1e-12));
    CHECK(dt_k_h1_norm(lin, 2) == Catch::Approx(0.0).margin(1e-10));
    CHECK_THROWS_AS(dt_k_h1_norm(lin, 20), config_error);
}

TEST_CASE("regularity report on zero data is bounded with zero norms") {
    std::vector<std::pair<int, int>> levels{{17, 33}, {33, 65}, {65, 129}};
    auto zero = [](double) { return 0.0; };
    auto zsrc = [](double, double) { return 0.0; };
    auto rep = regularity_report(zero, zero, zsrc, levels, 8.0, 1);
    CHECK(rep.verdicts[0] == "bounded");
    for (double n : rep.norms[0]) CHECK(n < 1e-12);
    CHECK_THROWS_AS(regularity_report(zero, zero, zsrc, {{17, 33}, {33, 65}}, 8.0, 1),
                    config_error);
    CHECK_THROWS_AS(regularity_report(zero, zero, zsrc, levels, 8.0, 0), config_error);
}

TEST_CASE("regularity csv layout") {
    std::vector<std::pair<int, int>> levels{{17, 33}, {33, 65}, {65, 129}};
    auto rep = regularity_report([](double r) { return std::exp(-r * r); },
                                 [](double r) { return std::exp(-r * r); },
                                 [](double, double) { return 0.0; }, levels, 8.0, 1);
    std::ostringstream os;
    write_regularity_csv(os, rep);
    auto text = os.str();
    CHECK(text.rfind("level,k,norm,ratio,verdict\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3);
}

TEST_CASE("rigidity: zero data forces the zero strip solution") {
    std::vector<double> g0(33, 0.0);
    auto res = rigidity_moments(0.5, g0, 4, 61, 8.0);
    CHECK(res.f_max < 1e-10);
    for (double m : res.moments) CHECK(std::abs(m) < 1e-10);
}

TEST_CASE("rigidity: incompatible trace data cannot be matched, moments shrink with h") {
    auto run = [](int nt, int nr) {
        std::vector<double> gs(nt);
        for (int i = 0; i < nt; ++i) {
            double t = static_cast<double>(i) / (nt - 1);
            gs[i] = t * (1.0 - t);
        }
        return rigidity_moments(0.5, gs, 4, nr, 8.0);
    };
    auto coarse = run(33, 61);
    auto fine = run(65, 121);
    double mc = 0.0, mf = 0.0;
    for (double m : coarse.moments) mc = std::max(mc, std::abs(m));
    for (double m : fine.moments) mf = std::max(mf, std::abs(m));
    INFO("coarse " << mc << " fine " << mf);
    CHECK(mc < 10.0 * (1.0 / 32.0));
    CHECK(mf < 10.0 * (1.0 / 64.0));
    CHECK(mc / mf > 1.7); // first-order decay of the moment defect
    CHECK(coarse.f_max < 10.0 * (7.5 / 60.0));
}

TEST_CASE("rigidity guards") {
    std::vector<double> gs(33, 0.0);
    CHECK_THROWS_AS(rigidity_moments(-0.5, gs, 4, 61, 8.0), config_error);
    CHECK_THROWS_AS(rigidity_moments(9.0, gs, 4, 61, 8.0), config_error);
    CHECK_THROWS_AS(rigidity_moments(0.5, gs, -1, 61, 8.0), config_error);
    CHECK_THROWS_AS(rigidity_moments(0.5, {0.0, 0.0}, 4, 61, 8.0), config_error);
    CHECK_THROWS_AS(rigidity_moments(0.5, gs, 4, 2, 8.0), config_error);
}
