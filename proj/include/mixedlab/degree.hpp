#pragma once

// Degree bookkeeping on formal combinations of dt^{-k} Phi^(j). Exact
// rational coefficients; the module only ever certifies *failure* of a
// proposed dependency (the counting argument is one-directional).

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "grid.hpp"

namespace mixedlab {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw config_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    bool is_zero() const { return num == 0; }
    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    std::string str() const {
        std::ostringstream os;
        os << num;
        if (den != 1) os << '/' << den;
        return os.str();
    }
};

// one formal term: coeff * dt^{-k} Phi^(j). Negative k means a genuine
// time derivative; check_dependency normalizes those away.
struct FormalTerm {
    int j = 0; // profile label, 0 or 1
    int k = 0; // antiderivative order
    Rational coeff{1, 1};
};

// d^(0) and d^(1) of a single term
inline int degree(const FormalTerm& t, int level) {
    if (t.j != 0 && t.j != 1) throw config_error("degree: j must be 0 or 1");
    if (level != 0 && level != 1) throw config_error("degree: level must be 0 or 1");
    if (level == 0) return t.j == 0 ? t.k : t.k - 1;
    return t.j == 0 ? t.k - 1 : t.k;
}

enum class CertStatus { contradiction, inconclusive };

struct Certificate {
    CertStatus status = CertStatus::inconclusive;
    int witness_level = -1;
    FormalTerm witness_term;
    std::vector<std::string> narrative;

    std::string render() const {
        std::ostringstream os;
        for (const auto& line : narrative) os << line << '\n';
        return os.str();
    }
};

namespace detail {

inline std::string term_str(const FormalTerm& t) {
    std::ostringstream os;
    os << t.coeff.str() << "*dt^{-" << t.k << "}Phi^(" << t.j << ")";
    return os.str();
}

// merge coefficients of identical (j,k), drop zeros
inline std::vector<FormalTerm> merge_terms(std::vector<FormalTerm> terms) {
    std::vector<FormalTerm> out;
    for (const auto& t : terms) {
        bool found = false;
        for (auto& o : out)
            if (o.j == t.j && o.k == t.k) {
                o.coeff = o.coeff + t.coeff;
                found = true;
                break;
            }
        if (!found) out.push_back(t);
    }
    std::vector<FormalTerm> nz;
    for (const auto& t : out)
        if (!t.coeff.is_zero()) nz.push_back(t);
    return nz;
}

} // namespace detail

// Decide whether lhs = sum(rhs) is impossible by the degree-counting
// argument. The identity is moved to one side, multiplied by dt^{-shift}
// so all antiderivative orders are >= 0, and each degree level is scanned
// for a term with a strictly maximal degree.
inline Certificate check_dependency(const FormalTerm& lhs, const std::vector<FormalTerm>& rhs) {
    if (rhs.empty()) throw config_error("check_dependency: rhs must be nonempty");
    std::vector<FormalTerm> all;
    all.push_back(lhs);
    for (auto t : rhs) {
        t.coeff = -t.coeff;
        all.push_back(t);
    }
    int kmin = all[0].k;
    for (const auto& t : all) kmin = std::min(kmin, t.k);
    int shift = kmin < 0 ? -kmin : 0;
    for (auto& t : all) t.k += shift;

    Certificate cert;
    cert.narrative.push_back("normalized identity (antiderivative form), shift dt^{-" +
                             std::to_string(shift) + "}:");
    auto terms = detail::merge_terms(all);
    if (terms.empty()) {
        cert.narrative.push_back("all terms cancel; counting argument says nothing");
        return cert;
    }
    for (const auto& t : terms) cert.narrative.push_back("  " + detail::term_str(t));

    for (int level = 0; level <= 1; ++level) {
        int best = degree(terms[0], level);
        int count = 1;
        std::size_t arg = 0;
        std::ostringstream line;
        line << "d^(" << level << ") degrees:";
        line << ' ' << best;
        for (std::size_t i = 1; i < terms.size(); ++i) {
            int d = degree(terms[i], level);
            line << ' ' << d;
            if (d > best) { best = d; count = 1; arg = i; }
            else if (d == best) ++count;
        }
        cert.narrative.push_back(line.str());
        if (count == 1) {
            cert.status = CertStatus::contradiction;
            cert.witness_level = level;
            cert.witness_term = terms[arg];
            cert.narrative.push_back("unique maximum " + std::to_string(best) + " at level " +
                                     std::to_string(level) + " from " +
                                     detail::term_str(terms[arg]) +
                                     ": unmatched polynomial power, contradiction");
            return cert;
        }
        cert.narrative.push_back("tie at level " + std::to_string(level));
    }
    cert.narrative.push_back("no level separates the terms; inconclusive");
    return cert;
}

// Exhaustive leading-term check that every nontrivial combination of
// {dt^k Phi^(j) : j in {0,1}, 0 <= k <= k_star} carries a contradiction
// certificate. Degrees depend only on which (j,k) appear, so subsets
// suffice.
inline bool predict_independence(int k_star) {
    if (k_star < 0) throw config_error("predict_independence: k_star must be >= 0");
    if (k_star == 0) return true; // vacuous
    const int nslots = 2 * (k_star + 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << nslots); ++mask) {
        std::vector<FormalTerm> terms;
        for (int s = 0; s < nslots; ++s) {
            if (!(mask >> s & 1)) continue;
            int j = s % 2;
            int kderiv = s / 2; // derivative order in the combination
            terms.push_back({j, -kderiv, Rational{1, 1}});
        }
        // "combination = 0" as lhs = first term, rhs = negated rest;
        // single-term subsets claim Phi^(j) itself vanishes
        FormalTerm lhs = terms[0];
        std::vector<FormalTerm> rhs;
        for (std::size_t i = 1; i < terms.size(); ++i) {
            FormalTerm t = terms[i];
            t.coeff = -t.coeff;
            rhs.push_back(t);
        }
        if (rhs.empty()) rhs.push_back({lhs.j == 0 ? 1 : 0, lhs.k - 100, Rational{0, 1}});
        Certificate c = rhs.size() == 0 ? Certificate{} : check_dependency(lhs, rhs);
        if (c.status != CertStatus::contradiction) return false;
    }
    return true;
}

} // namespace mixedlab
