#include <catch2/catch_amalgamated.hpp>

#include "mixedlab/degree.hpp"

using namespace mixedlab;

TEST_CASE("rational arithmetic normalizes") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 2) - Rational(1, 2)).is_zero());
    CHECK(Rational(3, 7).str() == "3/7");
    CHECK(Rational(-4).str() == "-4");
    CHECK_THROWS_AS(Rational(1, 0), config_error);
}

TEST_CASE("degree tables") {
    // d0: Phi^0 -> k, Phi^1 -> k-1; d1 mirrored
    CHECK(degree({0, 2, {1, 1}}, 0) == 2);
    CHECK(degree({1, 2, {1, 1}}, 0) == 1);
    CHECK(degree({0, 2, {1, 1}}, 1) == 1);
    CHECK(degree({1, 2, {1, 1}}, 1) == 2);
    CHECK_THROWS_AS(degree({2, 0, {1, 1}}, 0), config_error);
    CHECK_THROWS_AS(degree({0, 0, {1, 1}}, 2), config_error);
}

TEST_CASE("first example: dt^2 Phi^1 = dt Phi^1 + Phi^0, contradiction at level 0") {
    // antiderivative form Phi^1 = dt^{-1} Phi^1 + dt^{-2} Phi^0
    auto cert = check_dependency({1, 0, {1, 1}}, {{1, 1, {1, 1}}, {0, 2, {1, 1}}});
    REQUIRE(cert.status == CertStatus::contradiction);
    CHECK(cert.witness_level == 0);
    CHECK(cert.witness_term.j == 0);
    CHECK(cert.witness_term.k == 2); // the unique quadratic dt^{-2} Phi^0
    CHECK(cert.render().find("contradiction") != std::string::npos);

    // same identity stated with derivatives instead of antiderivatives
    auto cert2 = check_dependency({1, -2, {1, 1}}, {{1, -1, {1, 1}}, {0, 0, {1, 1}}});
    CHECK(cert2.status == CertStatus::contradiction);
    CHECK(cert2.witness_level == 0);
    CHECK(cert2.witness_term.j == 0);
    CHECK(cert2.witness_term.k == 2);
}

TEST_CASE("second example: dt^2 Phi^1 = dt Phi^0 + Phi^1, level 0 ties, level 1 decides") {
    auto cert = check_dependency({1, 0, {1, 1}}, {{0, 1, {1, 1}}, {1, 2, {1, 1}}});
    REQUIRE(cert.status == CertStatus::contradiction);
    CHECK(cert.witness_level == 1);
    CHECK(cert.witness_term.j == 1);
    CHECK(cert.witness_term.k == 2); // the unique quadratic on the derivative trace
    CHECK(cert.render().find("tie at level 0") != std::string::npos);
}

TEST_CASE("certificates are invariant under rescaling") {
    for (auto c : {Rational{3, 2}, Rational{-7, 5}, Rational{11, 1}}) {
        auto cert = check_dependency({1, 0, c}, {{0, 1, c}, {1, 2, c}});
        CHECK(cert.status == CertStatus::contradiction);
        CHECK(cert.witness_level == 1);
    }
}

TEST_CASE("cancelling identities are inconclusive, not contradictions") {
    auto cert = check_dependency({0, 1, {1, 1}}, {{0, 1, {1, 1}}});
    CHECK(cert.status == CertStatus::inconclusive);
    CHECK_THROWS_AS(check_dependency({0, 0, {1, 1}}, {}), config_error);
}

TEST_CASE("degree collision rule holds for k <= 10") {
    // d0 collision between the two profile families forces k0 = k1 - 1,
    // in which case d1 must separate them
    for (int k0 = 0; k0 <= 10; ++k0)
        for (int k1 = 0; k1 <= 10; ++k1) {
            FormalTerm a{0, k0, {1, 1}}, b{1, k1, {1, 1}};
            if (degree(a, 0) == degree(b, 0)) {
                CHECK(k0 == k1 - 1);
                CHECK(degree(a, 1) != degree(b, 1));
            }
        }
}

TEST_CASE("exhaustive independence prediction") {
    CHECK(predict_independence(0)); // vacuous
    for (int ks = 1; ks <= 5; ++ks) CHECK(predict_independence(ks));
    CHECK_THROWS_AS(predict_independence(-1), config_error);
}
