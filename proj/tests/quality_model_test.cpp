#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "turkpf/quality_model.hpp"

using namespace turkpf;

namespace {

const ModelParams params{};

double round2(double v) {
    return std::round(v * 100.0) / 100.0;
}

} // namespace

TEST_CASE("model params validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p = ModelParams{};
    p.difficulty_exponent = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.utility_max = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.improvement_rate = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.clamp_epsilon = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.prior_beta = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.initial_gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("difficulty basics") {
    for (double q : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(difficulty(q, q, params) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(difficulty(0.0, 1.0, params) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(difficulty(0.5, 0.75, params) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(difficulty(-0.1, 0.5, params), std::invalid_argument);
    CHECK_THROWS_AS(difficulty(0.5, 1.1, params), std::invalid_argument);
}

TEST_CASE("difficulty symmetry and range") {
    for (double q = 0.0; q <= 1.0; q += 0.13) {
        for (double qp = 0.0; qp <= 1.0; qp += 0.17) {
            const double d = difficulty(q, qp, params);
            CHECK(d == difficulty(qp, q, params));
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
            if (q != qp) {
                CHECK(d < 1.0);
            }
        }
    }
}

TEST_CASE("ballot accuracy examples") {
    for (double g : {0.3, 1.0, 2.0}) {
        CHECK(ballot_accuracy(1.0, g) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(ballot_accuracy(0.0, g) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(ballot_accuracy(0.5, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(ballot_accuracy(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ballot_accuracy(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ballot_accuracy(1.5, 1.0), std::invalid_argument);
}

TEST_CASE("ballot accuracy monotone in difficulty and gamma") {
    double prev = 2.0;
    for (double d = 0.05; d < 1.0; d += 0.05) {
        const double a = ballot_accuracy(d, 1.3);
        CHECK(a >= 0.5);
        CHECK(a <= 1.0);
        CHECK(a < prev);
        prev = a;
    }
    prev = 2.0;
    for (double g = 0.25; g <= 4.0; g *= 2.0) {
        const double a = ballot_accuracy(0.6, g);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("prob_yes examples") {
    CHECK(prob_yes(0.5, 0.75, 1.0, params) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(prob_yes(0.75, 0.5, 1.0, params) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(prob_yes(0.2, 0.8, 1.0, params) ==
          doctest::Approx(0.5 * (1.0 + std::sqrt(0.6))).epsilon(1e-15));
    CHECK(prob_yes(0.2, 0.8, 1.0, params) == doctest::Approx(0.88730).epsilon(1e-5));
    for (double q : {0.0, 0.5, 1.0}) {
        CHECK(prob_yes(q, q, 2.0, params) == 0.5);
    }
}

TEST_CASE("prob_yes complementarity is exact") {
    for (double q = 0.0; q <= 1.0; q += 0.09) {
        for (double qp = 0.0; qp <= 1.0; qp += 0.11) {
            for (double g : {0.25, 1.0, 3.0}) {
                const double yes = prob_vote(true, q, qp, g, params);
                const double no = prob_vote(false, q, qp, g, params);
                CHECK(yes + no == 1.0); // exact complement by construction
            }
        }
    }
}

TEST_CASE("prob_yes monotone in both arguments and continuous at the tie") {
    const double g = 1.0;
    double prev = -1.0;
    for (double qp = 0.0; qp <= 1.0; qp += 0.02) {
        const double p = prob_yes(0.4, qp, g, params);
        CHECK(p >= prev);
        prev = p;
    }
    prev = 2.0;
    for (double q = 0.0; q <= 1.0; q += 0.02) {
        const double p = prob_yes(q, 0.6, g, params);
        CHECK(p <= prev);
        prev = p;
    }
    CHECK(prob_yes(0.5, 0.5 + 1e-12, g, params) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(prob_yes(0.5 + 1e-12, 0.5, g, params) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("improvement mean examples") {
    CHECK(improvement_mean(0.5, 1.0, params) == doctest::Approx(0.6).epsilon(1e-12));
    for (double g : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        CHECK(improvement_mean(1.0, g, params) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(improvement_mean(0.5, 2.0, params) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(improvement_mean(0.5, 3.0, params) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(improvement_mean(0.0, 0.0, params) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS(improvement_mean(0.5, -0.1, params), std::invalid_argument);
}

TEST_CASE("improvement mean dominates q until workers are too noisy") {
    for (double q = 0.0; q <= 1.0; q += 0.05) {
        for (double g = 0.0; g <= 4.0; g += 0.25) {
            const double mu = improvement_mean(q, g, params);
            if (g <= 2.0) {
                CHECK(mu >= q);
                const bool boundary = q == 1.0 || g >= 2.0;
                if (boundary) {
                    CHECK(mu == doctest::Approx(q).epsilon(1e-15));
                } else {
                    CHECK(mu > q);
                }
            } else {
                CHECK(mu == doctest::Approx(q).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("utility endpoints and shape") {
    CHECK(utility(0.0, params) == 0.0);
    CHECK(utility(1.0, params) == doctest::Approx(1000.0).epsilon(1e-12));
    double prev = -1.0;
    for (double q = 0.0; q <= 1.0; q += 0.01) {
        const double u = utility(q, params);
        CHECK(u > prev);
        prev = u;
    }
    CHECK_THROWS_AS(utility(1.2, params), std::invalid_argument);
    CHECK_THROWS_AS(utility(-0.2, params), std::invalid_argument);
}

TEST_CASE("utility inversion roundtrip") {
    CHECK(inverse_utility(0.0, params) == 0.0);
    CHECK(inverse_utility(params.utility_max, params) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (double q = 0.0; q <= 1.0; q += 0.01) {
        CHECK(inverse_utility(utility(q, params), params) ==
              doctest::Approx(q).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inverse_utility(-1.0, params), std::invalid_argument);
    CHECK_THROWS_AS(inverse_utility(1001.0, params), std::invalid_argument);
}

TEST_CASE("utility anchors reproduce reference quality readings") {
    // Reference (utility, quality) pairs from the trace study the utility
    // curve was anchored to; qualities are rounded to two decimals there.
    CHECK(inverse_utility(460.82, params) == doctest::Approx(0.5832).epsilon(1e-4));
    CHECK(round2(inverse_utility(460.82, params)) == doctest::Approx(0.58));
    CHECK(inverse_utility(409.02, params) == doctest::Approx(0.5323).epsilon(1e-4));
    CHECK(round2(inverse_utility(409.02, params)) == doctest::Approx(0.53));
    CHECK(inverse_utility(288.97, params) == doctest::Approx(0.4032).epsilon(1e-4));
    CHECK(round2(inverse_utility(288.97, params)) == doctest::Approx(0.40));
}
