#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "prada/channel_model.hpp"
#include "prada/errors.hpp"
#include "prada/pipeline.hpp"
#include "prada/snr.hpp"

using namespace prada;

namespace {

const std::vector<double> kBoundariesDb{2.0499, 4.0232, 5.6514, 7.0454, 8.2726, 9.3777};
const double kAvgSnr = db_to_linear(2.0);

std::vector<TransitionObservation> reference_observations() {
    return load_transition_observations(std::string(PRADA_CONFIG_DIR) +
                                        "/reference_transitions_4hz.csv");
}

}  // namespace

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(SnrPartition::from_interior_db({3.0, 2.0}), ValidationError);
    SnrPartition p;
    p.boundaries = {0.0, 1.0, 2.0};  // missing the infinity sentinel
    CHECK_THROWS_AS(p.validate(), ValidationError);
    const SnrPartition ok = SnrPartition::from_interior_db(kBoundariesDb);
    CHECK(ok.num_states() == 7);
    CHECK(ok.lower(0) == 0.0);
    CHECK(std::isinf(ok.upper(6)));
}

TEST_CASE("stationary probabilities match direct quadrature of the SNR density") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const auto pi = stationary_probabilities(p, kAvgSnr);
    double total = 0.0;
    for (int i = 0; i < p.num_states(); ++i) {
        // midpoint-rule quadrature of the exponential density
        const double lo = p.lower(i);
        const double hi = std::isfinite(p.upper(i)) ? p.upper(i) : lo + 60.0 * kAvgSnr;
        const int steps = 200000;
        const double h = (hi - lo) / steps;
        double mass = 0.0;
        for (int s = 0; s < steps; ++s) {
            const double g = lo + (s + 0.5) * h;
            mass += std::exp(-g / kAvgSnr) / kAvgSnr * h;
        }
        CHECK(pi[i] == doctest::Approx(mass).epsilon(1e-6));
        total += pi[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("level crossing rate edge cases") {
    CHECK(level_crossing_rate(0.0, kAvgSnr, 4.0) == 0.0);
    CHECK(level_crossing_rate(std::numeric_limits<double>::infinity(), kAvgSnr, 4.0) == 0.0);
    CHECK(level_crossing_rate(1.0, kAvgSnr, 0.0) == 0.0);
    CHECK_THROWS_AS(level_crossing_rate(-1.0, kAvgSnr, 4.0), ValidationError);
    CHECK_THROWS_AS(level_crossing_rate(1.0, -1.0, 4.0), ValidationError);
    CHECK_THROWS_AS(level_crossing_rate(1.0, kAvgSnr, -4.0), ValidationError);
    // peak formula value at one hand-checked point
    const double g = kAvgSnr;
    CHECK(level_crossing_rate(g, kAvgSnr, 3.0) ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi) * 3.0 * std::exp(-1.0)));
}

TEST_CASE("basic transition construction") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const FsmcChannel ch = build_transition_matrix(p, kAvgSnr, 4.0, 0.0018622);
    ch.validate();
    const auto pi = stationary_probabilities(p, kAvgSnr);
    for (int i = 0; i < 7; ++i) CHECK(ch.stationary[i] == doctest::Approx(pi[i]).epsilon(1e-12));
    // one off-diagonal against the defining formula
    const double expect = level_crossing_rate(p.upper(2), kAvgSnr, 4.0) * 0.0018622 / pi[2];
    CHECK(ch.transition(2, 3) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero Doppler freezes the chain") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const FsmcChannel ch = build_transition_matrix(p, kAvgSnr, 0.0, 0.0018622,
                                                   OutageMode::first_state);
    for (int i = 0; i < 7; ++i) CHECK(ch.transition(i, i) == 1.0);
}

TEST_CASE("overlong frame period is rejected with the offending row named") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    try {
        build_transition_matrix(p, kAvgSnr, 200.0, 0.1);
        FAIL("expected ModelValidityError");
    } catch (const ModelValidityError& e) {
        const std::string what = e.what();
        CHECK(what.find("state") != std::string::npos);
        CHECK(what.find("frame period") != std::string::npos);
    }
}

TEST_CASE("calibrated frame period reproduces the reference transition table") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const auto obs = reference_observations();
    REQUIRE(obs.size() == 12);
    const double tp = calibrate_frame_period(p, kAvgSnr, 4.0, obs, OutageMode::first_state);
    CHECK(tp == doctest::Approx(1.86e-3).epsilon(0.01));

    const FsmcChannel ch = build_transition_matrix(p, kAvgSnr, 4.0, tp, OutageMode::first_state);
    for (const TransitionObservation& o : obs) {
        const double built = ch.transition(o.state, o.state + o.delta);
        CHECK(std::abs(built - o.probability) < 5e-4);
    }

    // Doppler-normalized coefficients are frequency-independent
    const FsmcChannel ch9 = build_transition_matrix(p, kAvgSnr, 9.0, tp, OutageMode::first_state);
    CHECK(ch9.transition(0, 1) / 9.0 == doctest::Approx(ch.transition(0, 1) / 4.0).epsilon(1e-12));
    CHECK(std::abs(ch.transition(0, 1) / 4.0 - 0.00268) < 2e-4);
    CHECK(std::abs(ch.transition(1, 0) / 4.0 - 0.00386) < 2e-4);
}

TEST_CASE("outage-mode stationary is the fixed point of the built chain") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const FsmcChannel ch = build_transition_matrix(p, kAvgSnr, 4.0, 0.0018622,
                                                   OutageMode::first_state);
    const auto next = ch.transition.left_apply(ch.stationary);
    for (int i = 0; i < 7; ++i) CHECK(next[i] == doctest::Approx(ch.stationary[i]).epsilon(1e-10));
}

TEST_CASE("transmission submodel censors the outage state") {
    const SnrPartition p = SnrPartition::from_interior_db(kBoundariesDb);
    const FsmcChannel full = build_transition_matrix(p, kAvgSnr, 4.0, 0.0018622,
                                                     OutageMode::first_state);
    const FsmcChannel sub = transmission_submodel(full);
    CHECK(sub.num_states() == 6);
    CHECK(sub.transition(0, 0) ==
          doctest::Approx(full.transition(1, 1) + full.transition(1, 0)).epsilon(1e-14));
    for (int i = 1; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            CHECK(sub.transition(i, j) == full.transition(i + 1, j + 1));
        }
    }
    // stationary: the conditional occupancy law, and a fixed point
    const auto pi = stationary_probabilities(p, kAvgSnr);
    const double transmitting = 1.0 - pi[0];
    for (int i = 0; i < 6; ++i) {
        CHECK(sub.stationary[i] == doctest::Approx(pi[i + 1] / transmitting).epsilon(1e-12));
    }
    const auto next = sub.transition.left_apply(sub.stationary);
    for (int i = 0; i < 6; ++i) {
        CHECK(next[i] == doctest::Approx(sub.stationary[i]).epsilon(1e-10));
    }
}

TEST_CASE("equal-duration solver equalizes the state durations") {
    for (int n : {2, 4, 7}) {
        const SnrPartition p = partition_equal_duration(n, kAvgSnr, 4.0);
        REQUIRE(p.num_states() == n);
        std::vector<double> tau;
        for (int i = 0; i < n; ++i) {
            const double mass = std::exp(-p.lower(i) / kAvgSnr) -
                                (std::isfinite(p.upper(i)) ? std::exp(-p.upper(i) / kAvgSnr) : 0.0);
            const double rate = level_crossing_rate(p.lower(i), kAvgSnr, 1.0) +
                                level_crossing_rate(p.upper(i), kAvgSnr, 1.0);
            tau.push_back(mass / rate);
        }
        for (int i = 1; i < n; ++i) CHECK(tau[i] == doctest::Approx(tau[0]).epsilon(1e-6));
    }
}

TEST_CASE("equal-duration boundaries are Doppler invariant") {
    const SnrPartition a = partition_equal_duration(5, kAvgSnr, 1.0);
    const SnrPartition b = partition_equal_duration(5, kAvgSnr, 7.0);
    for (int i = 1; i < 5; ++i) {
        CHECK(a.boundaries[i] == doctest::Approx(b.boundaries[i]).epsilon(1e-9));
    }
}

TEST_CASE("equal-duration two-state case matches an independent bisection") {
    // n = 2: the single interior boundary G satisfies
    // (1 - exp(-G/g0)) / N(G) = exp(-G/g0) / N(G), i.e. exp(-G/g0) = 1/2.
    const SnrPartition p = partition_equal_duration(2, kAvgSnr, 4.0);
    const double expect = kAvgSnr * std::log(2.0);
    CHECK(p.boundaries[1] == doctest::Approx(expect).epsilon(1e-6));
}
