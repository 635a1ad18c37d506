#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "prada/errors.hpp"
#include "prada/link_model.hpp"
#include "prada/snr.hpp"

using namespace prada;

namespace {

SettingTable paper_settings() {
    SettingTable t;
    t.settings = {{"16QAM-2/3", 2048, 5461},
                  {"16QAM-1/2", 2048, 4096},
                  {"QPSK-2/3", 2048, 2731},
                  {"QPSK-1/2", 2048, 2048},
                  {"BPSK-1/2", 2048, 1024}};
    return t;
}

FerTable load_reference_table() {
    std::ifstream in(std::string(PRADA_CONFIG_DIR) + "/fer_table.csv");
    REQUIRE(in.good());
    return load_fer_table(in, paper_settings(), 7);
}

}  // namespace

TEST_CASE("setting table validation") {
    paper_settings().validate();
    SettingTable bad = paper_settings();
    bad.settings[1].data_bits_per_frame = 6000;  // not descending
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    SettingTable empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("reference FER table loads with the expected entries") {
    const FerTable fer = load_reference_table();
    CHECK(fer.num_settings == 5);
    CHECK(fer.num_states == 7);
    CHECK(fer.at(0, 0) == 1.0);
    CHECK(fer.at(0, 3) == doctest::Approx(0.9193));
    CHECK(fer.at(2, 2) == doctest::Approx(0.0900));
    CHECK(fer.at(4, 6) == 0.0);
}

TEST_CASE("ingestion errors carry row and column coordinates") {
    const SettingTable settings = paper_settings();

    SUBCASE("wrong header") {
        std::istringstream in("s_1,s_2,s_3,s_4,wrong\n0,0,0,0,0\n");
        CHECK_THROWS_WITH_AS(load_fer_table(in, settings, 1),
                             doctest::Contains("column 5"), IngestionError);
    }
    SUBCASE("wrong state count") {
        std::istringstream in("s_1,s_2,s_3,s_4,s_5\n0,0,0,0,0\n");
        CHECK_THROWS_WITH_AS(load_fer_table(in, settings, 2),
                             doctest::Contains("state rows"), IngestionError);
    }
    SUBCASE("unparsable cell") {
        std::istringstream in("s_1,s_2,s_3,s_4,s_5\n0,0,oops,0,0\n");
        CHECK_THROWS_WITH_AS(load_fer_table(in, settings, 1),
                             doctest::Contains("row 2, column 3"), IngestionError);
    }
    SUBCASE("out of range value") {
        std::istringstream in("s_1,s_2,s_3,s_4,s_5\n0,0,0,1.5,0\n");
        CHECK_THROWS_WITH_AS(load_fer_table(in, settings, 1),
                             doctest::Contains("column 4"), IngestionError);
    }
    SUBCASE("monotonicity violation in a state column") {
        std::istringstream in("s_1,s_2,s_3,s_4,s_5\n0.5,0.4,0.3,0.2,0.1\n0.6,0.5,0.4,0.3,0.2\n");
        CHECK_THROWS_AS(load_fer_table(in, settings, 2), IngestionError);
        // the same table loads with the hard check relaxed
        std::istringstream again(
            "s_1,s_2,s_3,s_4,s_5\n0.5,0.4,0.3,0.2,0.1\n0.6,0.5,0.4,0.3,0.2\n");
        CHECK_NOTHROW(load_fer_table(again, settings, 2, false));
    }
}

TEST_CASE("dropping outage states keeps the remaining columns") {
    const FerTable fer = load_reference_table();
    const FerTable sub = fer.drop_lowest_states(1);
    CHECK(sub.num_states == 6);
    for (int r = 0; r < 5; ++r) {
        for (int i = 0; i < 6; ++i) CHECK(sub.at(r, i) == fer.at(r, i + 1));
    }
    CHECK_THROWS_AS(fer.drop_lowest_states(7), ValidationError);
}

TEST_CASE("state FER from a constant curve is that constant") {
    const SnrPartition p = SnrPartition::from_interior_db({2.0499, 4.0232});
    const double g0 = db_to_linear(2.0);
    for (int i = 0; i < 3; ++i) {
        const double e = state_fer_from_curve([](double) { return 0.37; }, i, p, g0);
        CHECK(e == doctest::Approx(0.37).epsilon(1e-8));
    }
}

TEST_CASE("state FER from a step curve matches the closed form") {
    const SnrPartition p = SnrPartition::from_interior_db({2.0499, 4.0232});
    const double g0 = db_to_linear(2.0);
    const double cut = 0.5 * (p.lower(1) + p.upper(1));
    const auto step = [cut](double g) { return g < cut ? 1.0 : 0.0; };
    // E = P[gamma < cut | state] on the middle state
    const double expect = (std::exp(-p.lower(1) / g0) - std::exp(-cut / g0)) /
                          (std::exp(-p.lower(1) / g0) - std::exp(-p.upper(1) / g0));
    CHECK(state_fer_from_curve(step, 1, p, g0) == doctest::Approx(expect).epsilon(1e-6));

    // tail state: a curve decaying to 0 at infinity integrates cleanly
    const auto decay = [g0](double g) { return std::isfinite(g) ? std::exp(-g / g0) : 0.0; };
    const double lo = p.lower(2);
    // closed form: E[exp(-g/g0) | g > lo] = exp(-lo/g0) / 2
    CHECK(state_fer_from_curve(decay, 2, p, g0) ==
          doctest::Approx(std::exp(-lo / g0) / 2.0).epsilon(1e-6));
}

TEST_CASE("first frame throughput") {
    const FerTable fer = load_reference_table().drop_lowest_states(1);
    const SettingTable settings = paper_settings();
    // state w3 (index 1 after censoring), setting s_3
    CHECK(first_frame_throughput(2, 1, settings, fer) ==
          doctest::Approx(2731 * (1.0 - 0.0900)).epsilon(1e-12));
}
