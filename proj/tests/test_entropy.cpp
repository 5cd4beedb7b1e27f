#include <daa/entropy.hpp>
#include <daa/error.hpp>

#include "oracle.hpp"

#include <doctest.h>

#include <fstream>
#include <numeric>
#include <sstream>

using namespace daa;

TEST_CASE("shannon_entropy: closed-form distributions") {
    std::vector<std::uint8_t> same(16, 0x41);
    CHECK(shannon_entropy(same) == 0.0);

    std::vector<std::uint8_t> alt(16);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::uint8_t>(i % 2);
    CHECK(shannon_entropy(alt) == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<std::uint8_t> all(256);
    std::iota(all.begin(), all.end(), 0);
    CHECK(shannon_entropy(all) == 8.0);

    std::vector<std::uint8_t> eight = {1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(shannon_entropy(eight) == 3.0);
}

TEST_CASE("shannon_entropy: empty fragment is a domain error") {
    CHECK_THROWS_AS(shannon_entropy({}), DomainError);
}

TEST_CASE("entropy_curve matches the committed golden curve") {
    const auto bytes = oracle::read_all(oracle::data("vector40.bin"));
    REQUIRE(bytes.size() == 40);

    std::ifstream golden(oracle::data("vector40_curve.csv"));
    std::vector<double> expected;
    for (std::string line; std::getline(golden, line);) {
        if (line.empty() || line[0] == '#' || line.starts_with("prefix_len")) continue;
        expected.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
    REQUIRE(expected.size() == 5);

    const EntropyCurve c = entropy_curve(bytes, 40, 8);
    REQUIRE(c.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(c.point(k).prefix_len == (k + 1) * 8);
        CHECK(std::abs(c[k] - expected[k]) <= 1e-12);
    }
}

TEST_CASE("entropy_curve: degenerate and short inputs") {
    SUBCASE("all zeros") {
        const std::vector<std::uint8_t> zeros(40, 0);
        const EntropyCurve c = entropy_curve(zeros, 40, 8);
        CHECK(c.values() == std::vector<double>(5, 0.0));
    }
    SUBCASE("truncates at the largest grid point that fits") {
        const std::vector<std::uint8_t> bytes(30, 7);
        const EntropyCurve c = entropy_curve(bytes, 256, 8);
        CHECK(c.size() == 3);
        CHECK(c.max_len() == 24);
    }
    SUBCASE("shorter than one step") {
        const std::vector<std::uint8_t> bytes(7, 1);
        CHECK_THROWS_AS(entropy_curve(bytes, 40, 8), ShortFileError);
    }
    SUBCASE("bad grid") {
        const std::vector<std::uint8_t> bytes(64, 1);
        CHECK_THROWS_AS(entropy_curve(bytes, 40, 0), ConfigError);
        CHECK_THROWS_AS(entropy_curve(bytes, 42, 8), ConfigError);
    }
}

TEST_CASE("EntropyCurve grid lookups") {
    const EntropyCurve c(8, {1.0, 2.0, 3.0});
    CHECK(c.at(16) == 2.0);
    CHECK(c.on_grid(24));
    CHECK_FALSE(c.on_grid(12));
    CHECK_FALSE(c.on_grid(32));
    CHECK_THROWS_AS(c.at(12), GridError);
    CHECK(c.truncated(17).values() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("strip_zero_runs") {
    std::mt19937 rng(11);

    SUBCASE("leading zero block removed") {
        auto tail = oracle::random_bytes(rng, 256);
        for (auto& b : tail) b = b ? b : 1;
        std::vector<std::uint8_t> in(64, 0);
        in.insert(in.end(), tail.begin(), tail.end());
        CHECK(strip_zero_runs(in, 16) == tail);
    }
    SUBCASE("no long run is identity") {
        const std::vector<std::uint8_t> in = {1, 0, 0, 2, 0, 3, 0, 0, 0, 4};
        CHECK(strip_zero_runs(in, 4) == in);
    }
    SUBCASE("committed sandwich vector") {
        const auto in = oracle::read_all(oracle::data("zero_sandwich.bin"));
        const auto expected = oracle::read_all(oracle::data("zero_sandwich_stripped.bin"));
        CHECK(strip_zero_runs(in, 8) == expected);
    }
    SUBCASE("run exactly min_run long is removed, one shorter is kept") {
        const std::vector<std::uint8_t> in = {9, 0, 0, 0, 9, 0, 0, 9};
        CHECK(strip_zero_runs(in, 3) == std::vector<std::uint8_t>{9, 9, 0, 0, 9});
    }
    SUBCASE("all zeros becomes empty") {
        CHECK(strip_zero_runs(std::vector<std::uint8_t>(100, 0), 16).empty());
    }
    SUBCASE("min_run below 2 rejected") {
        CHECK_THROWS_AS(strip_zero_runs(std::vector<std::uint8_t>{0, 0}, 1), ConfigError);
    }
}
