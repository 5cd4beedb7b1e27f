#include <daa/error.hpp>
#include <daa/evaluation.hpp>

#include "oracle.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace daa;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("daa_eval_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("score follows the outcome table") {
    CHECK(score(Verdict::Encrypted, Label::Encrypted) == Outcome::TruePositive);
    CHECK(score(Verdict::NotEncrypted, Label::Plain) == Outcome::TrueNegative);
    CHECK(score(Verdict::Encrypted, Label::Plain) == Outcome::FalsePositive);
    CHECK(score(Verdict::NotEncrypted, Label::Encrypted) == Outcome::FalseNegative);
    CHECK(to_string(Outcome::FalsePositive) == "FP");
}

TEST_CASE("metrics") {
    SUBCASE("accuracy") {
        const MetricSet m = metrics({3, 5, 1, 1});
        CHECK(*m.accuracy == doctest::Approx(0.8));
        CHECK(*m.precision == doctest::Approx(0.75));
        CHECK(*m.recall == doctest::Approx(0.75));
        CHECK(*m.f1 == doctest::Approx(0.75));
    }
    SUBCASE("perfect classifier") {
        const MetricSet m = metrics({10, 0, 0, 0});
        CHECK(*m.precision == 1.0);
        CHECK(*m.recall == 1.0);
        CHECK(*m.f1 == 1.0);
    }
    SUBCASE("undefined ratios are markers, not zero") {
        const MetricSet none = metrics({0, 5, 0, 0});
        CHECK(none.accuracy.has_value());
        CHECK_FALSE(none.precision.has_value());
        CHECK_FALSE(none.recall.has_value());
        CHECK_FALSE(none.f1.has_value());
        CHECK(format_percent(none.precision) == "NA");

        const MetricSet empty = metrics({});
        CHECK_FALSE(empty.accuracy.has_value());

        // precision and recall both defined but zero
        const MetricSet wrong = metrics({0, 0, 3, 4});
        CHECK(*wrong.precision == 0.0);
        CHECK(*wrong.recall == 0.0);
        CHECK_FALSE(wrong.f1.has_value());
    }
    SUBCASE("F1 from printed precision/recall vs the published cell") {
        const double p = 100.0, r = 97.640;
        const double f1 = 2 * p * r / (p + r);
        CHECK(f1 == doctest::Approx(98.806).epsilon(0.0005 / 98.806));
        CHECK(std::abs(f1 - 98.760) <= 0.1);
    }
    SUBCASE("f1 equals 2PR/(P+R)") {
        const MetricSet m = metrics({17, 40, 3, 9});
        CHECK(*m.f1 == doctest::Approx(2 * *m.precision * *m.recall / (*m.precision + *m.recall)).epsilon(1e-12));
    }
}

TEST_CASE("format_percent renders three decimals") {
    CHECK(format_percent(0.9996) == "99.960");
    CHECK(format_percent(1.0) == "100.000");
    CHECK(format_percent(std::nullopt) == kUndefinedMetric);
}

TEST_CASE("sweep on a small synthetic corpus") {
    const fs::path dir = fresh_dir("small");
    const Manifest m = generate_synthetic_corpus(5, dir, {.random = 10, .text = 10});
    const ReferenceCurve ref = build_reference(1, 1000, 256, 8);

    const SweepResult res = sweep(m.records, ref, default_header_lens(), default_thresholds());
    CHECK(res.skipped.empty());
    CHECK(res.grid.cells.size() == 8 * 5);

    const SweepCell& cell = res.grid.cell(3, 2);
    REQUIRE(cell.header_len == 128);
    REQUIRE(cell.threshold == 40.0);

    // Brute-force tally through the single-file path.
    ConfusionMatrix tally;
    for (const auto& r : m.records) {
        tally.add(score(classify_file(r.path, ref, {128, 40.0, kDefaultZeroRunMin}).verdict, r.label));
    }
    CHECK(cell.cm == tally);
    CHECK(*cell.metrics.accuracy == 1.0);
}

TEST_CASE("sweep: cached curves equal per-cell classification") {
    const fs::path dir = fresh_dir("reuse");
    Manifest m = generate_synthetic_corpus(8, dir, {.random = 6, .text = 4, .structured = 4, .compressed = 3});
    // Zero-padded encrypted file and one with a zero run straddling read windows.
    std::mt19937 rng(1);
    auto padded = oracle::read_all(oracle::data("zero_padded_random.bin"));
    oracle::write_all(dir / "padded.bin", padded);
    m.records.push_back({dir / "padded.bin", Label::Encrypted, "phobos"});
    auto straddle = oracle::random_bytes(rng, 1024);
    std::fill(straddle.begin() + 100, straddle.begin() + 140, 0);
    std::fill(straddle.begin(), straddle.begin() + 60, 0);
    oracle::write_all(dir / "straddle.bin", straddle);
    m.records.push_back({dir / "straddle.bin", Label::Encrypted, "phobos"});

    const ReferenceCurve ref = build_reference(2, 300, 256, 8);
    for (std::optional<std::size_t> zr : {std::optional<std::size_t>{}, std::optional<std::size_t>{16}}) {
        const SweepResult res = sweep(m.records, ref, default_header_lens(), default_thresholds(), zr);
        for (const auto& cell : res.grid.cells) {
            ConfusionMatrix tally;
            for (const auto& r : m.records) {
                tally.add(score(classify_file(r.path, ref, {cell.header_len, cell.threshold, zr}).verdict, r.label));
            }
            CHECK(cell.cm == tally);
        }
    }
}

TEST_CASE("sweep: edge cases") {
    const ReferenceCurve ref = build_reference(1, 200, 256, 8);
    CHECK_THROWS_AS(sweep({}, ref, default_header_lens(), default_thresholds()), ConfigError);

    const fs::path dir = fresh_dir("edge");
    const Manifest m = generate_synthetic_corpus(3, dir, {.random = 1});
    const SweepResult one = sweep(m.records, ref, {256}, {8.0 * 256});
    REQUIRE(one.grid.cells.size() == 1);
    CHECK(one.grid.cells[0].cm == ConfusionMatrix{1, 0, 0, 0});

    CHECK_THROWS_AS(sweep(m.records, ref, {100}, {8.0}), ConfigError);
    CHECK_THROWS_AS(sweep(m.records, ref, {512}, {8.0}), ConfigError);
}

TEST_CASE("sweep: unreadable files are left out of every cell") {
    const fs::path dir = fresh_dir("skip");
    Manifest m = generate_synthetic_corpus(3, dir, {.random = 2, .text = 2});
    m.records.push_back({dir / "gone.bin", Label::Plain, "gone"});
    oracle::write_all(dir / "tiny.bin", {1, 2, 3, 4, 5, 6, 7, 8, 9});
    m.records.push_back({dir / "tiny.bin", Label::Plain, "tiny"});

    const ReferenceCurve ref = build_reference(1, 200, 256, 8);
    const SweepResult res = sweep(m.records, ref, default_header_lens(), default_thresholds());
    CHECK(res.skipped.size() == 2);
    for (const auto& c : res.grid.cells) CHECK(c.cm.total() == 4);
}

TEST_CASE("sweep output formats carry the same values") {
    const fs::path dir = fresh_dir("formats");
    const Manifest m = generate_synthetic_corpus(4, dir, {.random = 5, .text = 5});
    const ReferenceCurve ref = build_reference(1, 200, 256, 8);
    const SweepResult res = sweep(m.records, ref, {32, 160}, {8, 40});

    std::ostringstream csv, js, errs;
    write_sweep_csv(res.grid, csv);
    write_sweep_json(res.grid, js);
    write_error_breakdown_csv(res.grid, errs);

    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "header_len,threshold,tp,tn,fp,fn,accuracy,precision,recall,f1");

    const auto doc = nlohmann::json::parse(js.str());
    REQUIRE(doc["cells"].size() == 4);
    for (const auto& cell : doc["cells"]) {
        std::getline(lines, line);
        std::ostringstream expect;
        auto pct = [](const nlohmann::json& v) {
            if (v.is_null()) return std::string("NA");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", v.get<double>());
            return std::string(buf);
        };
        expect << cell["header_len"].get<int>() << ',' << cell["threshold"].get<double>() << ','
               << cell["tp"].get<int>() << ',' << cell["tn"].get<int>() << ',' << cell["fp"].get<int>() << ','
               << cell["fn"].get<int>() << ',' << pct(cell["accuracy"]) << ',' << pct(cell["precision"]) << ','
               << pct(cell["recall"]) << ',' << pct(cell["f1"]);
        CHECK(line == expect.str());
    }
    CHECK(errs.str().starts_with("header_len,threshold,file_type,fp,fn\n"));
}
