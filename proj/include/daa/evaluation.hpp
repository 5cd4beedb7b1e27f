// Ground-truth scoring, metrics, and the header-length x threshold sweep.

#ifndef DAA_EVALUATION_HPP
#define DAA_EVALUATION_HPP

#include <daa/classifier.hpp>
#include <daa/corpus.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace daa {

/// Positive means "classified encrypted".
enum class Outcome { TruePositive, TrueNegative, FalsePositive, FalseNegative };

Outcome score(Verdict verdict, Label label) noexcept;

std::string_view to_string(Outcome o) noexcept;

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    void add(Outcome o) noexcept;
    std::size_t total() const noexcept { return tp + tn + fp + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Fractions in [0, 1]; nullopt marks an undefined ratio (zero denominator).
struct MetricSet {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

MetricSet metrics(const ConfusionMatrix& cm) noexcept;

inline constexpr const char* kUndefinedMetric = "NA";

/// Percentage with three decimals ("99.960"), or "NA".
std::string format_percent(const std::optional<double>& fraction);

struct TypeErrors {
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct SweepCell {
    std::size_t header_len = 0;
    double threshold = 0.0;
    ConfusionMatrix cm;
    MetricSet metrics;
    std::map<std::string, TypeErrors> errors_by_type; ///< only types with fp or fn > 0
};

struct SweepGrid {
    std::vector<std::size_t> header_lens;
    std::vector<double> thresholds;
    std::vector<SweepCell> cells; ///< row-major: header_len outer, threshold inner

    const SweepCell& cell(std::size_t len_index, std::size_t threshold_index) const {
        return cells.at(len_index * thresholds.size() + threshold_index);
    }
};

struct SweepResult {
    SweepGrid grid;
    std::vector<SkippedFile> skipped;
};

std::vector<std::size_t> default_header_lens();
std::vector<double> default_thresholds();

/**
 * Classifies every record at every (header_len, threshold) pair. Each file is
 * read once and its curves reused across the grid. Unreadable or too-short
 * files are reported in `skipped` and left out of every cell.
 *
 * Throws ConfigError on an empty record list or a header length off the
 * reference grid.
 */
SweepResult sweep(const std::vector<FileRecord>& records, const ReferenceCurve& reference,
                  const std::vector<std::size_t>& header_lens, const std::vector<double>& thresholds,
                  std::optional<std::size_t> zero_run_min = kDefaultZeroRunMin);

/// header_len,threshold,tp,tn,fp,fn,accuracy,precision,recall,f1
void write_sweep_csv(const SweepGrid& grid, std::ostream& out);

/// header_len,threshold,file_type,fp,fn
void write_error_breakdown_csv(const SweepGrid& grid, std::ostream& out);

/// Same values as the CSV; undefined metrics become null.
void write_sweep_json(const SweepGrid& grid, std::ostream& out);

} // namespace daa

#endif // DAA_EVALUATION_HPP
