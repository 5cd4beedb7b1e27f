// Differential area analysis: reference-minus-sample curve, trapezoidal area,
// and the encrypted / not-encrypted decision.

#ifndef DAA_CLASSIFIER_HPP
#define DAA_CLASSIFIER_HPP

#include <daa/entropy.hpp>
#include <daa/reference.hpp>

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace daa {

inline constexpr std::size_t kDefaultHeaderLen = 160;
inline constexpr double kDefaultThreshold = 40.0;
/// With zero stripping on, up to this many times header_len bytes are read.
inline constexpr std::size_t kZeroStripReadAhead = 4;

enum class Verdict { Encrypted, NotEncrypted };

std::string_view to_string(Verdict v) noexcept;

/// Pointwise reference - sample, on the grid shared by both parents.
struct DerivedCurve {
    std::size_t step = kDefaultStep;
    std::vector<double> deltas;

    std::size_t max_len() const noexcept { return step * deltas.size(); }
};

struct DaaResult {
    double area = 0.0;           ///< Bit-Bytes
    std::size_t header_len = 0;  ///< upper integration bound actually used
    double threshold = 0.0;      ///< Bit-Bytes
    Verdict verdict = Verdict::NotEncrypted;
    bool zero_stripped = false;  ///< stripping was enabled for this run
    std::size_t bytes_read = 0;
};

struct ClassifyOptions {
    std::size_t header_len = kDefaultHeaderLen;
    double threshold = kDefaultThreshold;
    /// Minimum zero-run length to strip; nullopt disables stripping.
    std::optional<std::size_t> zero_run_min = kDefaultZeroRunMin;
};

/// Throws GridError when the steps differ. The result covers the overlap of the two curves.
DerivedCurve derive(const EntropyCurve& sample, const ReferenceCurve& reference);
DerivedCurve derive(const EntropyCurve& sample, const EntropyCurve& reference);

/// Composite trapezoidal rule over grid points [from, to] with h = step:
/// (h/2) * (f(from) + 2 * sum f(interior) + f(to)). Signed.
/// Throws GridError when a bound is off-grid or from >= to.
double trapezoid_area(const DerivedCurve& curve, std::size_t from, std::size_t to);

/// Area of each trapezoid between consecutive grid points in [from, to].
std::vector<double> trapezoid_segments(const DerivedCurve& curve, std::size_t from, std::size_t to);

/// Encrypted iff area <= threshold.
inline Verdict decide(double area, double threshold) noexcept {
    return area <= threshold ? Verdict::Encrypted : Verdict::NotEncrypted;
}

/**
 * Bytes of the file that classification may look at: header_len bytes, or
 * kZeroStripReadAhead * header_len when zero stripping is enabled.
 */
std::size_t read_budget(const ClassifyOptions& options) noexcept;

/// Reads at most `limit` bytes from the start of a file. Throws IoError.
std::vector<std::uint8_t> read_prefix(const std::filesystem::path& path, std::size_t limit);

/**
 * Classifies an in-memory file prefix. `bytes` is trimmed to read_budget()
 * first, so passing a whole file and passing its prefix give the same result.
 *
 * Short inputs are integrated over the truncated grid; fewer than two grid
 * points after optional stripping raises ShortFileError. Throws ConfigError
 * when header_len is not on the reference grid.
 */
DaaResult classify_bytes(ByteSpan bytes, const ReferenceCurve& reference, const ClassifyOptions& options = {});

/// classify_bytes() on a file, reading no more than read_budget(options) bytes.
DaaResult classify_file(const std::filesystem::path& path, const ReferenceCurve& reference,
                        const ClassifyOptions& options = {});

/// Sample curve as classification sees it: optional zero stripping, then prefix curve.
EntropyCurve header_curve(ByteSpan bytes, std::size_t header_len, std::size_t step,
                          std::optional<std::size_t> zero_run_min);

/// Throws ConfigError unless header_len is a grid point of the reference.
void check_header_len(const ReferenceCurve& reference, std::size_t header_len);

} // namespace daa

#endif // DAA_CLASSIFIER_HPP
