// Shannon entropy of byte fragments and header entropy curves.

#ifndef DAA_ENTROPY_HPP
#define DAA_ENTROPY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace daa {

using ByteSpan = std::span<const std::uint8_t>;
using ByteHistogram = std::array<std::uint64_t, 256>;

inline constexpr std::size_t kDefaultStep = 8;
inline constexpr std::size_t kDefaultMaxLen = 256;
inline constexpr std::size_t kDefaultZeroRunMin = 16;

/// Shannon entropy in bits, H = -sum p log2 p over the 256 byte values.
/// Probabilities are exact counts divided by `total` once; empty bins add 0.
double entropy_from_histogram(const ByteHistogram& counts, std::uint64_t total);

/// Entropy of a fragment in [0, 8] bits. Throws DomainError on an empty fragment.
double shannon_entropy(ByteSpan fragment);

struct CurvePoint {
    std::size_t prefix_len;
    double entropy;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/**
 * Entropy sampled over growing prefixes of a byte sequence.
 *
 * Point k (0-based) sits at prefix length (k + 1) * step, so the grid is
 * always step, 2*step, ..., max_len().
 */
class EntropyCurve {
public:
    EntropyCurve() = default;

    /// Throws GridError when step is zero.
    EntropyCurve(std::size_t step, std::vector<double> values);

    std::size_t step() const noexcept { return step_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::size_t max_len() const noexcept { return step_ * values_.size(); }

    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t index) const { return values_[index]; }

    CurvePoint point(std::size_t index) const {
        return {(index + 1) * step_, values_.at(index)};
    }

    /// True when prefix_len is one of the grid points.
    bool on_grid(std::size_t prefix_len) const noexcept;

    /// Entropy at a grid prefix length. Throws GridError when off-grid.
    double at(std::size_t prefix_len) const;

    /// Keeps only the points up to and including prefix length `len`.
    EntropyCurve truncated(std::size_t len) const;

    friend bool operator==(const EntropyCurve&, const EntropyCurve&) = default;

private:
    std::size_t step_ = kDefaultStep;
    std::vector<double> values_;
};

/**
 * Entropy of every prefix of `bytes` whose length is a multiple of `step`,
 * up to `max_len`.
 *
 * If the input is shorter than max_len the curve stops at the largest grid
 * point that fits. Throws ConfigError for step == 0 or a max_len that is not
 * a positive multiple of step, and ShortFileError when fewer than `step`
 * bytes are available.
 */
EntropyCurve entropy_curve(ByteSpan bytes, std::size_t max_len, std::size_t step = kDefaultStep);

/// Removes every maximal run of at least `min_run` consecutive 0x00 bytes.
/// Throws ConfigError when min_run < 2. The result may be empty.
std::vector<std::uint8_t> strip_zero_runs(ByteSpan bytes, std::size_t min_run = kDefaultZeroRunMin);

} // namespace daa

#endif // DAA_ENTROPY_HPP
