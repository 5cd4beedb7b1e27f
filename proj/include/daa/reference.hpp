// Random-data reference curve: build, persist, load.

#ifndef DAA_REFERENCE_HPP
#define DAA_REFERENCE_HPP

#include <daa/entropy.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>

namespace daa {

/// Identifier recorded with every reference built by build_reference().
inline constexpr const char* kReferenceGeneratorId = "mt19937_64-le";
inline constexpr int kReferenceFormatVersion = 1;
inline constexpr std::size_t kDefaultReferenceSamples = 1000;

/// Averaged entropy curve of pseudo-random data plus the provenance needed to rebuild it.
struct ReferenceCurve {
    EntropyCurve curve;
    std::uint64_t seed = 0;
    std::size_t sample_count = 1;
    std::string generator_id;

    friend bool operator==(const ReferenceCurve&, const ReferenceCurve&) = default;
};

/**
 * Seeded uniform octet source used for references and synthetic encrypted
 * proxies. Each 64-bit engine output is split into 8 bytes, low byte first,
 * so the stream is identical on every conforming standard library.
 */
class RandomByteSource {
public:
    explicit RandomByteSource(std::uint64_t seed) : engine_(seed) {}

    std::uint8_t next();
    void fill(std::span<std::uint8_t> out);

private:
    std::mt19937_64 engine_;
    std::uint64_t word_ = 0;
    unsigned left_ = 0;
};

/**
 * Mean entropy curve over `sample_count` pseudo-random sequences of
 * `max_len` bytes drawn consecutively from RandomByteSource(seed).
 * Throws ConfigError for sample_count == 0 or an invalid grid.
 */
ReferenceCurve build_reference(std::uint64_t seed, std::size_t sample_count = kDefaultReferenceSamples,
                               std::size_t max_len = kDefaultMaxLen, std::size_t step = kDefaultStep);

void write_reference(const ReferenceCurve& ref, std::ostream& out);
ReferenceCurve read_reference(std::istream& in);

/// Throws IoError when the path cannot be written.
void save_reference(const ReferenceCurve& ref, const std::filesystem::path& path);

/// Throws IoError, ParseError (with the offending line) or VersionError.
ReferenceCurve load_reference(const std::filesystem::path& path);

} // namespace daa

#endif // DAA_REFERENCE_HPP
