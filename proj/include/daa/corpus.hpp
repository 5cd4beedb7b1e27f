// Labelled corpora: manifests, synthetic generation, per-type entropy profiles.

#ifndef DAA_CORPUS_HPP
#define DAA_CORPUS_HPP

#include <daa/entropy.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace daa {

enum class Label { Encrypted, Plain };

std::string_view to_string(Label label) noexcept;

/// Accepts exactly "encrypted" or "plain". Throws ParseError otherwise.
Label parse_label(std::string_view text);

struct FileRecord {
    std::filesystem::path path;
    Label label = Label::Plain;
    std::string file_type;

    friend bool operator==(const FileRecord&, const FileRecord&) = default;
};

struct Manifest {
    std::vector<std::string> provenance; ///< '#' comment lines, without the marker
    std::vector<FileRecord> records;
    std::vector<std::string> warnings;
};

/**
 * Reads a JSON-lines manifest: one {"path","label","type"} object per line,
 * optional leading '#' comments. Relative paths resolve against `base_dir`.
 * Throws ParseError carrying the 1-based line number.
 */
Manifest read_manifest(std::istream& in, const std::filesystem::path& base_dir = {});

/// read_manifest() on a file; relative paths resolve against its directory.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes paths relative to `base_dir` when they lie beneath it.
void write_manifest(const Manifest& manifest, std::ostream& out, const std::filesystem::path& base_dir = {});

/// Number of files to generate per class.
struct CorpusSpec {
    std::size_t random = 0;     ///< encrypted proxies, labelled Encrypted
    std::size_t text = 0;       ///< seeded word sequences
    std::size_t structured = 0; ///< fixed-layout low-entropy records
    std::size_t compressed = 0; ///< plaintext piped through `compressor`
    std::size_t min_size = 512;
    std::size_t max_size = 2048;
    /// Shell command that compresses stdin to stdout.
    std::string compressor = "xz --format=lzma -c";
};

inline constexpr const char* kManifestFileName = "manifest.jsonl";

/**
 * Writes the synthetic corpus under out_dir and a manifest at
 * out_dir/manifest.jsonl. Every file draws from its own seeded stream, so
 * classes (a)-(c) are byte-identical for a fixed seed. If the compressor is
 * unavailable the compressed class is skipped and a warning recorded.
 */
Manifest generate_synthetic_corpus(std::uint64_t seed, const std::filesystem::path& out_dir,
                                   const CorpusSpec& spec);

/// Plaintext document used for file `index` of the text class.
std::string synthetic_text(std::uint64_t seed, std::size_t index, std::size_t min_size, std::size_t max_size);

/// Structured low-entropy document used for file `index` of the structured class.
std::vector<std::uint8_t> synthetic_structured(std::uint64_t seed, std::size_t index, std::size_t min_size,
                                               std::size_t max_size);

/// Encrypted-proxy bytes used for file `index` of the random class.
std::vector<std::uint8_t> synthetic_random(std::uint64_t seed, std::size_t index, std::size_t min_size,
                                           std::size_t max_size);

struct TypeProfile {
    std::string file_type;
    std::size_t sample_size = 0;     ///< files of this type that produced a curve
    EntropyCurve mean_curve;
    std::vector<double> stddev;      ///< population standard deviation per grid point
    std::vector<std::size_t> counts; ///< files reaching each grid point

    double mean_at(std::size_t prefix_len) const;
};

struct SkippedFile {
    std::filesystem::path path;
    std::string reason;
};

struct ProfileReport {
    std::vector<TypeProfile> profiles; ///< sorted by file_type
    std::vector<SkippedFile> skipped;
};

/// Pointwise mean and population standard deviation of header entropy curves per file type.
ProfileReport profile_corpus(const std::vector<FileRecord>& records, std::size_t step = kDefaultStep,
                             std::size_t max_len = kDefaultMaxLen,
                             std::optional<std::size_t> zero_run_min = std::nullopt);

/// CSV: file_type,sample_size,prefix_len,mean_entropy,stddev (sample_size is the per-point count).
void write_profiles(const std::vector<TypeProfile>& profiles, std::ostream& out);

struct ExclusionResult {
    std::vector<TypeProfile> kept;
    std::vector<TypeProfile> excluded;
};

/// Excludes profiles whose mean at `at_len` is strictly below `floor`.
/// Throws ProfileError when a profile has no point at at_len.
ExclusionResult exclusion_filter(const std::vector<TypeProfile>& profiles, std::size_t at_len, double floor);

} // namespace daa

#endif // DAA_CORPUS_HPP
