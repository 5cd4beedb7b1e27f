// Command-line front end. Kept out of main() so tests can drive it with
// in-memory streams.

#ifndef DAA_TOOLS_CLI_HPP
#define DAA_TOOLS_CLI_HPP

#include <daa/classifier.hpp>
#include <daa/entropy.hpp>
#include <daa/reference.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace daa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPartial = 2;

enum class Command { Reference, Classify, Profile, Generate, Sweep };
enum class OutputFormat { Text, Csv, Json };

struct RunConfig {
    Command command = Command::Classify;
    std::size_t step = kDefaultStep;
    std::size_t max_len = kDefaultMaxLen;
    std::size_t header_len = kDefaultHeaderLen;
    double threshold = kDefaultThreshold;
    std::size_t zero_run_min = kDefaultZeroRunMin; ///< 0 disables stripping
    std::string reference_path;
    OutputFormat output_format = OutputFormat::Text;
    std::uint64_t seed = 1;
    std::size_t sample_count = kDefaultReferenceSamples;
    std::string out_path;

    std::optional<std::size_t> zero_run() const {
        return zero_run_min == 0 ? std::nullopt : std::optional<std::size_t>(zero_run_min);
    }

    /// Throws ConfigError unless step divides max_len and header_len <= max_len.
    void validate() const;
};

/// Loads --reference when given, otherwise builds one from seed and samples.
ReferenceCurve resolve_reference(const RunConfig& config);

/// Runs the CLI with argv-style arguments (argv[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace daa::cli

#endif // DAA_TOOLS_CLI_HPP
