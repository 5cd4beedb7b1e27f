#include <daa/error.hpp>
#include <daa/reference.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace daa {

std::uint8_t RandomByteSource::next() {
    if (left_ == 0) {
        word_ = engine_();
        left_ = 8;
    }
    const auto b = static_cast<std::uint8_t>(word_ & 0xFFu);
    word_ >>= 8;
    --left_;
    return b;
}

void RandomByteSource::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        b = next();
    }
}

ReferenceCurve build_reference(std::uint64_t seed, std::size_t sample_count, std::size_t max_len,
                               std::size_t step) {
    if (sample_count == 0) {
        throw ConfigError("reference needs at least one sample");
    }
    if (step == 0 || max_len == 0 || max_len % step != 0) {
        throw ConfigError("max_len must be a positive multiple of step");
    }

    RandomByteSource source(seed);
    std::vector<std::uint8_t> buf(max_len);
    std::vector<double> sums(max_len / step, 0.0);

    for (std::size_t s = 0; s < sample_count; ++s) {
        source.fill(buf);
        const EntropyCurve c = entropy_curve(buf, max_len, step);
        for (std::size_t k = 0; k < c.size(); ++k) {
            sums[k] += c[k];
        }
    }
    for (double& v : sums) {
        v /= static_cast<double>(sample_count);
    }
    return {EntropyCurve(step, std::move(sums)), seed, sample_count, kReferenceGeneratorId};
}

namespace {

std::string format_double(double v) {
    // Shortest representation that parses back to the same double.
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view what) {
    text = trim(text);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("invalid " + std::string(what) + " '" + std::string(text) + "'", line);
    }
    return value;
}

} // namespace

void write_reference(const ReferenceCurve& ref, std::ostream& out) {
    out << "# version=" << kReferenceFormatVersion << '\n'
        << "# seed=" << ref.seed << '\n'
        << "# samples=" << ref.sample_count << '\n'
        << "# generator=" << ref.generator_id << '\n'
        << "# step=" << ref.curve.step() << '\n'
        << "prefix_len,entropy\n";
    for (std::size_t k = 0; k < ref.curve.size(); ++k) {
        const CurvePoint p = ref.curve.point(k);
        out << p.prefix_len << ',' << format_double(p.entropy) << '\n';
    }
}

ReferenceCurve read_reference(std::istream& in) {
    ReferenceCurve ref;
    ref.generator_id = "unknown";
    std::optional<std::size_t> declared_step;
    bool header_seen = false;
    std::vector<std::size_t> lens;
    std::vector<double> values;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) {
                continue; // free-form comment
            }
            const std::string_view key = trim(body.substr(0, eq));
            const std::string_view val = trim(body.substr(eq + 1));
            if (key == "version") {
                const int v = parse_number<int>(val, line_no, "version");
                if (v != kReferenceFormatVersion) {
                    throw VersionError("reference format version " + std::to_string(v) +
                                       " is not supported (expected " +
                                       std::to_string(kReferenceFormatVersion) + ")");
                }
            } else if (key == "seed") {
                ref.seed = parse_number<std::uint64_t>(val, line_no, "seed");
            } else if (key == "samples") {
                ref.sample_count = parse_number<std::size_t>(val, line_no, "sample count");
                if (ref.sample_count == 0) {
                    throw ParseError("sample count must be at least 1", line_no);
                }
            } else if (key == "generator") {
                ref.generator_id = std::string(val);
            } else if (key == "step") {
                declared_step = parse_number<std::size_t>(val, line_no, "step");
                if (*declared_step == 0) {
                    throw ParseError("step must be positive", line_no);
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "prefix_len,entropy") {
                throw ParseError("expected header 'prefix_len,entropy'", line_no);
            }
            header_seen = true;
            continue;
        }

        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected two columns 'prefix_len,entropy'", line_no);
        }
        const auto len = parse_number<std::size_t>(line.substr(0, comma), line_no, "prefix_len");
        const auto value = parse_number<double>(line.substr(comma + 1), line_no, "entropy");

        const std::size_t step = declared_step.value_or(lens.empty() ? len : lens.front());
        if (len == 0 || len != (lens.size() + 1) * step) {
            throw ParseError("prefix_len " + std::to_string(len) + " breaks the uniform grid (expected " +
                                 std::to_string((lens.size() + 1) * step) + ")",
                             line_no);
        }
        if (!(value > 0.0) || value > 8.0) {
            throw ParseError("reference entropy must lie in (0, 8]", line_no);
        }
        lens.push_back(len);
        values.push_back(value);
    }

    if (!header_seen) {
        throw ParseError("missing 'prefix_len,entropy' header", 0);
    }
    if (values.empty()) {
        throw ParseError("reference has no data rows", 0);
    }
    ref.curve = EntropyCurve(declared_step.value_or(lens.front()), std::move(values));
    return ref;
}

void save_reference(const ReferenceCurve& ref, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    write_reference(ref, out);
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

ReferenceCurve load_reference(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open reference " + path.string());
    }
    try {
        return read_reference(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

} // namespace daa
