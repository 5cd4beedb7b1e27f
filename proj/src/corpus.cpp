#include <daa/classifier.hpp>
#include <daa/corpus.hpp>
#include <daa/error.hpp>
#include <daa/reference.hpp>

#include "parallel.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace daa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Label label) noexcept {
    return label == Label::Encrypted ? "encrypted" : "plain";
}

Label parse_label(std::string_view text) {
    if (text == "encrypted") return Label::Encrypted;
    if (text == "plain") return Label::Plain;
    throw ParseError("unknown label '" + std::string(text) + "' (expected \"encrypted\" or \"plain\")", 0);
}

// ---------------------------------------------------------------------------
// Manifest

Manifest read_manifest(std::istream& in, const fs::path& base_dir) {
    Manifest m;
    std::set<fs::path> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto body = line.find_first_not_of(" \t", first + 1);
            m.provenance.push_back(body == std::string::npos ? std::string{} : line.substr(body));
            continue;
        }

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("expected a JSON object", line_no);
        }
        auto field = [&](const char* key) -> std::string {
            const auto it = obj.find(key);
            if (it == obj.end() || !it->is_string()) {
                throw ParseError(std::string("missing string field \"") + key + "\"", line_no);
            }
            std::string v = it->get<std::string>();
            if (v.empty()) {
                throw ParseError(std::string("field \"") + key + "\" is empty", line_no);
            }
            return v;
        };

        FileRecord r;
        fs::path p = fs::path(field("path"));
        r.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        try {
            r.label = parse_label(field("label"));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        r.file_type = field("type");

        if (!seen.insert(r.path.lexically_normal()).second) {
            m.warnings.push_back("line " + std::to_string(line_no) + ": duplicate path " + r.path.string());
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open manifest " + path.string());
    }
    try {
        return read_manifest(in, path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void write_manifest(const Manifest& manifest, std::ostream& out, const fs::path& base_dir) {
    for (const auto& c : manifest.provenance) {
        out << "# " << c << '\n';
    }
    for (const auto& r : manifest.records) {
        fs::path p = r.path;
        if (!base_dir.empty()) {
            const fs::path rel = p.lexically_relative(base_dir);
            if (!rel.empty() && *rel.begin() != "..") p = rel;
        }
        json obj = {{"path", p.generic_string()}, {"label", to_string(r.label)}, {"type", r.file_type}};
        out << obj.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

enum class SyntheticClass : std::uint64_t { Random = 1, Text = 2, Structured = 3 };

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t file_seed(std::uint64_t seed, SyntheticClass cls, std::size_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(cls)) ^ index);
}

std::size_t pick_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    if (hi < lo) std::swap(lo, hi);
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

constexpr std::array<std::string_view, 120> kWords = {
    "the",      "of",       "and",      "to",       "in",        "is",       "that",     "for",
    "it",       "as",       "was",      "with",     "be",        "by",       "on",       "not",
    "this",     "are",      "or",       "from",     "at",        "which",    "but",      "have",
    "an",       "they",     "were",     "been",     "one",       "all",      "their",    "has",
    "would",    "when",     "if",       "no",       "more",      "out",      "into",     "any",
    "what",     "some",     "can",      "about",    "than",      "them",     "only",     "other",
    "time",     "new",      "report",   "agency",   "federal",   "program",  "public",   "data",
    "section",  "service",  "national", "review",   "research",  "policy",   "water",    "energy",
    "system",   "office",   "health",   "county",   "state",     "budget",   "project",  "analysis",
    "results",  "table",    "figure",   "annual",   "plan",      "management", "support", "development",
    "information", "committee", "department", "environmental", "community", "resources", "training", "survey",
    "should",   "may",      "also",     "each",     "these",     "under",    "during",   "between",
    "within",   "because",  "through",  "including", "following", "general", "total",   "number",
    "approved", "required", "provided", "described", "reported", "proposed", "related", "available",
};

std::string quote_shell(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::optional<std::string> first_output_line(const std::string& command) {
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(command.c_str(), "r"), ::pclose);
    if (!pipe) return std::nullopt;
    std::array<char, 256> buf{};
    if (!std::fgets(buf.data(), static_cast<int>(buf.size()), pipe.get())) return std::nullopt;
    std::string line(buf.data());
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return line;
}

std::string program_name(const std::string& command) {
    const auto end = command.find_first_of(" \t");
    return command.substr(0, end);
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

std::string index_name(std::string_view prefix, std::size_t i, std::string_view ext) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05zu", i);
    return std::string(prefix) + "_" + buf + std::string(ext);
}

} // namespace

std::string synthetic_text(std::uint64_t seed, std::size_t index, std::size_t min_size, std::size_t max_size) {
    std::mt19937_64 rng(file_seed(seed, SyntheticClass::Text, index));
    const std::size_t size = pick_size(rng, min_size, max_size);
    std::uniform_int_distribution<std::size_t> word(0, kWords.size() - 1);
    std::uniform_int_distribution<int> sentence_len(5, 18);
    std::uniform_int_distribution<int> para_len(3, 7);

    std::string doc;
    doc.reserve(size + 128);
    while (doc.size() < size) {
        const int sentences = para_len(rng);
        for (int s = 0; s < sentences && doc.size() < size; ++s) {
            const int words = sentence_len(rng);
            for (int w = 0; w < words; ++w) {
                std::string token(kWords[word(rng)]);
                if (w == 0) token[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
                doc += token;
                doc += (w + 1 == words) ? ". " : (rng() % 11 == 0 ? ", " : " ");
            }
        }
        doc += "\n\n";
    }
    doc.resize(size);
    return doc;
}

std::vector<std::uint8_t> synthetic_structured(std::uint64_t seed, std::size_t index, std::size_t min_size,
                                               std::size_t max_size) {
    std::mt19937_64 rng(file_seed(seed, SyntheticClass::Structured, index));
    const std::size_t size = pick_size(rng, min_size, max_size);
    constexpr std::size_t kRecord = 32;
    const std::uint32_t count = static_cast<std::uint32_t>(size / kRecord);

    std::vector<std::uint8_t> out;
    out.reserve(size + kRecord);
    auto put_le = [&](std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };

    // 16-byte file header
    for (char c : std::string_view("SREC")) out.push_back(static_cast<std::uint8_t>(c));
    put_le(1, 2);
    put_le(kRecord, 2);
    put_le(count, 4);
    put_le(0, 4);

    static constexpr std::array<std::string_view, 6> kNames = {"alpha", "bravo", "charlie", "delta", "echo",
                                                                "foxtrot"};
    const std::uint64_t epoch = 1'600'000'000ull + (rng() % 1'000'000ull);
    std::uniform_int_distribution<int> category(0, 3);
    std::uniform_int_distribution<std::size_t> name(0, kNames.size() - 1);
    for (std::uint32_t id = 1; out.size() < size; ++id) {
        put_le(id, 4);
        put_le(static_cast<std::uint64_t>(category(rng)), 2);
        put_le(0, 2);
        put_le(epoch + 60ull * id, 8);
        std::array<std::uint8_t, 8> label{};
        const auto n = kNames[name(rng)];
        std::copy_n(n.begin(), std::min<std::size_t>(n.size(), label.size()), label.begin());
        out.insert(out.end(), label.begin(), label.end());
        put_le(0, 8);
    }
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> synthetic_random(std::uint64_t seed, std::size_t index, std::size_t min_size,
                                           std::size_t max_size) {
    const std::uint64_t s = file_seed(seed, SyntheticClass::Random, index);
    std::mt19937_64 size_rng(s);
    std::vector<std::uint8_t> out(pick_size(size_rng, min_size, max_size));
    RandomByteSource(splitmix64(s)).fill(out);
    return out;
}

Manifest generate_synthetic_corpus(std::uint64_t seed, const fs::path& out_dir, const CorpusSpec& spec) {
    if (spec.min_size == 0 || spec.max_size < spec.min_size) {
        throw ConfigError("synthetic file sizes need 0 < min_size <= max_size");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }

    Manifest m;
    m.provenance.push_back("generator=daa-synthetic");
    m.provenance.push_back("seed=" + std::to_string(seed));
    m.provenance.push_back("sizes=" + std::to_string(spec.min_size) + ".." + std::to_string(spec.max_size));

    auto add_class = [&](std::string_view type, std::size_t n, Label label, std::string_view ext, auto make) {
        if (n == 0) return;
        const fs::path dir = out_dir / type;
        fs::create_directories(dir);
        for (std::size_t i = 0; i < n; ++i) {
            const fs::path p = dir / index_name(type, i, ext);
            const auto bytes = make(i);
            write_file(p, std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
            m.records.push_back({p, label, std::string(type)});
        }
    };

    add_class("random", spec.random, Label::Encrypted, ".bin",
              [&](std::size_t i) { return synthetic_random(seed, i, spec.min_size, spec.max_size); });
    add_class("text", spec.text, Label::Plain, ".txt",
              [&](std::size_t i) { return synthetic_text(seed, i, spec.min_size, spec.max_size); });
    add_class("structured", spec.structured, Label::Plain, ".dat",
              [&](std::size_t i) { return synthetic_structured(seed, i, spec.min_size, spec.max_size); });

    if (spec.compressed > 0) {
        const std::string prog = program_name(spec.compressor);
        const auto version = first_output_line(quote_shell(prog) + " --version 2>/dev/null");
        if (!version) {
            const std::string w = "compressor '" + prog + "' unavailable; compressed class skipped";
            m.warnings.push_back(w);
            m.provenance.push_back("warning=" + w);
        } else {
            m.provenance.push_back("compressor=" + spec.compressor + " (" + *version + ")");
            const fs::path dir = out_dir / "compressed";
            fs::create_directories(dir);
            for (std::size_t i = 0; i < spec.compressed; ++i) {
                const std::string plain = synthetic_text(seed, i, spec.min_size, spec.max_size);
                const fs::path tmp = dir / (".plain_" + std::to_string(i));
                const fs::path p = dir / index_name("compressed", i, ".lz");
                write_file(tmp, std::span(reinterpret_cast<const std::uint8_t*>(plain.data()), plain.size()));
                const std::string cmd =
                    spec.compressor + " < " + quote_shell(tmp.string()) + " > " + quote_shell(p.string());
                const int rc = std::system(cmd.c_str());
                fs::remove(tmp, ec);
                if (rc != 0) {
                    fs::remove(p, ec);
                    const std::string w = "compressor failed (status " + std::to_string(rc) +
                                          "); compressed class truncated at " + std::to_string(i) + " files";
                    m.warnings.push_back(w);
                    m.provenance.push_back("warning=" + w);
                    break;
                }
                m.records.push_back({p, Label::Plain, "compressed"});
            }
        }
    }

    std::ofstream out(out_dir / kManifestFileName, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write manifest in " + out_dir.string());
    }
    write_manifest(m, out, out_dir);
    return m;
}

// ---------------------------------------------------------------------------
// Profiling

double TypeProfile::mean_at(std::size_t prefix_len) const {
    if (!mean_curve.on_grid(prefix_len)) {
        throw ProfileError("profile '" + file_type + "' has no point at " + std::to_string(prefix_len) + " bytes");
    }
    return mean_curve.at(prefix_len);
}

ProfileReport profile_corpus(const std::vector<FileRecord>& records, std::size_t step, std::size_t max_len,
                             std::optional<std::size_t> zero_run_min) {
    if (step == 0 || max_len == 0 || max_len % step != 0) {
        throw ConfigError("max_len must be a positive multiple of step");
    }
    if (zero_run_min && *zero_run_min < 2) {
        throw ConfigError("zero-run minimum must be at least 2");
    }
    const std::size_t budget = zero_run_min ? kZeroStripReadAhead * max_len : max_len;

    std::vector<std::optional<EntropyCurve>> curves(records.size());
    std::vector<std::string> errors(records.size());
    detail::parallel_for(records.size(), [&](std::size_t i) {
        try {
            const auto head = read_prefix(records[i].path, budget);
            curves[i] = header_curve(head, max_len, step, zero_run_min);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    struct Accumulator {
        std::size_t files = 0;
        std::vector<std::size_t> n;
        std::vector<double> mean, m2;
    };
    std::map<std::string, Accumulator> groups;
    ProfileReport report;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!curves[i]) {
            report.skipped.push_back({records[i].path, errors[i]});
            continue;
        }
        Accumulator& acc = groups[records[i].file_type];
        const std::size_t points = max_len / step;
        if (acc.n.empty()) {
            acc.n.assign(points, 0);
            acc.mean.assign(points, 0.0);
            acc.m2.assign(points, 0.0);
        }
        ++acc.files;
        const EntropyCurve& c = *curves[i];
        for (std::size_t k = 0; k < c.size(); ++k) {
            // Welford update
            const double x = c[k];
            const double d = x - acc.mean[k];
            acc.mean[k] += d / static_cast<double>(++acc.n[k]);
            acc.m2[k] += d * (x - acc.mean[k]);
        }
    }

    for (auto& [type, acc] : groups) {
        TypeProfile p;
        p.file_type = type;
        p.sample_size = acc.files;
        std::size_t reached = 0;
        while (reached < acc.n.size() && acc.n[reached] > 0) ++reached;
        std::vector<double> mean(acc.mean.begin(), acc.mean.begin() + reached);
        p.counts.assign(acc.n.begin(), acc.n.begin() + reached);
        p.stddev.resize(reached);
        for (std::size_t k = 0; k < reached; ++k) {
            p.stddev[k] = std::sqrt(std::max(0.0, acc.m2[k] / static_cast<double>(acc.n[k])));
        }
        p.mean_curve = EntropyCurve(step, std::move(mean));
        report.profiles.push_back(std::move(p));
    }
    return report;
}

void write_profiles(const std::vector<TypeProfile>& profiles, std::ostream& out) {
    out << "file_type,sample_size,prefix_len,mean_entropy,stddev\n";
    char buf[64];
    for (const auto& p : profiles) {
        for (std::size_t k = 0; k < p.mean_curve.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f", p.mean_curve[k], p.stddev[k]);
            out << p.file_type << ',' << p.counts[k] << ',' << p.mean_curve.point(k).prefix_len << ',' << buf
                << '\n';
        }
    }
}

ExclusionResult exclusion_filter(const std::vector<TypeProfile>& profiles, std::size_t at_len, double floor) {
    ExclusionResult r;
    for (const auto& p : profiles) {
        if (p.mean_at(at_len) < floor) {
            r.excluded.push_back(p);
        } else {
            r.kept.push_back(p);
        }
    }
    return r;
}

} // namespace daa
