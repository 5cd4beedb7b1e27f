#include "cli.hpp"

#include <daa/corpus.hpp>
#include <daa/error.hpp>
#include <daa/evaluation.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

namespace daa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    if (step == 0) throw ConfigError("--step must be at least 1");
    if (max_len == 0 || max_len % step != 0) {
        throw ConfigError("--max-len " + std::to_string(max_len) + " must be a positive multiple of --step " +
                          std::to_string(step));
    }
    if (header_len == 0 || header_len % step != 0) {
        throw ConfigError("--header-len " + std::to_string(header_len) + " must be a positive multiple of --step " +
                          std::to_string(step));
    }
    if (header_len > max_len) {
        throw ConfigError("--header-len " + std::to_string(header_len) + " exceeds --max-len " +
                          std::to_string(max_len));
    }
    if (zero_run_min == 1) throw ConfigError("--zero-run-min must be 0 (off) or at least 2");
    if (sample_count == 0) throw ConfigError("--samples must be at least 1");
}

ReferenceCurve resolve_reference(const RunConfig& config) {
    if (config.reference_path.empty()) {
        return build_reference(config.seed, config.sample_count, config.max_len, config.step);
    }
    if (!fs::exists(config.reference_path)) {
        throw ConfigError("reference file not found: " + config.reference_path);
    }
    ReferenceCurve ref = load_reference(config.reference_path);
    if (ref.curve.step() != config.step) {
        throw ConfigError("reference step " + std::to_string(ref.curve.step()) + " does not match --step " +
                          std::to_string(config.step));
    }
    return ref;
}

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string fixed3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

/// Destination for an artifact: the --out file, or stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : to_file_(!path.empty()), fallback_(fallback) {
        if (to_file_) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw IoError("cannot write " + path);
        }
    }
    std::ostream& stream() { return to_file_ ? file_ : fallback_; }
    bool to_file() const { return to_file_; }

private:
    bool to_file_;
    std::ofstream file_;
    std::ostream& fallback_;
};

/// One-line summaries go to stdout unless stdout carries the artifact itself.
std::ostream& summary_stream(const Sink& sink, std::ostream& out, std::ostream& err) {
    return sink.to_file() ? out : err;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        std::error_code ec;
        if (fs::is_directory(in, ec)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(in, ec)) {
                if (e.is_regular_file()) found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.emplace_back(in);
        }
    }
    return files;
}

struct FileOutcome {
    fs::path path;
    std::optional<DaaResult> result;
    std::string error;
};

std::vector<FileOutcome> classify_all(const std::vector<fs::path>& files, const ReferenceCurve& ref,
                                      const ClassifyOptions& options) {
    std::vector<FileOutcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            outcomes[i].path = files[i];
            try {
                outcomes[i].result = classify_file(files[i], ref, options);
            } catch (const Error& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(files.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    return outcomes;
}

void print_outcomes(const std::vector<FileOutcome>& outcomes, OutputFormat format, std::ostream& os) {
    if (format == OutputFormat::Csv) os << "path,area,verdict,header_len,threshold,error\n";
    for (const auto& o : outcomes) {
        const std::string path = o.path.string();
        if (!o.result) {
            switch (format) {
            case OutputFormat::Text: os << path << " error=" << o.error << '\n'; break;
            case OutputFormat::Csv: os << csv_field(path) << ",,error,,," << csv_field(o.error) << '\n'; break;
            case OutputFormat::Json: os << json{{"path", path}, {"error", o.error}}.dump() << '\n'; break;
            }
            continue;
        }
        const DaaResult& r = *o.result;
        switch (format) {
        case OutputFormat::Text:
            os << path << " area=" << fixed3(r.area) << " verdict=" << to_string(r.verdict) << '\n';
            break;
        case OutputFormat::Csv:
            os << csv_field(path) << ',' << fixed3(r.area) << ',' << to_string(r.verdict) << ',' << r.header_len
               << ',' << fixed3(r.threshold) << ",\n";
            break;
        case OutputFormat::Json:
            os << json{{"path", path},
                       {"area", round3(r.area)},
                       {"verdict", to_string(r.verdict)},
                       {"header_len", r.header_len},
                       {"threshold", round3(r.threshold)}}
                      .dump()
               << '\n';
            break;
        }
    }
}

int cmd_classify(const RunConfig& config, const std::vector<std::string>& inputs, std::ostream& out,
                 std::ostream& err) {
    const ReferenceCurve ref = resolve_reference(config);
    check_header_len(ref, config.header_len);
    const ClassifyOptions options{config.header_len, config.threshold, config.zero_run()};

    const auto outcomes = classify_all(expand_inputs(inputs), ref, options);
    Sink sink(config.out_path, out);
    print_outcomes(outcomes, config.output_format, sink.stream());

    const auto failed = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.result; });
    const auto encrypted = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) {
        return o.result && o.result->verdict == Verdict::Encrypted;
    });
    if (sink.to_file() || failed > 0) {
        summary_stream(sink, out, err) << "classified " << outcomes.size() - failed << " of " << outcomes.size()
                                       << " files, " << encrypted << " encrypted, " << failed << " failed\n";
    }
    return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_reference(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const ReferenceCurve ref = build_reference(config.seed, config.sample_count, config.max_len, config.step);
    Sink sink(config.out_path, out);
    if (config.output_format == OutputFormat::Json) {
        json points = json::array();
        for (std::size_t k = 0; k < ref.curve.size(); ++k) {
            points.push_back({{"prefix_len", ref.curve.point(k).prefix_len}, {"entropy", ref.curve[k]}});
        }
        sink.stream() << json{{"seed", ref.seed},
                              {"samples", ref.sample_count},
                              {"generator", ref.generator_id},
                              {"step", ref.curve.step()},
                              {"points", points}}
                             .dump(2)
                      << '\n';
    } else {
        write_reference(ref, sink.stream());
    }
    summary_stream(sink, out, err) << "reference: " << ref.curve.size() << " points to " << ref.curve.max_len()
                                   << " bytes, seed " << ref.seed << ", " << ref.sample_count << " samples\n";
    return kExitOk;
}

int cmd_profile(const RunConfig& config, const std::string& manifest_path, std::optional<double> floor,
                std::size_t at_len, std::ostream& out, std::ostream& err) {
    const Manifest manifest = load_manifest(manifest_path);
    for (const auto& w : manifest.warnings) err << "warning: " << w << '\n';
    const ProfileReport report = profile_corpus(manifest.records, config.step, config.max_len, config.zero_run());

    std::vector<TypeProfile> shown = report.profiles;
    std::vector<TypeProfile> excluded;
    if (floor) {
        auto split = exclusion_filter(report.profiles, at_len, *floor);
        shown = std::move(split.kept);
        excluded = std::move(split.excluded);
    }

    Sink sink(config.out_path, out);
    if (config.output_format == OutputFormat::Json) {
        json arr = json::array();
        for (const auto& p : shown) {
            json pts = json::array();
            for (std::size_t k = 0; k < p.mean_curve.size(); ++k) {
                pts.push_back({{"prefix_len", p.mean_curve.point(k).prefix_len},
                               {"sample_size", p.counts[k]},
                               {"mean_entropy", p.mean_curve[k]},
                               {"stddev", p.stddev[k]}});
            }
            arr.push_back({{"file_type", p.file_type}, {"sample_size", p.sample_size}, {"points", pts}});
        }
        sink.stream() << json{{"stddev", "population"}, {"profiles", arr}}.dump(2) << '\n';
    } else {
        sink.stream() << "# stddev=population\n";
        write_profiles(shown, sink.stream());
    }

    for (const auto& s : report.skipped) err << "skipped " << s.path.string() << ": " << s.reason << '\n';
    auto& summary = summary_stream(sink, out, err);
    summary << "profiled " << manifest.records.size() - report.skipped.size() << " files in "
            << report.profiles.size() << " types, " << report.skipped.size() << " skipped";
    if (floor) {
        summary << ", excluded below " << *floor << " at " << at_len << " bytes:";
        for (const auto& p : excluded) summary << ' ' << p.file_type;
    }
    summary << '\n';
    return report.skipped.empty() ? kExitOk : kExitPartial;
}

int cmd_generate(const RunConfig& config, const CorpusSpec& spec, std::ostream& out, std::ostream& err) {
    if (config.out_path.empty()) throw ConfigError("generate needs --out <directory>");
    const Manifest m = generate_synthetic_corpus(config.seed, config.out_path, spec);
    for (const auto& w : m.warnings) err << "warning: " << w << '\n';
    const auto encrypted = std::count_if(m.records.begin(), m.records.end(),
                                         [](const FileRecord& r) { return r.label == Label::Encrypted; });
    out << "generated " << m.records.size() << " files (" << encrypted << " encrypted) in " << config.out_path
        << ", manifest " << (fs::path(config.out_path) / kManifestFileName).string() << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& config, const std::string& manifest_path, std::vector<std::size_t> lens,
              std::vector<double> thresholds, const std::string& errors_out, std::ostream& out,
              std::ostream& err) {
    if (lens.empty()) lens = default_header_lens();
    if (thresholds.empty()) thresholds = default_thresholds();
    for (std::size_t len : lens) {
        if (len == 0 || len % config.step != 0 || len > config.max_len) {
            throw ConfigError("header length " + std::to_string(len) + " must be a multiple of --step within --max-len");
        }
    }
    const ReferenceCurve ref = resolve_reference(config);
    const Manifest manifest = load_manifest(manifest_path);
    for (const auto& w : manifest.warnings) err << "warning: " << w << '\n';

    const SweepResult result = sweep(manifest.records, ref, lens, thresholds, config.zero_run());
    Sink sink(config.out_path, out);
    if (config.output_format == OutputFormat::Json) {
        write_sweep_json(result.grid, sink.stream());
    } else {
        write_sweep_csv(result.grid, sink.stream());
    }
    if (!errors_out.empty()) {
        Sink errors(errors_out, out);
        write_error_breakdown_csv(result.grid, errors.stream());
    }

    for (const auto& s : result.skipped) err << "skipped " << s.path.string() << ": " << s.reason << '\n';
    const auto best = std::max_element(result.grid.cells.begin(), result.grid.cells.end(),
                                       [](const SweepCell& a, const SweepCell& b) {
                                           return a.metrics.accuracy.value_or(-1) < b.metrics.accuracy.value_or(-1);
                                       });
    summary_stream(sink, out, err) << "swept " << manifest.records.size() - result.skipped.size() << " files over "
                                   << result.grid.cells.size() << " cells, best accuracy "
                                   << format_percent(best->metrics.accuracy) << "% at header_len "
                                   << best->header_len << " threshold " << best->threshold << '\n';
    return result.skipped.empty() ? kExitOk : kExitPartial;
}

void add_grid_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--step", c.step, "Grid spacing in bytes")->capture_default_str();
    sub.add_option("--max-len", c.max_len, "Longest header prefix in bytes")->capture_default_str();
}

void add_reference_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--reference", c.reference_path, "Reference curve CSV (built from --seed if omitted)");
    sub.add_option("--seed", c.seed, "Seed for the pseudo-random reference")->capture_default_str();
    sub.add_option("--samples", c.sample_count, "Random sequences averaged into the reference")
        ->capture_default_str();
}

void add_format_option(CLI::App& sub, RunConfig& c, bool allow_text) {
    std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
    if (allow_text) formats.emplace("text", OutputFormat::Text);
    sub.add_option("--format", c.output_format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Header entropy differential area analysis: detect encrypted files from their first bytes"};
    app.require_subcommand(1);

    RunConfig c;
    std::vector<std::string> inputs;
    std::string manifest_path;
    std::optional<double> floor;
    std::size_t at_len = 40;
    CorpusSpec corpus{.random = 100, .text = 50, .structured = 50, .compressed = 0};
    std::vector<std::size_t> lens;
    std::vector<double> thresholds;
    std::string errors_out;

    auto* reference = app.add_subcommand("reference", "Build a random-data reference curve");
    add_grid_options(*reference, c);
    reference->add_option("--seed", c.seed, "Generator seed")->capture_default_str();
    reference->add_option("--samples", c.sample_count, "Random sequences to average")->capture_default_str();
    reference->add_option("--out", c.out_path, "Output CSV (stdout if omitted)");
    add_format_option(*reference, c, false);

    auto* classify = app.add_subcommand("classify", "Classify files as encrypted or not");
    add_grid_options(*classify, c);
    add_reference_options(*classify, c);
    classify->add_option("--header-len", c.header_len, "Header bytes analysed")->capture_default_str();
    classify->add_option("--threshold", c.threshold, "Area threshold in Bit-Bytes")->capture_default_str();
    classify->add_option("--zero-run-min", c.zero_run_min, "Strip zero runs this long (0 disables)")
        ->capture_default_str();
    classify->add_option("--out", c.out_path, "Write results here instead of stdout");
    add_format_option(*classify, c, true);
    classify->add_option("paths", inputs, "Files or directories")->required();

    auto* profile = app.add_subcommand("profile", "Per-type mean and stddev of header entropy curves");
    add_grid_options(*profile, c);
    profile->add_option("--zero-run-min", c.zero_run_min, "Strip zero runs this long (0 disables)")
        ->capture_default_str();
    profile->add_option("--floor", floor, "Exclude types whose mean at --at-len is below this");
    profile->add_option("--at-len", at_len, "Prefix length for --floor")->capture_default_str();
    profile->add_option("--out", c.out_path, "Output CSV (stdout if omitted)");
    add_format_option(*profile, c, false);
    profile->add_option("manifest", manifest_path, "Manifest (JSON lines)")->required();

    auto* generate = app.add_subcommand("generate", "Write a seeded synthetic corpus and manifest");
    generate->add_option("--seed", c.seed, "Corpus seed")->capture_default_str();
    generate->add_option("--out", c.out_path, "Output directory")->required();
    generate->add_option("--random", corpus.random, "Encrypted-proxy files")->capture_default_str();
    generate->add_option("--text", corpus.text, "Plaintext files")->capture_default_str();
    generate->add_option("--structured", corpus.structured, "Structured low-entropy files")->capture_default_str();
    generate->add_option("--compressed", corpus.compressed, "Compressed plaintext files")->capture_default_str();
    generate->add_option("--compressor", corpus.compressor, "Shell command compressing stdin to stdout")
        ->capture_default_str();
    generate->add_option("--min-size", corpus.min_size, "Smallest file in bytes")->capture_default_str();
    generate->add_option("--max-size", corpus.max_size, "Largest file in bytes")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy/precision/recall/F1 over header lengths and thresholds");
    add_grid_options(*sweep_cmd, c);
    add_reference_options(*sweep_cmd, c);
    sweep_cmd->add_option("--header-lens", lens, "Comma-separated header lengths")->delimiter(',');
    sweep_cmd->add_option("--thresholds", thresholds, "Comma-separated thresholds")->delimiter(',');
    sweep_cmd->add_option("--zero-run-min", c.zero_run_min, "Strip zero runs this long (0 disables)")
        ->capture_default_str();
    sweep_cmd->add_option("--out", c.out_path, "Output file (stdout if omitted)");
    sweep_cmd->add_option("--errors-out", errors_out, "Per-type FP/FN breakdown CSV");
    add_format_option(*sweep_cmd, c, false);
    sweep_cmd->add_option("manifest", manifest_path, "Manifest (JSON lines)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (classify->parsed()) c.command = Command::Classify;
        else if (reference->parsed()) c.command = Command::Reference;
        else if (profile->parsed()) c.command = Command::Profile;
        else if (generate->parsed()) c.command = Command::Generate;
        else c.command = Command::Sweep;

        if (c.command != Command::Classify && c.output_format == OutputFormat::Text) {
            c.output_format = OutputFormat::Csv;
        }
        // header_len only matters to classify; keep it within range for the others.
        if (c.command != Command::Classify) c.header_len = std::min(c.header_len, c.max_len);
        c.validate();

        switch (c.command) {
        case Command::Classify: return cmd_classify(c, inputs, out, err);
        case Command::Reference: return cmd_reference(c, out, err);
        case Command::Profile: return cmd_profile(c, manifest_path, floor, at_len, out, err);
        case Command::Generate: return cmd_generate(c, corpus, out, err);
        case Command::Sweep: return cmd_sweep(c, manifest_path, lens, thresholds, errors_out, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace daa::cli
