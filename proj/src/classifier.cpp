#include <daa/classifier.hpp>
#include <daa/error.hpp>

#include <algorithm>
#include <fstream>
#include <string>

namespace daa {

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::Encrypted ? "encrypted" : "not-encrypted";
}

DerivedCurve derive(const EntropyCurve& sample, const EntropyCurve& reference) {
    if (sample.step() != reference.step()) {
        throw GridError("sample step " + std::to_string(sample.step()) + " differs from reference step " +
                        std::to_string(reference.step()));
    }
    const std::size_t n = std::min(sample.size(), reference.size());
    DerivedCurve out{sample.step(), std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.deltas[k] = reference[k] - sample[k];
    }
    return out;
}

DerivedCurve derive(const EntropyCurve& sample, const ReferenceCurve& reference) {
    return derive(sample, reference.curve);
}

namespace {

std::pair<std::size_t, std::size_t> grid_range(const DerivedCurve& curve, std::size_t from, std::size_t to) {
    auto on_grid = [&](std::size_t x) {
        return curve.step != 0 && x >= curve.step && x % curve.step == 0 && x <= curve.max_len();
    };
    if (!on_grid(from) || !on_grid(to)) {
        throw GridError("integration bounds [" + std::to_string(from) + ", " + std::to_string(to) +
                        "] are not on the grid (step " + std::to_string(curve.step) + ", max " +
                        std::to_string(curve.max_len()) + ")");
    }
    if (from >= to) {
        throw GridError("integration needs from < to, got [" + std::to_string(from) + ", " + std::to_string(to) +
                        "]");
    }
    return {from / curve.step - 1, to / curve.step - 1};
}

} // namespace

double trapezoid_area(const DerivedCurve& curve, std::size_t from, std::size_t to) {
    const auto [a, b] = grid_range(curve, from, to);
    const auto& f = curve.deltas;
    double interior = 0.0;
    for (std::size_t k = a + 1; k < b; ++k) {
        interior += f[k];
    }
    const double h = static_cast<double>(curve.step);
    return h / 2.0 * (f[a] + 2.0 * interior + f[b]);
}

std::vector<double> trapezoid_segments(const DerivedCurve& curve, std::size_t from, std::size_t to) {
    const auto [a, b] = grid_range(curve, from, to);
    const double h = static_cast<double>(curve.step);
    std::vector<double> out;
    out.reserve(b - a);
    for (std::size_t k = a; k < b; ++k) {
        out.push_back(h * (curve.deltas[k] + curve.deltas[k + 1]) / 2.0);
    }
    return out;
}

std::size_t read_budget(const ClassifyOptions& options) noexcept {
    return options.zero_run_min ? kZeroStripReadAhead * options.header_len : options.header_len;
}

std::vector<std::uint8_t> read_prefix(const std::filesystem::path& path, std::size_t limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> buf(limit);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(limit));
    if (in.bad()) {
        throw IoError("read failed on " + path.string());
    }
    buf.resize(static_cast<std::size_t>(in.gcount()));
    return buf;
}

void check_header_len(const ReferenceCurve& reference, std::size_t header_len) {
    if (!reference.curve.on_grid(header_len)) {
        throw ConfigError("header length " + std::to_string(header_len) + " is not on the reference grid (step " +
                          std::to_string(reference.curve.step()) + ", max " +
                          std::to_string(reference.curve.max_len()) + ")");
    }
}

EntropyCurve header_curve(ByteSpan bytes, std::size_t header_len, std::size_t step,
                          std::optional<std::size_t> zero_run_min) {
    if (!zero_run_min) {
        return entropy_curve(bytes, header_len, step);
    }
    const std::vector<std::uint8_t> kept = strip_zero_runs(bytes, *zero_run_min);
    return entropy_curve(kept, header_len, step);
}

DaaResult classify_bytes(ByteSpan bytes, const ReferenceCurve& reference, const ClassifyOptions& options) {
    check_header_len(reference, options.header_len);
    const std::size_t step = reference.curve.step();
    bytes = bytes.first(std::min(bytes.size(), read_budget(options)));
    if (bytes.empty()) {
        throw ShortFileError("file is empty", 0, 2 * step);
    }

    const EntropyCurve sample = header_curve(bytes, options.header_len, step, options.zero_run_min);
    if (sample.size() < 2) {
        throw ShortFileError("need at least " + std::to_string(2 * step) + " bytes for an area, have " +
                                 std::to_string(sample.size() * step) + " usable",
                             sample.size() * step, 2 * step);
    }
    const DerivedCurve delta = derive(sample, reference);

    DaaResult r;
    r.header_len = delta.max_len();
    r.area = trapezoid_area(delta, step, r.header_len);
    r.threshold = options.threshold;
    r.verdict = decide(r.area, options.threshold);
    r.zero_stripped = options.zero_run_min.has_value();
    r.bytes_read = bytes.size();
    return r;
}

DaaResult classify_file(const std::filesystem::path& path, const ReferenceCurve& reference,
                        const ClassifyOptions& options) {
    check_header_len(reference, options.header_len);
    const std::vector<std::uint8_t> head = read_prefix(path, read_budget(options));
    return classify_bytes(head, reference, options);
}

} // namespace daa
