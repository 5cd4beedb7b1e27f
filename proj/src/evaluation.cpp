#include <daa/error.hpp>
#include <daa/evaluation.hpp>

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace daa {

Outcome score(Verdict verdict, Label label) noexcept {
    const bool positive = verdict == Verdict::Encrypted;
    const bool encrypted = label == Label::Encrypted;
    if (positive) return encrypted ? Outcome::TruePositive : Outcome::FalsePositive;
    return encrypted ? Outcome::FalseNegative : Outcome::TrueNegative;
}

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
    case Outcome::TruePositive: return "TP";
    case Outcome::TrueNegative: return "TN";
    case Outcome::FalsePositive: return "FP";
    case Outcome::FalseNegative: return "FN";
    }
    return "?";
}

void ConfusionMatrix::add(Outcome o) noexcept {
    switch (o) {
    case Outcome::TruePositive: ++tp; break;
    case Outcome::TrueNegative: ++tn; break;
    case Outcome::FalsePositive: ++fp; break;
    case Outcome::FalseNegative: ++fn; break;
    }
}

MetricSet metrics(const ConfusionMatrix& cm) noexcept {
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    MetricSet m;
    m.accuracy = ratio(cm.tp + cm.tn, cm.total());
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    // 2PR/(P+R) == 2tp/(2tp+fp+fn); the count form avoids rounding P and R first.
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
        m.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    }
    return m;
}

std::string format_percent(const std::optional<double>& fraction) {
    if (!fraction) return kUndefinedMetric;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *fraction * 100.0);
    return buf;
}

std::vector<std::size_t> default_header_lens() { return {32, 64, 96, 128, 160, 192, 224, 256}; }

std::vector<double> default_thresholds() { return {8, 24, 40, 56, 72}; }

SweepResult sweep(const std::vector<FileRecord>& records, const ReferenceCurve& reference,
                  const std::vector<std::size_t>& header_lens, const std::vector<double>& thresholds,
                  std::optional<std::size_t> zero_run_min) {
    if (records.empty()) {
        throw ConfigError("sweep needs at least one record");
    }
    if (header_lens.empty() || thresholds.empty()) {
        throw ConfigError("sweep needs at least one header length and one threshold");
    }
    for (std::size_t len : header_lens) check_header_len(reference, len);
    if (zero_run_min && *zero_run_min < 2) {
        throw ConfigError("zero-run minimum must be at least 2");
    }

    const std::size_t step = reference.curve.step();
    const std::size_t longest = *std::max_element(header_lens.begin(), header_lens.end());
    const ClassifyOptions widest{longest, 0.0, zero_run_min};

    // areas[i][l] for record i at header_lens[l]; empty when the file was skipped.
    std::vector<std::vector<double>> areas(records.size());
    std::vector<std::string> errors(records.size());
    detail::parallel_for(records.size(), [&](std::size_t i) {
        try {
            const auto head = read_prefix(records[i].path, read_budget(widest));
            std::vector<double> row;
            row.reserve(header_lens.size());
            // Without stripping every length shares one curve; with stripping each
            // length sees exactly the bytes classify_file would have read.
            std::optional<EntropyCurve> shared;
            if (!zero_run_min) shared = header_curve(head, longest, step, std::nullopt);
            for (std::size_t len : header_lens) {
                EntropyCurve curve;
                if (shared) {
                    curve = shared->truncated(len);
                } else {
                    const ClassifyOptions opt{len, 0.0, zero_run_min};
                    const ByteSpan window = ByteSpan(head).first(std::min(head.size(), read_budget(opt)));
                    curve = header_curve(window, len, step, zero_run_min);
                }
                if (curve.size() < 2) {
                    throw ShortFileError("fewer than two grid points at header length " + std::to_string(len),
                                         curve.max_len(), 2 * step);
                }
                const DerivedCurve d = derive(curve, reference);
                row.push_back(trapezoid_area(d, step, d.max_len()));
            }
            areas[i] = std::move(row);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    SweepResult result;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (areas[i].empty()) result.skipped.push_back({records[i].path, errors[i]});
    }

    SweepGrid& grid = result.grid;
    grid.header_lens = header_lens;
    grid.thresholds = thresholds;
    grid.cells.reserve(header_lens.size() * thresholds.size());
    for (std::size_t l = 0; l < header_lens.size(); ++l) {
        for (double t : thresholds) {
            SweepCell cell;
            cell.header_len = header_lens[l];
            cell.threshold = t;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (areas[i].empty()) continue;
                const Outcome o = score(decide(areas[i][l], t), records[i].label);
                cell.cm.add(o);
                if (o == Outcome::FalsePositive) ++cell.errors_by_type[records[i].file_type].fp;
                if (o == Outcome::FalseNegative) ++cell.errors_by_type[records[i].file_type].fn;
            }
            cell.metrics = metrics(cell.cm);
            grid.cells.push_back(std::move(cell));
        }
    }
    return result;
}

namespace {

std::string format_threshold(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

} // namespace

void write_sweep_csv(const SweepGrid& grid, std::ostream& out) {
    out << "header_len,threshold,tp,tn,fp,fn,accuracy,precision,recall,f1\n";
    for (const auto& c : grid.cells) {
        out << c.header_len << ',' << format_threshold(c.threshold) << ',' << c.cm.tp << ',' << c.cm.tn << ','
            << c.cm.fp << ',' << c.cm.fn << ',' << format_percent(c.metrics.accuracy) << ','
            << format_percent(c.metrics.precision) << ',' << format_percent(c.metrics.recall) << ','
            << format_percent(c.metrics.f1) << '\n';
    }
}

void write_error_breakdown_csv(const SweepGrid& grid, std::ostream& out) {
    out << "header_len,threshold,file_type,fp,fn\n";
    for (const auto& c : grid.cells) {
        for (const auto& [type, e] : c.errors_by_type) {
            out << c.header_len << ',' << format_threshold(c.threshold) << ',' << type << ',' << e.fp << ','
                << e.fn << '\n';
        }
    }
}

void write_sweep_json(const SweepGrid& grid, std::ostream& out) {
    using nlohmann::json;
    auto metric = [](const std::optional<double>& v) -> json {
        if (!v) return nullptr;
        return std::stod(format_percent(v));
    };
    json cells = json::array();
    for (const auto& c : grid.cells) {
        json errors = json::object();
        for (const auto& [type, e] : c.errors_by_type) errors[type] = {{"fp", e.fp}, {"fn", e.fn}};
        cells.push_back({{"header_len", c.header_len},
                         {"threshold", c.threshold},
                         {"tp", c.cm.tp},
                         {"tn", c.cm.tn},
                         {"fp", c.cm.fp},
                         {"fn", c.cm.fn},
                         {"accuracy", metric(c.metrics.accuracy)},
                         {"precision", metric(c.metrics.precision)},
                         {"recall", metric(c.metrics.recall)},
                         {"f1", metric(c.metrics.f1)},
                         {"errors_by_type", std::move(errors)}});
    }
    out << json{{"header_lens", grid.header_lens}, {"thresholds", grid.thresholds}, {"cells", std::move(cells)}}
               .dump(2)
        << '\n';
}

} // namespace daa
