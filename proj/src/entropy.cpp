#include <daa/entropy.hpp>
#include <daa/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace daa {

double entropy_from_histogram(const ByteHistogram& counts, std::uint64_t total) {
    if (total == 0) {
        throw DomainError("entropy of an empty fragment is undefined");
    }
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) {
            continue;
        }
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    // A single-symbol histogram evaluates to -0.0.
    return h <= 0.0 ? 0.0 : h;
}

double shannon_entropy(ByteSpan fragment) {
    ByteHistogram counts{};
    for (std::uint8_t b : fragment) {
        ++counts[b];
    }
    return entropy_from_histogram(counts, fragment.size());
}

EntropyCurve::EntropyCurve(std::size_t step, std::vector<double> values)
    : step_(step), values_(std::move(values)) {
    if (step_ == 0) {
        throw GridError("curve step must be positive");
    }
}

bool EntropyCurve::on_grid(std::size_t prefix_len) const noexcept {
    return prefix_len >= step_ && prefix_len % step_ == 0 && prefix_len <= max_len();
}

double EntropyCurve::at(std::size_t prefix_len) const {
    if (!on_grid(prefix_len)) {
        throw GridError("prefix length " + std::to_string(prefix_len) + " is not on the curve grid (step " +
                        std::to_string(step_) + ", max " + std::to_string(max_len()) + ")");
    }
    return values_[prefix_len / step_ - 1];
}

EntropyCurve EntropyCurve::truncated(std::size_t len) const {
    const std::size_t keep = std::min(values_.size(), len / step_);
    return EntropyCurve(step_, std::vector<double>(values_.begin(), values_.begin() + keep));
}

EntropyCurve entropy_curve(ByteSpan bytes, std::size_t max_len, std::size_t step) {
    if (step == 0) {
        throw ConfigError("step must be at least 1");
    }
    if (max_len == 0 || max_len % step != 0) {
        throw ConfigError("max_len " + std::to_string(max_len) + " is not a positive multiple of step " +
                          std::to_string(step));
    }
    if (bytes.size() < step) {
        throw ShortFileError("need at least " + std::to_string(step) + " bytes, have " +
                                 std::to_string(bytes.size()),
                             bytes.size(), step);
    }

    const std::size_t limit = std::min(max_len, bytes.size() - bytes.size() % step);
    std::vector<double> values;
    values.reserve(limit / step);

    ByteHistogram counts{};
    for (std::size_t i = 0; i < limit; ++i) {
        ++counts[bytes[i]];
        if ((i + 1) % step == 0) {
            values.push_back(entropy_from_histogram(counts, i + 1));
        }
    }
    return EntropyCurve(step, std::move(values));
}

std::vector<std::uint8_t> strip_zero_runs(ByteSpan bytes, std::size_t min_run) {
    if (min_run < 2) {
        throw ConfigError("zero-run minimum must be at least 2, got " + std::to_string(min_run));
    }
    std::vector<std::uint8_t> out;
    out.reserve(bytes.size());

    std::size_t i = 0;
    while (i < bytes.size()) {
        if (bytes[i] != 0) {
            out.push_back(bytes[i++]);
            continue;
        }
        std::size_t end = i;
        while (end < bytes.size() && bytes[end] == 0) {
            ++end;
        }
        if (end - i < min_run) {
            out.insert(out.end(), end - i, std::uint8_t{0});
        }
        i = end;
    }
    return out;
}

} // namespace daa
