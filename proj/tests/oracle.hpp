// Test-only reference computations, written independently of the library
// code paths they check.

#ifndef DAA_TESTS_ORACLE_HPP
#define DAA_TESTS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#ifndef DAA_TEST_DATA_DIR
#error "DAA_TEST_DATA_DIR must be defined"
#endif

namespace oracle {

inline std::filesystem::path data(const std::string& name) {
    return std::filesystem::path(DAA_TEST_DATA_DIR) / name;
}

inline std::vector<std::uint8_t> read_all(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_all(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

/// Entropy by counting symbols in a map and summing p*log(p)/log(2).
inline double entropy(const std::uint8_t* first, std::size_t n) {
    std::map<int, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[first[i]];
    double h = 0.0;
    for (const auto& [sym, c] : counts) {
        const double p = double(c) / double(n);
        h += p * std::log(p) / std::log(2.0);
    }
    return -h;
}

/// Entropy of every grid prefix, each recomputed from scratch.
inline std::vector<double> curve(const std::vector<std::uint8_t>& bytes, std::size_t max_len, std::size_t step) {
    std::vector<double> out;
    for (std::size_t len = step; len <= max_len && len <= bytes.size(); len += step) {
        out.push_back(entropy(bytes.data(), len));
    }
    return out;
}

/// Sum of individual trapezoids over consecutive points.
inline double area(const std::vector<double>& deltas, double h) {
    double a = 0.0;
    for (std::size_t k = 0; k + 1 < deltas.size(); ++k) a += h * (deltas[k] + deltas[k + 1]) / 2.0;
    return a;
}

/// Zero-run removal by run-length encoding the input and dropping long zero runs.
inline std::vector<std::uint8_t> strip(const std::vector<std::uint8_t>& in, std::size_t min_run) {
    std::vector<std::pair<std::uint8_t, std::size_t>> runs;
    for (std::uint8_t b : in) {
        if (!runs.empty() && runs.back().first == b) ++runs.back().second;
        else runs.push_back({b, 1});
    }
    std::vector<std::uint8_t> out;
    for (const auto& [b, n] : runs) {
        if (b == 0 && n >= min_run) continue;
        out.insert(out.end(), n, b);
    }
    return out;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937& rng, std::size_t n, int alphabet = 256) {
    std::uniform_int_distribution<int> d(0, alphabet - 1);
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(d(rng));
    return v;
}

} // namespace oracle

#endif // DAA_TESTS_ORACLE_HPP
