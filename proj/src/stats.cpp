#include "perckit/stats.hpp"

#include "perckit/errors.hpp"
#include "perckit/io_util.hpp"

#include <cmath>

namespace perckit {

double z_value(double level) {
    if (level == 0.90) return 1.644854;
    if (level == 0.95) return 1.959964;
    if (level == 0.99) return 2.575829;
    throw DomainError("stats: unsupported confidence level " + format_fixed(level, 2) +
                      " (supported: 0.90, 0.95, 0.99)");
}

ConfidenceInterval confidence_interval(const std::vector<double>& samples, double level) {
    if (samples.size() < 2)
        throw DomainError("stats: need at least 2 samples, got " +
                          std::to_string(samples.size()));
    const double z = z_value(level);
    const std::size_t n = samples.size();

    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / static_cast<double>(n);

    double sq = 0.0;
    for (double v : samples) sq += (v - mean) * (v - mean);
    const double s = std::sqrt(sq / static_cast<double>(n - 1));

    ConfidenceInterval ci;
    ci.mean = mean;
    ci.stddev = s;
    ci.half_width = z * s / std::sqrt(static_cast<double>(n));
    ci.level = level;
    ci.n = n;
    return ci;
}

std::string format_interval(const ConfidenceInterval& ci, int decimals) {
    return format_fixed(ci.mean, decimals) + " ± " + format_fixed(ci.half_width, decimals);
}

std::vector<double> load_samples_csv(const std::string& text) {
    std::vector<double> samples;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        double v = parse_double(lines[i], "samples line " + std::to_string(i + 1));
        if (!std::isfinite(v))
            throw FormatError("samples line " + std::to_string(i + 1) +
                              ": values must be finite");
        samples.push_back(v);
    }
    return samples;
}

} // namespace perckit
