#pragma once

#include <string>
#include <vector>

namespace perckit {

struct ConfidenceInterval {
    double mean = 0.0;
    double half_width = 0.0;
    double level = 0.95;
    std::size_t n = 0;
    double stddev = 0.0; // sample standard deviation (n-1 denominator)
};

// z_{alpha/2} for the supported levels 0.90, 0.95, 0.99. Throws DomainError
// for anything else.
double z_value(double level);

// CI = mean +/- z * s / sqrt(n). Requires n >= 2.
ConfidenceInterval confidence_interval(const std::vector<double>& samples,
                                       double level = 0.95);

// "mean ± half_width" with the requested number of decimals.
std::string format_interval(const ConfidenceInterval& ci, int decimals = 6);

// One-column CSV of fps measurements; blank lines ignored.
std::vector<double> load_samples_csv(const std::string& text);

} // namespace perckit
