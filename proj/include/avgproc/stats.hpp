// Small statistics toolbox for the Monte Carlo harness.
#pragma once

#include <vector>

namespace avgproc {

struct SampleStats {
    long n = 0;
    double mean = 0.0;
    double stddev = 0.0;   // sample standard deviation (n-1)
    double stderr_ = 0.0;  // stddev / sqrt(n)
};

SampleStats summarize(const std::vector<double>& xs);
double median(std::vector<double> xs);

// Two-sample Kolmogorov-Smirnov: statistic D and asymptotic p-value.
struct KsResult {
    double statistic;
    double p_value;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// z quantile for a two-sided 99% interval.
inline constexpr double kZ99 = 2.5758293035489004;

}  // namespace avgproc
