#pragma once

#include <cstddef>
#include <vector>

namespace ips::stats {

/// Pairwise summation: order-deterministic and accurate for long vectors.
double pairwise_sum(const std::vector<double> &xs);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double sd = 0.0;
    double se_mean = 0.0;
    double se_variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double se_skewness = 0.0;        // sqrt(6/n)
    double se_excess_kurtosis = 0.0; // sqrt(24/n)
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;  // central sample moments
};

Moments moments(const std::vector<double> &xs);

struct CovarianceEstimate {
    double value = 0.0;
    double se = 0.0;
};

CovarianceEstimate covariance(const std::vector<double> &xs, const std::vector<double> &ys);

/// Kolmogorov-Smirnov distance between the sample and a normal fitted to it.
double ks_normal_statistic(std::vector<double> xs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys);

double binomial_se(double p_hat, std::size_t n);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace ips::stats
