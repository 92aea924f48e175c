#include "ips/stats.hpp"

#include <algorithm>
#include <cmath>

namespace ips::stats {

namespace {
double pairwise_sum_range(const double *xs, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_range(xs, half) + pairwise_sum_range(xs + half, n - half);
}
}  // namespace

double pairwise_sum(const std::vector<double> &xs) {
    return xs.empty() ? 0.0 : pairwise_sum_range(xs.data(), xs.size());
}

Moments moments(const std::vector<double> &xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    m.mean = pairwise_sum(xs) / double(m.n);
    std::vector<double> c2(xs.size()), c3(xs.size()), c4(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - m.mean;
        c2[i] = d * d;
        c3[i] = d * d * d;
        c4[i] = d * d * d * d;
    }
    m.m2 = pairwise_sum(c2) / double(m.n);
    m.m3 = pairwise_sum(c3) / double(m.n);
    m.m4 = pairwise_sum(c4) / double(m.n);
    m.variance = m.n > 1 ? m.m2 * double(m.n) / double(m.n - 1) : 0.0;
    m.sd = std::sqrt(m.variance);
    m.se_mean = m.n > 0 ? m.sd / std::sqrt(double(m.n)) : 0.0;
    m.se_variance = m.n > 1 ? std::sqrt(std::max(0.0, m.m4 - m.m2 * m.m2) / double(m.n)) : 0.0;
    if (m.m2 > 0.0) {
        m.skewness = m.m3 / std::pow(m.m2, 1.5);
        m.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
    }
    m.se_skewness = std::sqrt(6.0 / double(m.n));
    m.se_excess_kurtosis = std::sqrt(24.0 / double(m.n));
    return m;
}

CovarianceEstimate covariance(const std::vector<double> &xs, const std::vector<double> &ys) {
    CovarianceEstimate est;
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) return est;
    const double mx = pairwise_sum(xs) / double(n);
    const double my = pairwise_sum(ys) / double(n);
    std::vector<double> prod(n), prod2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (xs[i] - mx) * (ys[i] - my);
        prod[i] = p;
        prod2[i] = p * p;
    }
    const double mp = pairwise_sum(prod) / double(n);
    est.value = mp * double(n) / double(n - 1);
    const double varp = std::max(0.0, pairwise_sum(prod2) / double(n) - mp * mp);
    est.se = std::sqrt(varp / double(n));
    return est;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_normal_statistic(std::vector<double> xs) {
    if (xs.size() < 2) return 0.0;
    const Moments m = moments(xs);
    if (!(m.sd > 0.0)) return 0.0;
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = (xs[i] - m.mean) / m.sd;
        const double cdf = normal_cdf(z);
        d = std::max(d, std::abs(cdf - double(i + 1) / n));
        d = std::max(d, std::abs(cdf - double(i) / n));
    }
    return d;
}

LineFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys) {
    LineFit fit;
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) return fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = double(n) * sxx - sx * sx;
    if (det == 0.0) return fit;
    fit.slope = (double(n) * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / double(n);
    fit.ok = true;
    return fit;
}

double binomial_se(double p_hat, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / double(n));
}

}  // namespace ips::stats
