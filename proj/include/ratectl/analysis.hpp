#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ratectl/rng.hpp"

namespace ratectl {

// output[i] = max(input[i .. i + kernel)), stride 1.
std::vector<double> max_pool_1d(std::span<double const> input, std::size_t kernel);

// y[0] = x[0]; y[i] = (1 - alpha)·y[i-1] + alpha·x[i].
std::vector<double> ewma(std::span<double const> input, double alpha = 0.01);

struct StatReport {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double p_value = 1.0;
};

double sample_mean(std::span<double const> x);
double sample_variance(std::span<double const> x);

// Percentile bootstrap confidence interval of `statistic` (the mean by default).
StatReport bootstrap_ci(std::span<double const> samples, Rng& rng, std::size_t resamples = 10000, double level = 0.95,
    std::function<double(std::span<double const>)> const& statistic = {});

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);
// Student-t CDF with (possibly fractional) degrees of freedom.
double student_t_cdf(double t, double dof);
double normal_cdf(double z);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p_two_sided = 1.0;
    // P-value for the alternative mean(a) < mean(b).
    double p_less = 0.5;
};

WelchResult welch_test(std::span<double const> a, std::span<double const> b);
double welch_t_test(std::span<double const> a, std::span<double const> b);

struct ZTestResult {
    double z = 0.0;
    double p_two_sided = 1.0;
};

ZTestResult two_proportion_z(std::size_t s1, std::size_t n1, std::size_t s2, std::size_t n2);
double two_proportion_z_test(std::size_t s1, std::size_t n1, std::size_t s2, std::size_t n2);

} // namespace ratectl
