#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bmdcm {

// Gauss-Hermite rule for weight e^{-t^2}: integral f(t) e^{-t^2} dt ~= sum w_i f(t_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rules; thread-safe after first use of a given order.
const GaussHermiteRule& gauss_hermite(int order);

// E[f(Y)] for Y ~ N(mean, stddev^2) with a single fixed-order rule.
double gaussian_expectation(const std::function<double(double)>& f, double mean, double stddev,
                            int order);

// Certified expectation: escalates Gauss-Hermite order (32 -> 64 -> 128) until two
// successive estimates agree below `tol`; falls back to an adaptive trapezoid on
// mean +- 8 stddev. Throws NumericalError if neither path certifies.
double gaussian_expectation_certified(const std::function<double(double)>& f, double mean,
                                      double stddev, double tol = 1e-8);

} // namespace bmdcm
