#include "bmdcm/quadrature.hpp"

#include "bmdcm/util.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace bmdcm {

namespace {

// Nodes by Newton iteration on the orthonormal Hermite recurrence
//   p_{k+1}(t) = t*sqrt(2/(k+1))*p_k(t) - sqrt(k/(k+1))*p_{k-1}(t),
// weights from the Christoffel sum: w_i = sqrt(pi) / sum_k p_k(t_i)^2.
GaussHermiteRule build_rule(int n) {
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pim4 = 0.7511255444649425; // pi^{-1/4}, normalizes p_0
    const int mid = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < mid; ++i) {
        // initial guesses, standard asymptotic seeds
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[n - 1];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[n - 2];
        } else {
            z = 2.0 * z - rule.nodes[n - i + 1];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (k + 1)) * p2 - std::sqrt(static_cast<double>(k) / (k + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2; // p_n'(z) = sqrt(2n) p_{n-1}(z)
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[n - 1 - i] = z;
        rule.nodes[i] = -z;
        const double w = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    static std::mutex mu;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double gaussian_expectation(const std::function<double(double)>& f, double mean, double stddev,
                            int order) {
    const auto& rule = gauss_hermite(order);
    const double scale = M_SQRT2 * stddev;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mean + scale * rule.nodes[i]);
    }
    return acc / std::sqrt(M_PI);
}

double gaussian_expectation_certified(const std::function<double(double)>& f, double mean,
                                      double stddev, double tol) {
    double prev = gaussian_expectation(f, mean, stddev, 32);
    for (int order : {64, 128}) {
        const double cur = gaussian_expectation(f, mean, stddev, order);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    // adaptive trapezoid on +-8 sigma, doubling until certified
    const double a = mean - 8.0 * stddev;
    const double b = mean + 8.0 * stddev;
    const double inv_norm = 1.0 / (stddev * std::sqrt(2.0 * M_PI));
    auto dens = [&](double y) {
        const double u = (y - mean) / stddev;
        return inv_norm * std::exp(-0.5 * u * u) * f(y);
    };
    int n = 512;
    double h = (b - a) / n;
    double t = 0.5 * (dens(a) + dens(b));
    for (int i = 1; i < n; ++i) t += dens(a + i * h);
    t *= h;
    for (int pass = 0; pass < 12; ++pass) {
        double mid_sum = 0.0;
        for (int i = 0; i < n; ++i) mid_sum += dens(a + (i + 0.5) * h);
        const double t2 = 0.5 * t + 0.5 * h * mid_sum;
        n *= 2;
        h *= 0.5;
        if (std::abs(t2 - t) < tol) return t2;
        t = t2;
    }
    throw NumericalError("quadrature did not certify to tolerance");
}

} // namespace bmdcm
