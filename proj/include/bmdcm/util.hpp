#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bmdcm {

// Error taxonomy mirrored by the CLI exit codes: config 2, numerical 3, infeasible 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Threshold bisection got a bracket whose ends do not straddle the threshold.
struct BracketError : NumericalError {
    using NumericalError::NumericalError;
};

// SNR is dB-valued at every interface, linear only inside computations.
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double log2_stable(double x) { return std::log2(x); }

// log(1 + e^u) without overflow.
inline double softplus(double u) {
    if (u > 0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

// Binary entropy of the soft bit defined by an LLR l = log(p0/p1), in bits.
// Hb = (p0*softplus(-l) + p1*softplus(l)) / ln 2, numerically safe for |l| large.
inline double llr_binary_entropy(double llr) {
    const double p0 = 1.0 / (1.0 + std::exp(-llr));
    const double p1 = 1.0 - p0;
    return (p0 * softplus(-llr) + p1 * softplus(llr)) / M_LN2;
}

// FNV-1a, used for config hashes and memo keys.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string version_string() { return "0.1.0"; }

} // namespace bmdcm
