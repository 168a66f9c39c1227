#include "bmdcm/constellation.hpp"

#include "bmdcm/quadrature.hpp"
#include "bmdcm/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmdcm {

namespace {

void validate(const Constellation& c) {
    if (c.m < 1) throw ConfigError("constellation: m must be >= 1");
    const std::size_t n = std::size_t{1} << c.m;
    if (c.points.size() != n || c.labels.size() != n || c.dist.size() != n)
        throw ConfigError("constellation: inconsistent sizes");
    if (!(c.delta > 0.0)) throw ConfigError("constellation: delta must be positive");
    double s = 0.0;
    for (double p : c.dist) {
        if (p < 0.0) throw ConfigError("constellation: negative mass");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ConfigError("constellation: distribution does not sum to 1");
}

Constellation base_geometry(int m) {
    Constellation c;
    c.m = m;
    const std::size_t n = std::size_t{1} << m;
    c.points.resize(n);
    c.labels.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        c.points[p] = 2.0 * static_cast<double>(p) - static_cast<double>(n - 1);
        c.labels[p] = static_cast<std::uint32_t>(p ^ (p >> 1));
    }
    return c;
}

} // namespace

double Constellation::mean_point_energy() const {
    double e = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) e += dist[p] * points[p] * points[p];
    return e;
}

double Constellation::entropy_bits() const {
    double h = 0.0;
    for (double p : dist)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double Constellation::level_one_prob(int level) const {
    double p1 = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p)
        if (label_bit(p, level)) p1 += dist[p];
    return p1;
}

double Constellation::level_prior_llr(int level) const {
    const double p1 = level_one_prob(level);
    if (p1 <= 0.0 || p1 >= 1.0)
        throw NumericalError("degenerate bit-level: zero-probability bit value at level " +
                             std::to_string(level));
    return std::log((1.0 - p1) / p1);
}

Constellation Constellation::uniform(int m, double delta) {
    Constellation c = base_geometry(m);
    c.delta = delta;
    c.dist.assign(c.points.size(), 1.0 / static_cast<double>(c.points.size()));
    validate(c);
    return c;
}

Constellation Constellation::uniform_at_snr(int m, double snr_db) {
    Constellation c = uniform(m, 1.0);
    c.delta = std::sqrt(db_to_lin(snr_db) / c.mean_point_energy());
    return c;
}

Constellation Constellation::maxwell_boltzmann(int m, double nu, double delta) {
    if (nu < 0.0) throw ConfigError("maxwell_boltzmann: nu must be >= 0");
    Constellation c = base_geometry(m);
    c.delta = delta;
    c.dist.resize(c.points.size());
    double z = 0.0;
    const double xmax2 = c.points.back() * c.points.back();
    for (std::size_t p = 0; p < c.points.size(); ++p) {
        // shift the exponent by nu*xmax^2 so extreme nu stays representable
        c.dist[p] = std::exp(-nu * (c.points[p] * c.points[p] - xmax2));
        z += c.dist[p];
    }
    for (double& p : c.dist) p /= z;
    validate(c);
    return c;
}

Constellation Constellation::maxwell_boltzmann_at_snr(int m, double nu, double snr_db) {
    Constellation c = maxwell_boltzmann(m, nu, 1.0);
    c.delta = std::sqrt(db_to_lin(snr_db) / c.mean_point_energy());
    return c;
}

double snr_of(const Constellation& c) {
    return lin_to_db(c.delta * c.delta * c.mean_point_energy());
}

double snr_gap_db(double snr_db, double r_tx) {
    if (!(r_tx > 0.0)) throw NumericalError("snr_gap: transmission rate must be positive");
    return snr_db - 10.0 * std::log10(std::exp2(2.0 * r_tx) - 1.0);
}

// ---------------------------------------------------------------------------

Demapper::Demapper(const Constellation& c) : m_(c.m) {
    const std::size_t n = c.size();
    centers_.resize(n);
    logp_.resize(n);
    scratch_.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        centers_[p] = c.delta * c.points[p];
        logp_[p] = c.dist[p] > 0.0 ? std::log(c.dist[p]) : -std::numeric_limits<double>::infinity();
    }
    prior_.resize(m_);
    // The joint-distribution form already contains the prior; for the ablated
    // variant we subtract it, so record it either way (0 for uniform levels).
    for (int lev = 1; lev <= m_; ++lev) {
        const double p1 = c.level_one_prob(lev);
        prior_[lev - 1] = (p1 > 0.0 && p1 < 1.0) ? std::log((1.0 - p1) / p1) : 0.0;
    }
    labels_ = c.labels;
}

void Demapper::demap(double y, double* llrs) const {
    const std::size_t n = centers_.size();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p) {
        const double d = y - centers_[p];
        scratch_[p] = logp_[p] - 0.5 * d * d;
        mx = std::max(mx, scratch_[p]);
    }
    for (std::size_t p = 0; p < n; ++p) scratch_[p] = std::exp(scratch_[p] - mx);
    for (int lev = 1; lev <= m_; ++lev) {
        double s0 = 0.0, s1 = 0.0;
        const int shift = m_ - lev;
        for (std::size_t p = 0; p < n; ++p) {
            if ((labels_[p] >> shift) & 1u) s1 += scratch_[p];
            else s0 += scratch_[p];
        }
        double l = std::log(s0) - std::log(s1);
        if (!include_priors_) l -= prior_[lev - 1];
        llrs[lev - 1] = l;
    }
}

// ---------------------------------------------------------------------------

LevelLlrDensity::LevelLlrDensity(const Constellation& c, int level)
    : c_(c), demap_(c), level_(level) {
    if (level < 1 || level > c.m) throw ConfigError("llr_distribution: level out of range");
    prior_ = c.level_prior_llr(level); // throws on a degenerate level
    for (int b = 0; b < 2; ++b) {
        cond_dist_[b].assign(c.size(), 0.0);
        double z = 0.0;
        for (std::size_t p = 0; p < c.size(); ++p) {
            if (c.label_bit(p, level) == b) {
                cond_dist_[b][p] = c.dist[p];
                z += c.dist[p];
            }
        }
        for (double& v : cond_dist_[b]) v /= z;
    }
}

double LevelLlrDensity::llr_at(double y) const {
    std::vector<double> l(demap_.m());
    demap_.demap(y, l.data());
    return l[level_ - 1];
}

double LevelLlrDensity::sample(int b, Rng& rng) const {
    double u = rng.next_double();
    std::size_t p = 0;
    for (; p + 1 < cond_dist_[b].size(); ++p) {
        if (u < cond_dist_[b][p]) break;
        u -= cond_dist_[b][p];
    }
    const double y = c_.delta * c_.points[p] + rng.next_gaussian();
    return llr_at(y);
}

std::vector<double> LevelLlrDensity::bin_probabilities(int b, const std::vector<double>& edges) const {
    std::vector<double> prob(edges.size() > 0 ? edges.size() - 1 : 0, 0.0);
    const double span = 10.0;
    // y-space composite midpoint rule per conditional mixture component
    const int steps = 40000;
    for (std::size_t p = 0; p < c_.size(); ++p) {
        const double w = cond_dist_[b][p];
        if (w <= 0.0) continue;
        const double c0 = c_.delta * c_.points[p];
        const double h = 2.0 * span / steps;
        for (int i = 0; i < steps; ++i) {
            const double y = c0 - span + (i + 0.5) * h;
            const double l = llr_at(y);
            auto it = std::upper_bound(edges.begin(), edges.end(), l);
            if (it == edges.begin() || it == edges.end()) continue;
            const std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
            const double u = y - c0;
            prob[bin] += w * h * std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
        }
    }
    return prob;
}

LevelLlrDensity llr_distribution(const Constellation& c, int level) {
    return LevelLlrDensity(c, level);
}

// ---------------------------------------------------------------------------

namespace {

struct FusedEval {
    std::vector<double> h_cond;
    double h_xy = 0.0; // H(X|Y)
};

// One pass at a fixed Gauss-Hermite order: all H(B_i|L_i) plus H(X|Y), sharing
// the mixture exponentials across levels.
FusedEval fused_pass(const Constellation& c, int order) {
    const auto& rule = gauss_hermite(order);
    const std::size_t n = c.size();
    const int m = c.m;
    std::vector<double> centers(n), logp(n), e(n);
    for (std::size_t p = 0; p < n; ++p) {
        centers[p] = c.delta * c.points[p];
        logp[p] = c.dist[p] > 0.0 ? std::log(c.dist[p]) : -std::numeric_limits<double>::infinity();
    }
    FusedEval out;
    out.h_cond.assign(m, 0.0);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (std::size_t pc = 0; pc < n; ++pc) {
        if (c.dist[pc] <= 0.0) continue;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double y = centers[pc] + M_SQRT2 * rule.nodes[j];
            const double w = c.dist[pc] * rule.weights[j] * inv_sqrt_pi;
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p < n; ++p) {
                const double d = y - centers[p];
                e[p] = logp[p] - 0.5 * d * d;
                mx = std::max(mx, e[p]);
            }
            double tot = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                e[p] = std::exp(e[p] - mx);
                tot += e[p];
            }
            // per-level conditional entropies
            for (int lev = 1; lev <= m; ++lev) {
                const int shift = m - lev;
                double s1 = 0.0;
                for (std::size_t p = 0; p < n; ++p)
                    if ((c.labels[p] >> shift) & 1u) s1 += e[p];
                const double llr = std::log(tot - s1) - std::log(s1);
                out.h_cond[lev - 1] += w * llr_binary_entropy(llr);
            }
            // symbol posterior entropy
            double hx = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                if (e[p] <= 0.0) continue;
                const double post = e[p] / tot;
                hx -= post * std::log2(post);
            }
            out.h_xy += w * hx;
        }
    }
    return out;
}

double max_abs_diff(const FusedEval& a, const FusedEval& b) {
    double d = std::abs(a.h_xy - b.h_xy);
    for (std::size_t i = 0; i < a.h_cond.size(); ++i)
        d = std::max(d, std::abs(a.h_cond[i] - b.h_cond[i]));
    return d;
}

FusedEval fused_certified(const Constellation& c) {
    FusedEval prev = fused_pass(c, 32);
    for (int order : {64, 128}) {
        FusedEval cur = fused_pass(c, order);
        if (max_abs_diff(prev, cur) < 1e-8) return cur;
        prev = cur;
    }
    // fallback: per-level certified trapezoid through the generic integrator
    Demapper dm(c);
    FusedEval out;
    out.h_cond.assign(c.m, 0.0);
    std::vector<double> l(c.m);
    for (int lev = 1; lev <= c.m; ++lev) {
        double acc = 0.0;
        for (std::size_t p = 0; p < c.size(); ++p) {
            if (c.dist[p] <= 0.0) continue;
            acc += c.dist[p] *
                   gaussian_expectation_certified(
                       [&](double y) {
                           dm.demap(y, l.data());
                           return llr_binary_entropy(l[lev - 1]);
                       },
                       c.delta * c.points[p], 1.0, 1e-8);
        }
        out.h_cond[lev - 1] = acc;
    }
    out.h_xy = prev.h_xy;
    return out;
}

} // namespace

UncertaintySet bit_uncertainties(const Constellation& c, double code_rate) {
    const double cr = code_rate < 0.0 ? static_cast<double>(c.m - 1) / c.m : code_rate;
    FusedEval ev = fused_certified(c);
    UncertaintySet u;
    u.snr_db = snr_of(c);
    u.h_cond = std::move(ev.h_cond);
    u.h_input = c.entropy_bits();
    double sum = 0.0;
    for (double h : u.h_cond) sum += h;
    u.r_bmd = std::max(0.0, u.h_input - sum);
    u.r_tx = u.h_input - (1.0 - cr) * c.m;
    u.symbol_mi = u.h_input - ev.h_xy;
    return u;
}

Constellation shaped_operating_point(int m, double snr_db, ShapedObjective obj) {
    if (m < 2) throw ConfigError("shaped_operating_point: m must be >= 2");
    if (!std::isfinite(snr_db)) throw ConfigError("shaped_operating_point: SNR must be finite");
    const double xmax = static_cast<double>((1 << m) - 1);
    const double lam_hi = 30.0; // nu * xmax^2; beyond this the family is degenerate
    auto score = [&](double lam) {
        const Constellation c = Constellation::maxwell_boltzmann_at_snr(m, lam / (xmax * xmax), snr_db);
        const UncertaintySet u = bit_uncertainties(c);
        return obj == ShapedObjective::SymbolMI ? u.symbol_mi : (u.h_input - (u.h_input - u.r_bmd));
    };
    // golden-section maximization; the objective is unimodal on this family
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = lam_hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = score(x1), f2 = score(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = score(x2);
        }
    }
    const double lam = 0.5 * (a + b);
    if (!std::isfinite(lam)) throw NumericalError("shaped_operating_point: search did not converge");
    return Constellation::maxwell_boltzmann_at_snr(m, lam / (xmax * xmax), snr_db);
}

} // namespace bmdcm
