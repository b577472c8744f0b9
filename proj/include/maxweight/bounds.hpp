#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "maxweight/lyapunov.hpp"
#include "maxweight/model.hpp"
#include "maxweight/policy.hpp"
#include "maxweight/rng.hpp"

namespace maxweight {

/// gamma = (1 - rho) / (2 M^{alpha/(alpha+1)}), the uniform drift margin.
inline double gamma_margin(double rho, std::size_t m_queues, double alpha) {
    check_alpha(alpha);
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("gamma_margin: requires rho < 1");
    return (1.0 - rho) / (2.0 * std::pow(static_cast<double>(m_queues), alpha / (alpha + 1.0)));
}

inline constexpr std::size_t kNuBarExactCap = 20;

/// nu_bar = E[ ||a(1)||_{alpha+1} ]: exact enumeration of the 2^M Bernoulli
/// outcomes for M <= 20, Monte Carlo (1e6 draws on the given stream) beyond.
inline double nu_bar(const ArrivalRates& lambda, double alpha,
                     SeededRng rng = SeededRng(0x6e75626172ull)) {
    check_alpha(alpha);
    check_rates(lambda);
    const std::size_t m = lambda.size();
    if (m <= kNuBarExactCap) {
        double total = 0.0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            double p = 1.0;
            unsigned ones = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (mask >> i & 1) {
                    p *= lambda.rates[i];
                    ++ones;
                } else {
                    p *= 1.0 - lambda.rates[i];
                }
            }
            if (p > 0.0 && ones > 0)
                total += p * std::pow(static_cast<double>(ones), 1.0 / (alpha + 1.0));
        }
        return total;
    }
    const std::size_t samples = 1000000;
    double total = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        unsigned ones = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (rng.next_unit() < lambda.rates[i]) ++ones;
        if (ones > 0) total += std::pow(static_cast<double>(ones), 1.0 / (alpha + 1.0));
    }
    return total / static_cast<double>(samples);
}

/// Constants feeding the stationary tail bounds. B is the empirically
/// calibrated drift threshold (see simulate.hpp); the alpha < 1 cases use
/// B' = B + 2 M^{1/(alpha+1)} to bridge between L_alpha and the norm.
struct TailBoundConstants {
    double nu_bar = 0.0;
    double gamma = 0.0;
    double nu_max = 0.0;
    double B = 0.0;

    static TailBoundConstants make(const ArrivalRates& lambda, double rho, std::size_t m_queues,
                                   double alpha, double calibrated_B) {
        TailBoundConstants c;
        c.nu_bar = maxweight::nu_bar(lambda, alpha);
        c.gamma = gamma_margin(rho, m_queues, alpha);
        const double step = std::pow(static_cast<double>(m_queues), 1.0 / (alpha + 1.0));
        c.nu_max = alpha >= 1.0 ? step : 5.0 * step;
        c.B = calibrated_B;
        return c;
    }

    double b_prime(std::size_t m_queues, double alpha) const {
        return B + 2.0 * std::pow(static_cast<double>(m_queues), 1.0 / (alpha + 1.0));
    }
};

struct TailBound {
    double threshold = 0.0;
    double probability = 0.0;
};

/// Stationary tail bound at level ell:
///   alpha >= 1:   P(||Q|| > B  + 2 M^{1/(a+1)} ell) <= (nu/(nu+gamma))^{ell+1}
///   alpha < 1:    P(||Q|| > B' + 10 M^{1/(a+1)} ell) <= (5nu/(5nu+gamma))^{ell+1}
inline TailBound theorem2_tail_bound(std::size_t ell, const TailBoundConstants& c, double alpha,
                                     std::size_t m_queues) {
    check_alpha(alpha);
    const double step = std::pow(static_cast<double>(m_queues), 1.0 / (alpha + 1.0));
    TailBound tb;
    if (alpha >= 1.0) {
        tb.threshold = c.B + 2.0 * step * static_cast<double>(ell);
        tb.probability = std::pow(c.nu_bar / (c.nu_bar + c.gamma), static_cast<double>(ell) + 1.0);
    } else {
        tb.threshold = c.b_prime(m_queues, alpha) + 10.0 * step * static_cast<double>(ell);
        tb.probability =
            std::pow(5.0 * c.nu_bar / (5.0 * c.nu_bar + c.gamma), static_cast<double>(ell) + 1.0);
    }
    return tb;
}

/// K-bar(alpha, M) = (alpha-1)^{alpha-1} 2^{alpha(alpha-1)} M^alpha + alpha M,
/// with 0^0 := 1 so K-bar(1, M) = 2M.
inline double excursion_kbar(double alpha, std::size_t m_queues) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("excursion_kbar: requires alpha >= 1");
    const double M = static_cast<double>(m_queues);
    const double lead = alpha == 1.0 ? 1.0 : std::pow(alpha - 1.0, alpha - 1.0);
    return lead * std::pow(2.0, alpha * (alpha - 1.0)) * std::pow(M, alpha) + alpha * M;
}

/// Uncapped excursion bound  K(alpha,M) T / ((1-rho)^{alpha-1} b^{alpha+1})
/// with K = (alpha+1) K-bar.
inline double theorem3_excursion_bound_raw(std::int64_t horizon, double b, double alpha,
                                           std::size_t m_queues, double rho) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("theorem3_excursion_bound: requires alpha >= 1");
    if (!(b > 0.0)) throw std::invalid_argument("theorem3_excursion_bound: requires b > 0");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("theorem3_excursion_bound: requires rho < 1");
    if (horizon < 0) throw std::invalid_argument("theorem3_excursion_bound: requires T >= 0");
    const double K = (alpha + 1.0) * excursion_kbar(alpha, m_queues);
    const double denom = std::pow(1.0 - rho, alpha - 1.0) * std::pow(b, alpha + 1.0);
    return K * static_cast<double>(horizon) / denom;
}

/// P(Q*_max(T) >= b) bound, clamped to [0, 1].
inline double theorem3_excursion_bound(std::int64_t horizon, double b, double alpha,
                                       std::size_t m_queues, double rho) {
    return std::min(1.0, theorem3_excursion_bound_raw(horizon, b, alpha, m_queues, rho));
}

/// IQ-switch specialization of the tail bound for an m-port switch.
inline TailBound prop_iq_tail_bound(std::size_t ell, std::size_t m, double rho, double alpha,
                                    double b_or_bprime) {
    check_alpha(alpha);
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("prop_iq_tail_bound: requires rho < 1");
    const double step = std::pow(static_cast<double>(m), 2.0 / (alpha + 1.0));
    TailBound tb;
    if (alpha >= 1.0) {
        tb.threshold = b_or_bprime + 2.0 * step * static_cast<double>(ell);
        tb.probability = std::pow(1.0 / (1.0 + (1.0 - rho) / (2.0 * static_cast<double>(m))),
                                  static_cast<double>(ell) + 1.0);
    } else {
        tb.threshold = b_or_bprime + 10.0 * step * static_cast<double>(ell);
        tb.probability = std::pow(1.0 / (1.0 + (1.0 - rho) / (10.0 * static_cast<double>(m))),
                                  static_cast<double>(ell) + 1.0);
    }
    return tb;
}

/// Per-entry Bernoulli relative entropy summed over the matrix, natural log.
/// Conventions: 0 log(0/x) = 0; a positive mass against a zero-mass entry
/// (or the 1-side analogue) yields +infinity.
inline double relative_entropy(const ArrivalRates& lambda_tilde, const ArrivalRates& lambda) {
    if (lambda_tilde.size() != lambda.size())
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    check_rates(lambda_tilde);
    check_rates(lambda);
    double h = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double p = lambda_tilde.rates[i];
        const double q = lambda.rates[i];
        if (p > 0.0) {
            if (q == 0.0) return std::numeric_limits<double>::infinity();
            h += p * std::log(p / q);
        }
        if (p < 1.0) {
            if (q == 1.0) return std::numeric_limits<double>::infinity();
            h += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
        }
    }
    return h;
}

/// Overload cost of the symmetric direction lambda~ = (1+eps)/m:
/// r(lambda~) = eps m^{(1-alpha)/(1+alpha)}.
inline double r_symmetric(double eps, std::size_t m, double alpha) {
    check_alpha(alpha);
    if (!(eps > 0.0)) throw std::invalid_argument("r_symmetric: requires eps > 0");
    return eps * std::pow(static_cast<double>(m), (1.0 - alpha) / (1.0 + alpha));
}

/// The symmetric-direction LDP objective
///   m^2 / (eps m^{(1-a)/(1+a)}) [ (1+eps)/m log((1+eps)/rho)
///                                + (1-(1+eps)/m) log((1-(1+eps)/m)/(1-rho/m)) ].
inline double ldp_objective(double eps, std::size_t m, double rho, double alpha) {
    check_alpha(alpha);
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("ldp_objective: requires rho in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("ldp_objective: requires eps > 0");
    const double md = static_cast<double>(m);
    if (!(eps < md - 1.0)) throw std::invalid_argument("ldp_objective: requires eps < m - 1");
    const double x = (1.0 + eps) / md;
    const double entropy = x * std::log((1.0 + eps) / rho) + (1.0 - x) * std::log((1.0 - x) / (1.0 - rho / md));
    return md * md / r_symmetric(eps, m, alpha) * entropy;
}

struct LdpThetaUpper {
    double theta_numeric = 0.0;  // minimized symmetric-direction objective
    double theta_approx = 0.0;   // closed form 2 m^{2a/(1+a)} (1-rho)
    double eps_star = 0.0;       // numeric minimizer
};

/// Golden-section minimization of ldp_objective over eps, paired with the
/// closed-form near-critical approximation. The objective is unimodal on
/// (0, m-1): convex positive entropy over a linear denominator.
inline LdpThetaUpper ldp_theta_upper(std::size_t m, double rho, double alpha) {
    check_alpha(alpha);
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("ldp_theta_upper: requires rho in (0,1)");
    double lo = 1e-6;
    double hi = static_cast<double>(m) - 1.0 - 1e-6;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = ldp_objective(c, m, rho, alpha);
    double fd = ldp_objective(d, m, rho, alpha);
    while (hi - lo > 1e-8) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = ldp_objective(c, m, rho, alpha);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = ldp_objective(d, m, rho, alpha);
        }
    }
    LdpThetaUpper res;
    res.eps_star = 0.5 * (lo + hi);
    res.theta_numeric = ldp_objective(res.eps_star, m, rho, alpha);
    res.theta_approx = 2.0 * std::pow(static_cast<double>(m), 2.0 * alpha / (1.0 + alpha)) * (1.0 - rho);
    return res;
}

/// Structural IQ inequality  sum_ij Q_ij^{alpha+1} <= m w_alpha(Q)^{(alpha+1)/alpha}.
/// Always true for an m-port switch; false signals an implementation bug.
inline bool iq_ratio_bound_check(const QueueVector& q, double alpha, const ScheduleSet& iq_set) {
    check_alpha(alpha);
    const std::size_t M = iq_set.queue_count();
    if (q.size() != M) throw std::invalid_argument("iq_ratio_bound_check: dimension mismatch");
    std::size_t m = 0;
    while (m * m < M) ++m;
    if (m * m != M) throw std::invalid_argument("iq_ratio_bound_check: queue count must be m^2");
    double lhs = 0.0;
    for (std::int64_t v : q.lengths)
        if (v > 0) lhs += std::pow(static_cast<double>(v), alpha + 1.0);
    const double w = w_alpha(q, alpha, iq_set);
    const double rhs = static_cast<double>(m) * std::pow(w, (alpha + 1.0) / alpha);
    return lhs <= rhs * (1.0 + 1e-12) + 1e-12;
}

/// One evaluated bound, optionally paired with the empirical estimate it
/// must dominate.
struct BoundReport {
    std::string bound_name;
    std::map<std::string, double> parameters;
    double theoretical = 0.0;
    std::optional<double> empirical;
    std::optional<bool> satisfied;

    static BoundReport make(std::string name, std::map<std::string, double> params,
                            double theoretical, std::optional<double> empirical = std::nullopt) {
        BoundReport r;
        r.bound_name = std::move(name);
        r.parameters = std::move(params);
        r.theoretical = theoretical;
        r.empirical = empirical;
        if (empirical.has_value()) r.satisfied = *empirical <= theoretical;
        return r;
    }
};

}  // namespace maxweight
