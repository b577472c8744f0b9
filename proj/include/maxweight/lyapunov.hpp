#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "maxweight/model.hpp"
#include "maxweight/policy.hpp"

namespace maxweight {

/// Scalar profile f_alpha. For alpha >= 1 it is plainly r^alpha; for
/// alpha in (0,1) the segment below r = 1 is replaced by the cubic
/// (alpha-1) r^3 + (1-alpha) r^2 + r, which matches value and slope at the
/// knot and keeps the second derivative bounded near zero.
inline double f_alpha(double r, double alpha) {
    check_alpha(alpha);
    if (!(r >= 0.0)) throw std::invalid_argument("f_alpha: r must be nonnegative");
    if (alpha >= 1.0 || r >= 1.0) return std::pow(r, alpha);
    return (alpha - 1.0) * r * r * r + (1.0 - alpha) * r * r + r;
}

/// Antiderivative of f_alpha with F(0) = 0, in closed form on each branch.
inline double F_alpha(double r, double alpha) {
    check_alpha(alpha);
    if (!(r >= 0.0)) throw std::invalid_argument("F_alpha: r must be nonnegative");
    if (alpha >= 1.0) return std::pow(r, alpha + 1.0) / (alpha + 1.0);
    if (r <= 1.0) {
        const double r2 = r * r;
        return (alpha - 1.0) * r2 * r2 / 4.0 + (1.0 - alpha) * r2 * r / 3.0 + r2 / 2.0;
    }
    // Quartic value at the knot keeps F continuous.
    const double f_at_one = (alpha - 1.0) / 4.0 + (1.0 - alpha) / 3.0 + 0.5;
    return f_at_one + (std::pow(r, alpha + 1.0) - 1.0) / (alpha + 1.0);
}

/// The (alpha+1)-norm of the backlog vector.
inline double norm_alpha1(const QueueVector& q, double alpha) {
    check_alpha(alpha);
    double s = 0.0;
    for (std::int64_t v : q.lengths)
        if (v > 0) s += std::pow(static_cast<double>(v), alpha + 1.0);
    return std::pow(s, 1.0 / (alpha + 1.0));
}

/// L_alpha(Q) = [(alpha+1) sum_i F_alpha(Q_i)]^{1/(alpha+1)}. Coincides with
/// the (alpha+1)-norm whenever alpha >= 1.
inline double L_alpha(const QueueVector& q, double alpha) {
    check_alpha(alpha);
    if (alpha >= 1.0) return norm_alpha1(q, alpha);
    double s = 0.0;
    for (std::int64_t v : q.lengths) s += F_alpha(static_cast<double>(v), alpha);
    return std::pow((alpha + 1.0) * s, 1.0 / (alpha + 1.0));
}

/// L~(Q) = sum_i Q_i^{alpha+1} / (alpha+1).
inline double L_tilde(const QueueVector& q, double alpha) {
    check_alpha(alpha);
    double s = 0.0;
    for (std::int64_t v : q.lengths)
        if (v > 0) s += std::pow(static_cast<double>(v), alpha + 1.0);
    return s / (alpha + 1.0);
}

/// Phi(Q) = L_alpha(Q)^2.
inline double phi(const QueueVector& q, double alpha) {
    const double l = L_alpha(q, alpha);
    return l * l;
}

/// Evaluator bundle for one alpha; the smoothed branch of f is active iff
/// alpha < 1.
struct LyapunovSpec {
    double alpha;

    double f(double r) const { return f_alpha(r, alpha); }
    double F(double r) const { return F_alpha(r, alpha); }
    double L(const QueueVector& q) const { return L_alpha(q, alpha); }
    double norm(const QueueVector& q) const { return norm_alpha1(q, alpha); }
    double tilde(const QueueVector& q) const { return L_tilde(q, alpha); }
    double Phi(const QueueVector& q) const { return phi(q, alpha); }
};

}  // namespace maxweight
