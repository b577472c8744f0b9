#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "maxweight/lyapunov.hpp"
#include "maxweight/model.hpp"
#include "maxweight/simplex.hpp"

namespace maxweight {

inline constexpr double kLpTolerance = 1e-9;
inline constexpr double kCriticalTolerance = 1e-9;

/// Load rho(lambda) together with an optimal covering decomposition:
/// sum of weights = rho and sum_sigma weight_sigma * sigma >= lambda.
struct LoadResult {
    double rho = 0.0;
    std::vector<double> decomposition;  // weight per schedule, set order
};

/// rho(lambda) = min { sum_sigma a_sigma : sum a_sigma sigma >= lambda, a >= 0 }.
///
/// Solved through its dual  max xi.lambda  s.t.  xi.sigma <= 1, xi >= 0,
/// whose shadow prices are exactly the covering weights.
inline LoadResult load(const ArrivalRates& lambda, const ScheduleSet& set) {
    check_rates(lambda);
    if (lambda.size() != set.queue_count()) throw std::invalid_argument("load: dimension mismatch");
    if (!set.covers_all_queues())
        throw std::invalid_argument("load: schedule set violates Assumption 1");
    std::vector<std::vector<double>> A(set.size(), std::vector<double>(set.queue_count()));
    for (std::size_t s = 0; s < set.size(); ++s)
        for (std::size_t i = 0; i < set.queue_count(); ++i)
            A[s][i] = static_cast<double>(set.at(s).entries[i]);
    const std::vector<double> b(set.size(), 1.0);
    const SimplexResult lp = simplex_max(A, b, lambda.rates);
    LoadResult res;
    res.rho = lp.value;
    res.decomposition = lp.dual;
    return res;
}

/// Closed-form IQ load: the largest row or column sum of the m x m rate
/// matrix (flattened row-major).
inline double load_iq(const ArrivalRates& lambda, std::size_t m) {
    check_rates(lambda);
    if (lambda.size() != m * m) throw std::invalid_argument("load_iq: rates must be m x m");
    double rho = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            row += lambda.rates[i * m + j];
            col += lambda.rates[j * m + i];
        }
        rho = std::max({rho, row, col});
    }
    return rho;
}

/// Extreme points of the optimal face of DUAL(lambda) for a critical lambda,
/// plus the lambda they were derived from. Workload coordinates are indexed
/// by this extreme-point order.
struct SscGeometry {
    std::vector<std::vector<double>> extreme_points;
    ArrivalRates critical_lambda;

    std::size_t workload_dim() const { return extreme_points.size(); }
};

namespace detail {

/// Gaussian elimination with partial pivoting; returns false if singular.
inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> rhs,
                         std::vector<double>& out) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-11) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / a[i][i];
    return true;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    if (k == 0) return false;
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] + (k - i) < n) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

inline constexpr std::size_t kVertexEnumQueueCap = 6;
inline constexpr std::size_t kVertexEnumScheduleCap = 24;

/// All extreme points of {xi >= 0 : xi.sigma <= 1 for all sigma, xi.lambda = 1},
/// the optimal face of DUAL(lambda) for critical lambda, by exhaustive
/// enumeration of active-constraint subsets.
inline SscGeometry dual_extreme_points(const ArrivalRates& lambda, const ScheduleSet& set) {
    const std::size_t m = set.queue_count();
    if (lambda.size() != m) throw std::invalid_argument("dual_extreme_points: dimension mismatch");
    if (m > kVertexEnumQueueCap || set.size() > kVertexEnumScheduleCap)
        throw std::invalid_argument("dual_extreme_points: instance above enumeration cap");
    const double rho = load(lambda, set).rho;
    if (std::abs(rho - 1.0) > kCriticalTolerance)
        throw std::invalid_argument("dual_extreme_points: lambda is not critical (rho != 1)");

    // Inequality rows: xi.sigma <= 1 for each schedule, then -xi_i <= 0.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (std::size_t s = 0; s < set.size(); ++s) {
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = static_cast<double>(set.at(s).entries[i]);
        rows.push_back(std::move(r));
        rhs.push_back(1.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> r(m, 0.0);
        r[i] = -1.0;
        rows.push_back(std::move(r));
        rhs.push_back(0.0);
    }

    SscGeometry geo;
    geo.critical_lambda = lambda;
    auto feasible = [&](const std::vector<double>& xi) {
        double dot_l = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (xi[i] < -kLpTolerance) return false;
            dot_l += xi[i] * lambda.rates[i];
        }
        if (std::abs(dot_l - 1.0) > 1e-7) return false;
        for (std::size_t s = 0; s < set.size(); ++s) {
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) d += xi[i] * set.at(s).entries[i];
            if (d > 1.0 + kLpTolerance) return false;
        }
        return true;
    };
    auto record = [&](std::vector<double> xi) {
        for (double& v : xi) v = std::max(v, 0.0);
        for (const auto& seen : geo.extreme_points) {
            double dist = 0.0;
            for (std::size_t i = 0; i < m; ++i) dist = std::max(dist, std::abs(seen[i] - xi[i]));
            if (dist <= 1e-7) return;
        }
        geo.extreme_points.push_back(std::move(xi));
    };

    // The equality xi.lambda = 1 plus m-1 active inequalities pins a vertex.
    std::vector<std::size_t> idx(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) idx[i] = i;
    bool more = true;
    if (m == 1) {
        std::vector<double> xi;
        std::vector<std::vector<double>> sys{{lambda.rates[0]}};
        if (detail::solve_square(sys, {1.0}, xi) && feasible(xi)) record(xi);
        more = false;
    }
    while (more) {
        std::vector<std::vector<double>> sys;
        std::vector<double> sys_rhs;
        sys.push_back(lambda.rates);
        sys_rhs.push_back(1.0);
        for (std::size_t k : idx) {
            sys.push_back(rows[k]);
            sys_rhs.push_back(rhs[k]);
        }
        std::vector<double> xi;
        if (detail::solve_square(sys, sys_rhs, xi) && feasible(xi)) record(std::move(xi));
        more = detail::next_combination(idx, rows.size());
    }
    std::sort(geo.extreme_points.begin(), geo.extreme_points.end());
    return geo;
}

/// Workload coordinates W(q) = (xi . q) over the extreme points, in order.
inline std::vector<double> workload_map(const std::vector<double>& q, const SscGeometry& geo) {
    std::vector<double> w(geo.extreme_points.size());
    for (std::size_t k = 0; k < geo.extreme_points.size(); ++k) {
        const auto& xi = geo.extreme_points[k];
        if (xi.size() != q.size()) throw std::invalid_argument("workload_map: dimension mismatch");
        double d = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) d += xi[i] * q[i];
        w[k] = d;
    }
    return w;
}

struct LiftingOptions {
    double kkt_tolerance = 1e-8;
    std::size_t max_updates = 100000;
};

struct LiftingResult {
    std::vector<double> x;
    std::vector<double> multipliers;
    std::size_t updates = 0;
    double kkt_residual = 0.0;
};

/// Minimizer of L~(x) = sum x_i^{alpha+1}/(alpha+1) subject to xi.x >= w_xi
/// over the geometry's extreme points, x >= 0.
///
/// Dual coordinate ascent: with multipliers mu >= 0 the inner minimization is
/// separable and exact, x_i = (sum_xi mu_xi xi_i)^{1/alpha}; each sweep
/// rebalances one mu_xi by bisection until the KKT residual falls below
/// tolerance. L~ is strictly convex, so the minimizer is unique.
inline LiftingResult lifting_map_full(const std::vector<double>& w, const SscGeometry& geo,
                                      double alpha, const LiftingOptions& opts = {},
                                      const std::vector<double>* warm_start = nullptr) {
    check_alpha(alpha);
    const std::size_t K = geo.extreme_points.size();
    if (w.size() != K) throw std::invalid_argument("lifting_map: workload dimension mismatch");
    for (double v : w)
        if (!(v >= 0.0)) throw std::invalid_argument("lifting_map: workloads must be nonnegative");
    const std::size_t M = K == 0 ? 0 : geo.extreme_points.front().size();

    LiftingResult res;
    res.multipliers.assign(K, 0.0);
    if (warm_start != nullptr && warm_start->size() == K) res.multipliers = *warm_start;

    const double inv_alpha = 1.0 / alpha;
    auto x_of = [&](const std::vector<double>& mu) {
        std::vector<double> x(M, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < K; ++k) s += mu[k] * geo.extreme_points[k][i];
            x[i] = alpha == 1.0 ? s : std::pow(s, inv_alpha);
        }
        return x;
    };
    auto residual = [&](const std::vector<double>& mu, const std::vector<double>& x) {
        double r = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < M; ++i) d += geo.extreme_points[k][i] * x[i];
            r = std::max(r, w[k] - d);                 // primal feasibility
            r = std::max(r, std::abs(mu[k] * (d - w[k])));  // complementarity
        }
        return r;
    };

    std::vector<double>& mu = res.multipliers;
    while (true) {
        for (std::size_t k = 0; k < K; ++k) {
            ++res.updates;
            const auto& xi = geo.extreme_points[k];
            // s_i without constraint k's contribution.
            std::vector<double> base(M, 0.0);
            for (std::size_t i = 0; i < M; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < K; ++j)
                    if (j != k) s += mu[j] * geo.extreme_points[j][i];
                base[i] = s;
            }
            auto dot_at = [&](double mk) {
                double d = 0.0;
                for (std::size_t i = 0; i < M; ++i) {
                    if (xi[i] == 0.0) continue;
                    const double s = base[i] + mk * xi[i];
                    d += xi[i] * (alpha == 1.0 ? s : std::pow(s, inv_alpha));
                }
                return d;
            };
            if (dot_at(0.0) >= w[k]) {
                mu[k] = 0.0;
                continue;
            }
            double lo = 0.0, hi = std::max(mu[k], 1.0);
            while (dot_at(hi) < w[k]) {
                hi *= 2.0;
                if (hi > 1e30) throw std::runtime_error("lifting_map: constraint unreachable");
            }
            for (int it = 0; it < 64; ++it) {
                const double mid = 0.5 * (lo + hi);
                (dot_at(mid) < w[k] ? lo : hi) = mid;
            }
            mu[k] = 0.5 * (lo + hi);
        }
        const std::vector<double> x = x_of(mu);
        res.kkt_residual = residual(mu, x);
        if (res.kkt_residual <= opts.kkt_tolerance) {
            res.x = x;
            return res;
        }
        if (res.updates >= opts.max_updates)
            throw std::runtime_error("lifting_map: did not converge within the update cap");
    }
}

inline std::vector<double> lifting_map(const std::vector<double>& w, const SscGeometry& geo,
                                       double alpha) {
    return lifting_map_full(w, geo, alpha).x;
}

}  // namespace maxweight
