#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "maxweight/model.hpp"

namespace maxweight {

enum class TieBreak { LowestIndex };

/// MW-alpha policy parameters. Ties are broken by lowest index in the
/// schedule set's stored order so runs replay identically.
struct PolicyConfig {
    double alpha = 1.0;
    TieBreak tie_break = TieBreak::LowestIndex;
};

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

/// sigma . Q^alpha with 0^alpha := 0.
inline double schedule_weight(const Schedule& sigma, const QueueVector& q, double alpha) {
    check_alpha(alpha);
    if (sigma.size() != q.size()) throw std::invalid_argument("schedule_weight: dimension mismatch");
    double w = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (sigma.entries[i] != 0 && q.lengths[i] > 0)
            w += std::pow(static_cast<double>(q.lengths[i]), alpha);
    return w;
}

/// Index of the maximizer of sigma . Q^alpha, lowest index among ties.
inline std::size_t max_weight_schedule_index(const QueueVector& q, const PolicyConfig& cfg,
                                             const ScheduleSet& set) {
    check_alpha(cfg.alpha);
    if (!set.covers_all_queues())
        throw std::invalid_argument("max_weight_schedule: schedule set violates Assumption 1");
    if (set.queue_count() != q.size())
        throw std::invalid_argument("max_weight_schedule: dimension mismatch");
    // Q^alpha once, then |S| dot products.
    std::vector<double> qa(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        qa[i] = q.lengths[i] > 0 ? std::pow(static_cast<double>(q.lengths[i]), cfg.alpha) : 0.0;
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t s = 0; s < set.size(); ++s) {
        double w = 0.0;
        const Schedule& sigma = set.at(s);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (sigma.entries[i] != 0) w += qa[i];
        if (w > best_w) {
            best_w = w;
            best = s;
        }
    }
    return best;
}

inline const Schedule& max_weight_schedule(const QueueVector& q, const PolicyConfig& cfg,
                                           const ScheduleSet& set) {
    return set.at(max_weight_schedule_index(q, cfg, set));
}

/// Maximum alpha-weight w_alpha(Q) = max_sigma sigma . Q^alpha.
inline double w_alpha(const QueueVector& q, double alpha, const ScheduleSet& set) {
    PolicyConfig cfg{alpha, TieBreak::LowestIndex};
    return schedule_weight(max_weight_schedule(q, cfg, set), q, alpha);
}

namespace detail {

/// Exact max-weight assignment on an m x m weight matrix (row-major),
/// shortest-augmenting-path method with potentials, O(m^3). Returns the
/// column matched to each row.
inline std::vector<std::size_t> max_weight_assignment(const std::vector<double>& weight,
                                                      std::size_t m) {
    // Minimize negated weights. Index 0 is a dummy row/column.
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> match(m + 1, 0);  // match[col] = row
    for (std::size_t i = 1; i <= m; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<std::size_t> way(m + 1, 0);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = -weight[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(m);
    for (std::size_t j = 1; j <= m; ++j) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace detail

/// Maximum-weight perfect matching on weights Q_ij^alpha, without enumerating
/// the m! schedules. The returned schedule's weight equals the exhaustive
/// maximum; the matching itself may differ from the enumeration tie-break.
inline Schedule iq_max_weight_matching(const QueueVector& q, std::size_t m, double alpha) {
    check_alpha(alpha);
    if (q.size() != m * m) throw std::invalid_argument("iq_max_weight_matching: Q must be m x m");
    std::vector<double> weight(m * m, 0.0);
    for (std::size_t i = 0; i < m * m; ++i)
        if (q.lengths[i] > 0) weight[i] = std::pow(static_cast<double>(q.lengths[i]), alpha);
    const std::vector<std::size_t> row_to_col = detail::max_weight_assignment(weight, m);
    Schedule s;
    s.entries.assign(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) s.entries[i * m + row_to_col[i]] = 1;
    return s;
}

}  // namespace maxweight
