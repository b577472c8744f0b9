#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxweight/rng.hpp"

namespace maxweight {

/// One slot's service selection: a 0/1 indicator per queue.
struct Schedule {
    std::vector<int> entries;

    std::size_t size() const { return entries.size(); }
    bool operator==(const Schedule&) const = default;
};

/// The finite set of feasible schedules over M queues.
///
/// Construction enforces the shape invariants (nonempty, uniform length,
/// 0/1 entries, no duplicates). Coverage of every queue by some schedule is
/// reported by validate_schedule_set() and enforced by the builders and the
/// file loader; policy code requires it as a precondition.
class ScheduleSet {
public:
    ScheduleSet(std::vector<Schedule> schedules, std::size_t queue_count)
        : schedules_(std::move(schedules)), m_(queue_count) {
        if (m_ == 0) throw std::invalid_argument("schedule set: M must be positive");
        if (schedules_.empty()) throw std::invalid_argument("schedule set: empty");
        for (const Schedule& s : schedules_) {
            if (s.entries.size() != m_)
                throw std::invalid_argument("schedule set: schedule length != M");
            for (int e : s.entries)
                if (e != 0 && e != 1)
                    throw std::invalid_argument("schedule set: entries must be 0 or 1");
        }
        for (std::size_t i = 0; i < schedules_.size(); ++i)
            for (std::size_t j = i + 1; j < schedules_.size(); ++j)
                if (schedules_[i] == schedules_[j])
                    throw std::invalid_argument("schedule set: duplicate schedule");
        covers_all_ = true;
        for (std::size_t q = 0; q < m_ && covers_all_; ++q) {
            bool hit = false;
            for (const Schedule& s : schedules_) hit = hit || s.entries[q] == 1;
            covers_all_ = hit;
        }
    }

    const std::vector<Schedule>& schedules() const { return schedules_; }
    const Schedule& at(std::size_t i) const { return schedules_[i]; }
    std::size_t size() const { return schedules_.size(); }
    std::size_t queue_count() const { return m_; }
    bool covers_all_queues() const { return covers_all_; }

private:
    std::vector<Schedule> schedules_;
    std::size_t m_;
    bool covers_all_;
};

/// Per-queue integer backlog; the Markov chain state.
struct QueueVector {
    std::vector<std::int64_t> lengths;

    std::size_t size() const { return lengths.size(); }
    std::int64_t max_length() const {
        std::int64_t m = 0;
        for (std::int64_t v : lengths) m = std::max(m, v);
        return m;
    }
    std::int64_t total() const {
        return std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
    }
    bool operator==(const QueueVector&) const = default;
};

/// Bernoulli arrival rates, one per queue, each in [0, 1].
struct ArrivalRates {
    std::vector<double> rates;

    std::size_t size() const { return rates.size(); }
};

/// One slot's arrival realization (0/1 per queue).
struct ArrivalSample {
    std::vector<int> counts;

    std::size_t size() const { return counts.size(); }
};

/// The system under study: schedule constraints plus arrival rates.
struct NetworkInstance {
    ScheduleSet schedules;
    ArrivalRates rates;

    std::size_t queue_count() const { return schedules.queue_count(); }
};

inline void check_rates(const ArrivalRates& rates) {
    for (double r : rates.rates)
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("arrival rates must lie in [0,1]");
}

/// Exhaustive construction cap: m! schedules stay brute-force tractable.
inline constexpr std::size_t kIqExhaustiveCap = 6;

/// All m! permutation matrices of an m-port switch, flattened row-major into
/// {0,1}^{m*m}. Schedule order is the lexicographic order of the permutations,
/// which downstream tie-breaking relies on.
inline ScheduleSet build_iq_schedule_set(std::size_t m) {
    if (m == 0) throw std::invalid_argument("build_iq_schedule_set: m must be >= 1");
    if (m > kIqExhaustiveCap)
        throw std::invalid_argument("build_iq_schedule_set: m exceeds exhaustive cap of " +
                                    std::to_string(kIqExhaustiveCap));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<Schedule> schedules;
    do {
        Schedule s;
        s.entries.assign(m * m, 0);
        for (std::size_t i = 0; i < m; ++i) s.entries[i * m + perm[i]] = 1;
        schedules.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return ScheduleSet(std::move(schedules), m * m);
}

struct CoverageReport {
    bool ok = true;
    std::vector<std::size_t> uncovered;  // queue indices never served
};

/// Checks that every queue is served by at least one schedule.
inline CoverageReport validate_schedule_set(const ScheduleSet& set) {
    CoverageReport report;
    for (std::size_t q = 0; q < set.queue_count(); ++q) {
        bool hit = false;
        for (const Schedule& s : set.schedules()) hit = hit || s.entries[q] == 1;
        if (!hit) report.uncovered.push_back(q);
    }
    report.ok = report.uncovered.empty();
    return report;
}

/// One-slot update: Q_i <- [Q_i - sigma_i]^+ + a_i.
inline QueueVector step(const QueueVector& q, const Schedule& sigma, const ArrivalSample& a) {
    const std::size_t m = q.size();
    if (sigma.size() != m || a.size() != m)
        throw std::invalid_argument("step: dimension mismatch");
    QueueVector next;
    next.lengths.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t v = q.lengths[i];
        if (v >= std::numeric_limits<std::int64_t>::max() - 1)
            throw std::overflow_error("step: queue length overflow");
        v = std::max<std::int64_t>(v - sigma.entries[i], 0) + a.counts[i];
        next.lengths[i] = v;
    }
    return next;
}

/// Independent Bernoulli draw per queue; consumes exactly M values from rng.
inline ArrivalSample sample_arrivals(const ArrivalRates& rates, SeededRng& rng) {
    ArrivalSample a;
    a.counts.resize(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i)
        a.counts[i] = rng.next_unit() < rates.rates[i] ? 1 : 0;
    return a;
}

/// Parses {"M": int, "schedules": [[0,1,...], ...]}. Any invariant violation
/// (including an uncovered queue) rejects the file.
inline ScheduleSet schedule_set_from_json(const nlohmann::json& j) {
    if (!j.contains("M") || !j.contains("schedules"))
        throw std::invalid_argument("schedule set file: expected fields M and schedules");
    if (!j["M"].is_number_unsigned() || j["M"].get<std::uint64_t>() == 0)
        throw std::invalid_argument("schedule set file: M must be a positive integer");
    const auto m = j["M"].get<std::size_t>();
    std::vector<Schedule> schedules;
    for (const auto& row : j["schedules"]) {
        Schedule s;
        for (const auto& e : row) {
            if (!e.is_number_integer())
                throw std::invalid_argument("schedule set file: entries must be integers");
            s.entries.push_back(e.get<int>());
        }
        schedules.push_back(std::move(s));
    }
    ScheduleSet set(std::move(schedules), m);
    const CoverageReport report = validate_schedule_set(set);
    if (!report.ok)
        throw std::invalid_argument("schedule set file: queue " +
                                    std::to_string(report.uncovered.front()) +
                                    " is never served (Assumption 1)");
    return set;
}

inline ScheduleSet load_schedule_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open schedule set file: " + path);
    nlohmann::json j;
    in >> j;
    return schedule_set_from_json(j);
}

}  // namespace maxweight
