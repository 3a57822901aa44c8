#include "satbot/analysis/anova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "satbot/error.hpp"
#include "satbot/random.hpp"

namespace satbot::analysis {

namespace {

void validate(std::span<const GroupSample> groups) {
    if (groups.size() < 2) throw Error(ErrorCode::InsufficientData, "ANOVA needs at least two groups");
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.values.empty()) throw Error(ErrorCode::InsufficientData, "group '" + g.label + "' is empty");
        for (double v : g.values) {
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "group '" + g.label + "' has a non-finite value");
        }
        n += g.values.size();
    }
    if (n <= groups.size()) throw Error(ErrorCode::InsufficientData, "ANOVA needs more observations than groups");
}

// Pooled values with group boundaries; statistics are computed on any
// relabelling of the pool.
struct Layout {
    std::vector<double> pool;
    std::vector<std::size_t> sizes;
};

Layout layout_of(std::span<const GroupSample> groups) {
    Layout l;
    for (const auto& g : groups) {
        l.pool.insert(l.pool.end(), g.values.begin(), g.values.end());
        l.sizes.push_back(g.values.size());
    }
    return l;
}

AnovaStatistics compute(const std::vector<double>& pool, const std::vector<std::size_t>& sizes, double zero_tol) {
    const double n = static_cast<double>(pool.size());
    double grand = 0.0;
    for (double v : pool) grand += v;
    grand /= n;

    AnovaStatistics s;
    std::size_t offset = 0;
    for (std::size_t size : sizes) {
        double mean = 0.0;
        for (std::size_t i = 0; i < size; ++i) mean += pool[offset + i];
        mean /= static_cast<double>(size);
        for (std::size_t i = 0; i < size; ++i) {
            const double d = pool[offset + i] - mean;
            s.ss_within += d * d;
        }
        s.ss_between += static_cast<double>(size) * (mean - grand) * (mean - grand);
        offset += size;
    }
    if (s.ss_within <= zero_tol) s.ss_within = 0.0;
    if (s.ss_between <= zero_tol) s.ss_between = 0.0;
    s.ss_total = s.ss_between + s.ss_within;
    s.df_between = static_cast<int>(sizes.size()) - 1;
    s.df_within = static_cast<int>(pool.size() - sizes.size());

    if (s.ss_within == 0.0 && s.ss_between > 0.0) {
        s.degenerate = true;
        s.f_stat = std::numeric_limits<double>::infinity();
        s.eta_squared = 1.0;
    } else if (s.ss_between == 0.0) {
        s.f_stat = 0.0;
        s.eta_squared = 0.0;
    } else {
        s.f_stat = (s.ss_between / s.df_between) / (s.ss_within / s.df_within);
        s.eta_squared = s.ss_between / s.ss_total;
    }
    return s;
}

// Sums of squares below this are rounding noise.
double zero_tolerance(const std::vector<double>& pool) {
    double scale = 0.0;
    for (double v : pool) scale += v * v;
    return 1e-12 * std::max(scale, 1.0);
}

}  // namespace

AnovaStatistics anova_statistics(std::span<const GroupSample> groups) {
    validate(groups);
    const Layout l = layout_of(groups);
    return compute(l.pool, l.sizes, zero_tolerance(l.pool));
}

AnovaStatistics one_way_anova_f(std::span<const GroupSample> groups) {
    auto s = anova_statistics(groups);
    if (s.degenerate) {
        throw Error(ErrorCode::DegenerateInput, "zero within-group variance with distinct group means: F is infinite");
    }
    return s;
}

double permutation_p_value(std::span<const GroupSample> groups, int n_perm, std::uint64_t seed, unsigned threads) {
    if (n_perm < 1) throw Error(ErrorCode::InvalidInput, "n_perm must be at least 1");
    validate(groups);
    const Layout base = layout_of(groups);
    const double tol = zero_tolerance(base.pool);
    const double observed = compute(base.pool, base.sizes, tol).f_stat;
    // Ties within rounding error count as reaching the observed value.
    const double threshold = std::isinf(observed) ? observed : observed - 1e-9 * std::max(1.0, observed);

    auto count_range = [&](int begin, int end) {
        std::vector<double> pool = base.pool;
        long hits = 0;
        for (int i = begin; i < end; ++i) {
            std::copy(base.pool.begin(), base.pool.end(), pool.begin());
            SplitMix64 rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
            shuffle_in_place(pool.begin(), pool.end(), rng);
            if (compute(pool, base.sizes, tol).f_stat >= threshold) ++hits;
        }
        return hits;
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_perm)));
    long hits = 0;
    if (threads == 1) {
        hits = count_range(0, n_perm);
    } else {
        std::vector<long> partial(threads, 0);
        std::vector<std::thread> workers;
        const int chunk = (n_perm + static_cast<int>(threads) - 1) / static_cast<int>(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const int b = static_cast<int>(t) * chunk;
            const int e = std::min(n_perm, b + chunk);
            workers.emplace_back([&, t, b, e] { partial[t] = b < e ? count_range(b, e) : 0; });
        }
        for (auto& w : workers) w.join();
        for (long h : partial) hits += h;
    }
    return static_cast<double>(1 + hits) / static_cast<double>(1 + n_perm);
}

AnovaResult permutation_anova(std::span<const GroupSample> groups, int n_perm, std::uint64_t seed, unsigned threads) {
    const auto s = anova_statistics(groups);
    AnovaResult r;
    r.f_stat = s.f_stat;
    r.eta_squared = s.eta_squared;
    r.df_between = s.df_between;
    r.df_within = s.df_within;
    r.degenerate = s.degenerate;
    r.n_permutations = n_perm;
    r.p_perm = permutation_p_value(groups, n_perm, seed, threads);
    return r;
}

double eta_squared_from_f(double f_stat, int df_between, int df_within) {
    if (df_between < 1 || df_within < 1) throw Error(ErrorCode::InvalidInput, "degrees of freedom must be positive");
    if (!(f_stat >= 0.0)) throw Error(ErrorCode::InvalidInput, "F must be non-negative");
    if (std::isinf(f_stat)) return 1.0;
    const double num = f_stat * df_between;
    return num / (num + df_within);
}

}  // namespace satbot::analysis
