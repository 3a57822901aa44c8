#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace satbot::analysis {

struct GroupSample {
    std::string label;
    std::vector<double> values;
};

/// Sums of squares for a one-way layout. `degenerate` marks zero
/// within-group variance with nonzero between-group variance; f_stat is then
/// +infinity.
struct AnovaStatistics {
    double ss_between = 0.0;
    double ss_within = 0.0;
    double ss_total = 0.0;
    double f_stat = 0.0;
    double eta_squared = 0.0;
    int df_between = 0;
    int df_within = 0;
    bool degenerate = false;
};

struct AnovaResult {
    double f_stat = 0.0;
    double p_perm = 1.0;
    double eta_squared = 0.0;
    int df_between = 0;
    int df_within = 0;
    int n_permutations = 0;
    bool degenerate = false;
};

/// Throws InsufficientData (fewer than 2 groups, an empty group, or no
/// residual degrees of freedom) and InvalidInput for non-finite values.
AnovaStatistics anova_statistics(std::span<const GroupSample> groups);

/// Classical F test. Also throws DegenerateInput when the F ratio is infinite.
AnovaStatistics one_way_anova_f(std::span<const GroupSample> groups);

/// Label-shuffling p-value, (1 + #{F* >= F}) / (1 + n_perm). Permutation i
/// draws from stream i of `seed`, so the result does not depend on
/// `threads`. A degenerate observed F is allowed: only permutations that are
/// themselves degenerate count as reaching it.
double permutation_p_value(std::span<const GroupSample> groups, int n_perm = 5000, std::uint64_t seed = 0,
                           unsigned threads = 1);

/// F, eta squared and p_perm together. A degenerate observed F is reported
/// as infinity with eta squared 1 instead of throwing.
AnovaResult permutation_anova(std::span<const GroupSample> groups, int n_perm = 5000, std::uint64_t seed = 0,
                              unsigned threads = 1);

/// eta^2 = F*df_b / (F*df_b + df_w).
double eta_squared_from_f(double f_stat, int df_between, int df_within);

}  // namespace satbot::analysis
