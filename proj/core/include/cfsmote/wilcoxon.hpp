#pragma once

#include <cstddef>
#include <span>

namespace cfsmote {

enum class Sided { TwoSided, OneSidedLess };

struct WilcoxonOutcome {
    double w_statistic = 0.0;  // smaller of the positive/negative rank sums
    std::size_t n_effective = 0;
    double p_value = 1.0;
    Sided sided = Sided::TwoSided;
    bool exact = true;  // exact sign-assignment distribution vs normal approximation
};

// Paired signed-rank test. Zero differences are dropped; ties get mid-ranks.
// Exact p over all 2^n sign assignments for n_effective <= 25, normal
// approximation with tie correction above. Throws DegenerateTestError when
// every difference is zero.
WilcoxonOutcome wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                     Sided sided = Sided::TwoSided);

}  // namespace cfsmote
