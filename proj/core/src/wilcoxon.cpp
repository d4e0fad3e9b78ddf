#include "cfsmote/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "cfsmote/errors.hpp"

namespace cfsmote {

namespace {

constexpr std::size_t kExactLimit = 25;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonOutcome wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, Sided sided) {
    if (a.size() != b.size()) throw DataError("wilcoxon: length mismatch");
    if (a.empty()) throw DataError("wilcoxon: empty input");

    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw DegenerateTestError("wilcoxon: all differences are zero, test undefined");
    const std::size_t n = diffs.size();

    // mid-ranks of |d|, doubled so ties stay integral
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });
    std::vector<std::uint64_t> doubled_rank(n, 0);
    std::map<std::size_t, std::size_t> tie_sizes;  // tie group size -> count of groups
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos + 1;
        while (end < n && std::abs(diffs[order[end]]) == std::abs(diffs[order[pos]])) ++end;
        // positions pos+1 .. end (1-based); average doubled = (pos+1) + end
        const std::uint64_t doubled = static_cast<std::uint64_t>(pos + 1) + static_cast<std::uint64_t>(end);
        for (std::size_t i = pos; i < end; ++i) doubled_rank[order[i]] = doubled;
        tie_sizes[end - pos] += 1;
        pos = end;
    }

    std::uint64_t w_plus2 = 0;
    std::uint64_t w_minus2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) {
            w_plus2 += doubled_rank[i];
        } else {
            w_minus2 += doubled_rank[i];
        }
    }

    WilcoxonOutcome out;
    out.sided = sided;
    out.n_effective = n;
    out.w_statistic = 0.5 * static_cast<double>(std::min(w_plus2, w_minus2));

    if (n <= kExactLimit) {
        out.exact = true;
        // distribution of W+ (doubled scale) over all 2^n sign assignments,
        // by subset-sum counting
        const std::uint64_t total2 = w_plus2 + w_minus2;  // = n(n+1)
        std::vector<std::uint64_t> count(total2 + 1, 0);
        count[0] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t r = doubled_rank[i];
            for (std::uint64_t s = total2; s + 1 > r; --s) {  // s >= r, descending
                if (count[s - r] != 0) count[s] += count[s - r];
            }
        }
        const double denom = std::pow(2.0, static_cast<double>(n));
        auto tail_le = [&](std::uint64_t w) {
            std::uint64_t c = 0;
            for (std::uint64_t s = 0; s <= std::min(w, total2); ++s) c += count[s];
            return static_cast<double>(c);
        };
        auto tail_ge = [&](std::uint64_t w) {
            std::uint64_t c = 0;
            for (std::uint64_t s = w; s <= total2; ++s) c += count[s];
            return static_cast<double>(c);
        };
        if (sided == Sided::TwoSided) {
            const std::uint64_t w_min = std::min(w_plus2, w_minus2);
            const std::uint64_t w_max = std::max(w_plus2, w_minus2);
            out.p_value = std::min(1.0, (tail_le(w_min) + tail_ge(w_max)) / denom);
        } else {
            out.p_value = tail_le(w_plus2) / denom;
        }
    } else {
        out.exact = false;
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie_term = 0.0;
        for (const auto& [size, groups] : tie_sizes) {
            const double t = static_cast<double>(size);
            tie_term += static_cast<double>(groups) * (t * t * t - t);
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        if (var <= 0.0) throw DegenerateTestError("wilcoxon: zero variance after tie correction");
        const double w_plus = 0.5 * static_cast<double>(w_plus2);
        const double z = (w_plus - mean) / std::sqrt(var);
        if (sided == Sided::TwoSided) {
            out.p_value = std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
        } else {
            out.p_value = normal_cdf(z);
        }
    }
    return out;
}

}  // namespace cfsmote
