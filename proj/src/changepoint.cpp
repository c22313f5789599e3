#include "impactpath/changepoint.hpp"

#include "impactpath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace impactpath {

namespace {

struct SplitTest {
    int nu = 0;       // first window of the right-hand segment
    Scalar p = 1.0;
    int parent = -1;  // index of the test whose acceptance opened this segment
};

// Best candidate split of s[lo..hi] (1-based inclusive) by |t|, honoring
// the minimum segment size. Returns nu = 0 when no split is admissible.
// The returned p-value is Bonferroni-adjusted for the number of candidate
// positions scanned: the scan keeps the maximum |t|, so the winning
// statistic is the extreme of many correlated tests, not a single one.
std::pair<int, Scalar> best_split(const Series& s, int lo, int hi, int min_segment) {
    const int first = lo + min_segment;
    const int last = hi - min_segment + 1;
    int best_nu = 0;
    Scalar best_abs_t = -1.0;
    Scalar best_p = 1.0;
    for (int nu = first; nu <= last; ++nu) {
        const auto res = two_sample_t(s.segment(lo - 1, nu - lo), s.segment(nu - 1, hi - nu + 1));
        const Scalar abs_t = std::abs(res.t);
        if (abs_t > best_abs_t) {
            best_abs_t = abs_t;
            best_nu = nu;
            best_p = res.p;
        }
    }
    const Scalar candidates = static_cast<Scalar>(last - first + 1);
    return {best_nu, std::min(best_p * candidates, Scalar(1.0))};
}

}  // namespace

std::vector<int> detect_changepoints(const Series& s, const ChangepointConfig& cfg) {
    cfg.validate();
    const int m = static_cast<int>(s.size());
    if (m < 2 * cfg.min_segment)
        throw DataError("detect_changepoints: series needs at least 2*min_segment windows");

    // Segments are explored provisionally at the uncorrected level alpha
    // (an upper bound on any final alpha/K threshold), so the recursion
    // tree is a superset of the finally accepted one. K counts every test
    // performed; acceptance is settled afterwards at alpha/K and a split
    // only survives if its whole ancestor chain does.
    struct Segment {
        int lo, hi, parent;
    };
    std::deque<Segment> queue{{1, m, -1}};
    std::vector<SplitTest> tests;

    while (!queue.empty() && static_cast<int>(tests.size()) < cfg.max_changepoints) {
        const Segment seg = queue.front();
        queue.pop_front();
        if (seg.hi - seg.lo + 1 < 2 * cfg.min_segment) continue;
        const auto [nu, p] = best_split(s, seg.lo, seg.hi, cfg.min_segment);
        if (nu == 0) continue;
        tests.push_back(SplitTest{nu, p, seg.parent});
        if (p < cfg.alpha) {
            const int self = static_cast<int>(tests.size()) - 1;
            queue.push_back({seg.lo, nu - 1, self});
            queue.push_back({nu, seg.hi, self});
        }
    }

    const Scalar threshold = cfg.alpha / static_cast<Scalar>(std::max<std::size_t>(tests.size(), 1));
    std::vector<char> accepted(tests.size(), 0);
    std::vector<int> result;
    for (std::size_t k = 0; k < tests.size(); ++k) {
        const bool parent_ok = tests[k].parent < 0 || accepted[static_cast<std::size_t>(tests[k].parent)];
        if (parent_ok && tests[k].p < threshold) {
            accepted[k] = 1;
            result.push_back(tests[k].nu);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<FeatureInterval> map_to_time(const std::vector<int>& window_changepoints,
                                         const EntropyParams& params, Index series_length,
                                         Date start_date) {
    std::vector<Index> boundaries{1};
    for (const int w : window_changepoints) {
        const Index t = params.midpoint(w);
        if (t <= boundaries.back() || t > series_length)
            throw DataError("map_to_time: changepoint window " + std::to_string(w) +
                            " maps outside the series");
        boundaries.push_back(t);
    }

    std::vector<FeatureInterval> intervals;
    intervals.reserve(boundaries.size());
    for (std::size_t k = 0; k < boundaries.size(); ++k) {
        const Index start = boundaries[k];
        const Index end = k + 1 < boundaries.size() ? boundaries[k + 1] - 1 : series_length;
        intervals.push_back(FeatureInterval{start, end,
                                            start_date + static_cast<std::int32_t>(start - 1),
                                            start_date + static_cast<std::int32_t>(end - 1)});
    }
    return intervals;
}

std::map<Index, int> stability_histogram(const EnsemblePair& pair, const EntropyParams& params,
                                         const ChangepointConfig& cfg) {
    std::map<Index, int> hits;
    for (int count = 1; count <= pair.ensemble_size(); ++count) {
        const auto entropy = entropy_series(pair, params, count);
        for (const int nu : detect_changepoints(entropy, cfg)) ++hits[params.midpoint(nu)];
    }
    return hits;
}

}  // namespace impactpath
