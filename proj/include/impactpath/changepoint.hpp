#pragma once

#include "impactpath/entropy.hpp"

#include <map>

namespace impactpath {

struct ChangepointConfig {
    Scalar alpha = 0.05;       // family-wise significance level
    int min_segment = 5;       // minimum windows on each side of a split
    int max_changepoints = 20; // cap on hypothesis tests per run

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("changepoint: alpha in (0,1)");
        if (min_segment < 2) throw ConfigError("changepoint: min_segment must be >= 2");
        if (max_changepoints < 1) throw ConfigError("changepoint: max_changepoints must be >= 1");
    }
};

// Inclusive [start_index, end_index] slice of the original daily series,
// 1-based. Consecutive intervals abut.
struct FeatureInterval {
    Index start_index = 1;
    Index end_index = 1;
    Date start_date;
    Date end_date;

    Index length() const { return end_index - start_index + 1; }
};

struct TTestResult {
    Scalar t = 0.0;
    Scalar df = 0.0;
    Scalar p = 1.0;
};

// Welch's unequal-variance two-sample t-test with Welch-Satterthwaite
// degrees of freedom and a two-sided p-value. Zero-variance samples with
// equal means give t = 0, p = 1; with different means, p = 0.
TTestResult two_sample_t(const Series& a, const Series& b);

// Sequential binary segmentation over an entropy series. In each active
// segment the split maximizing |t| over admissible positions is tested;
// a run-level Bonferroni correction alpha/K is applied where K counts
// tests actually performed. Returns accepted split positions nu (1-based,
// each in [2, M]) in increasing order; nu marks the first window of the
// right-hand segment.
std::vector<int> detect_changepoints(const Series& entropy_values,
                                     const ChangepointConfig& cfg);

inline std::vector<int> detect_changepoints(const EntropySeries& s,
                                            const ChangepointConfig& cfg) {
    return detect_changepoints(s.values, cfg);
}

// Maps changepoint windows to midpoint time indices, prepends/appends the
// series boundaries and emits the abutting interval partition of [1, N].
std::vector<FeatureInterval> map_to_time(const std::vector<int>& window_changepoints,
                                         const EntropyParams& params, Index series_length,
                                         Date start_date);

// Changepoint stability across ensemble sizes E' = 1..E: each run maps
// its changepoints to midpoint time indices and increments that index's
// hit count.
std::map<Index, int> stability_histogram(const EnsemblePair& pair, const EntropyParams& params,
                                         const ChangepointConfig& cfg);

}  // namespace impactpath
