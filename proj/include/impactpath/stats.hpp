#pragma once

#include "impactpath/changepoint.hpp"

namespace impactpath {

// Per-interval ensemble impact estimate; the pathway DAG node payload.
struct ImpactRecord {
    std::string variable;
    std::string region;
    FeatureInterval interval;
    Scalar mean_diff = 0.0;
    Scalar se = 0.0;
    Scalar ci_low = 0.0;
    Scalar ci_high = 0.0;
    Scalar score = 0.0;  // mean_diff / se; +-inf when se == 0 and mean_diff != 0
    Scalar ci_level = 0.99;
    int ensemble_size = 0;

    bool infinite_score() const { return std::isinf(score); }
};

// CDF of Student's t with `df` degrees of freedom.
Scalar student_t_cdf(Scalar t, Scalar df);

// Upper-tail quantile: returns q >= 0 with P(T > q) = tail_prob,
// tail_prob in (0, 0.5].
Scalar t_quantile(Scalar tail_prob, Scalar df);

// Mean of (u - v) over the interval's days.
Scalar interval_mean_diff(const Series& u, const Series& v, const FeatureInterval& interval);

// Per-member interval mean differences reduced to ensemble mean, SE
// (E-1 denominator SD over sqrt(E)), a symmetric t CI at `ci_level`
// with E-1 degrees of freedom, and the t-score.
ImpactRecord impact_record(const EnsemblePair& pair, const FeatureInterval& interval,
                           Scalar ci_level = 0.99);

std::vector<ImpactRecord> impacts_for_features(const EnsemblePair& pair,
                                               const std::vector<FeatureInterval>& intervals,
                                               Scalar ci_level = 0.99);

enum class Granularity { Daily, Monthly, Entropy };

Granularity granularity_from_string(const std::string& text);
std::string to_string(Granularity g);

// Impacts over one interval per day, per calendar month, or per
// entropy-derived feature interval.
std::vector<ImpactRecord> granularity_compare(const EnsemblePair& pair, Granularity mode,
                                              const EntropyParams& params,
                                              const ChangepointConfig& cfg,
                                              Scalar ci_level = 0.99);

}  // namespace impactpath
