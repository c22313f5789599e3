#pragma once

#include "impactpath/stats.hpp"

#include <map>

namespace impactpath {

// One injected ground-truth impact: a smoothed step of `amplitude` over
// days [start_day, end_day] (1-based), ramped over `ramp_days` at each
// edge inside the interval. The forced run also crossfades to an
// independent member-seeded weather realization inside the interval
// (weighted by the same step shape), so the pair desynchronizes where
// the impact is active and the ensemble spread of the difference is
// nonzero.
struct InjectedImpact {
    std::string variable;
    std::string region;
    Index start_day = 1;
    Index end_day = 1;
    Scalar amplitude = 0.0;
    Index ramp_days = 20;
};

// Seasonal sinusoid + AR(1) background for one (variable, region).
struct Background {
    Scalar base = 0.0;           // constant offset
    Scalar seasonal_amp = 5.0;   // sinusoid amplitude, period 365.25 days
    Scalar seasonal_phase = 0.0; // phase offset in days
    Scalar ar_coeff = 0.8;       // AR(1) coefficient, in [0, 1)
    Scalar noise_sd = 0.3;       // innovation standard deviation
};

struct SynthConfig {
    std::uint64_t seed = 42;
    int ensemble_size = 9;
    Index days = 1461;  // four years
    Date start_date = Date::from_ymd(1991, 6, 1);
    std::vector<std::string> variables = {"AEROD_v", "FSDSC", "TREFHT"};
    std::vector<std::string> regions = {"Temperate South", "Subtropical South", "Tropical",
                                        "Subtropical North", "Temperate North", "Polar North"};
    std::map<std::string, Background> backgrounds;  // keyed by variable
    std::vector<InjectedImpact> impacts;
    Scalar magnitude_scale = 1.0;
    // Forced/counterfactual members share background realizations by
    // default (paired design); disable for independent-noise null data.
    bool paired_noise = true;

    void validate() const;
};

// Default surface-cooling scenario: an aerosol pulse in the tropics
// propagating north into solar flux and temperature responses, with the
// temperate-north cooling of -0.6 over days 300..499.
SynthConfig default_synth_config();

struct GroundTruth {
    std::vector<InjectedImpact> impacts;  // amplitudes after magnitude_scale
};

struct SynthDataset {
    std::vector<EnsemblePair> pairs;  // one per (variable, region), variables outer
    GroundTruth truth;
    Date start_date;
};

// Deterministic for a fixed config; each (member, variable, region,
// scenario-independent) background stream is seeded separately so
// generation order does not matter.
SynthDataset generate_pair(const SynthConfig& cfg);

struct RecoveryMetrics {
    // Best Jaccard overlap per true impact among significant, sign-
    // matching records of the same (variable, region).
    std::vector<Scalar> jaccard;
    Scalar precision = 1.0;  // reported as 1.0 when nothing was found
    Scalar recall = 0.0;
    int significant_found = 0;
};

// `significant` means |score| exceeds the two-sided t critical value at
// the record's own ci_level.
RecoveryMetrics score_recovery(const std::vector<ImpactRecord>& found, const GroundTruth& truth);

// Interval overlap / union on inclusive day ranges.
Scalar interval_jaccard(Index a_start, Index a_end, Index b_start, Index b_end);

}  // namespace impactpath
