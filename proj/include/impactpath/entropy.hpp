#pragma once

#include "impactpath/types.hpp"

namespace impactpath {

// Cross-fuzzy entropy parameters. Defaults follow the usual choice for
// daily climate series: 30-day windows with a 9-day lag, embedding
// dimension 2 and fuzzy function r = {0.2, 2}.
struct EntropyParams {
    int m = 2;        // embedding dimension
    Scalar r1 = 0.2;  // fuzzy width
    Scalar r2 = 2.0;  // fuzzy exponent
    Index n = 30;     // window size
    Index p = 9;      // window lag

    void validate() const {
        if (m < 1) throw ConfigError("entropy: m must be >= 1");
        if (!(r1 > 0.0) || !(r2 > 0.0)) throw ConfigError("entropy: r1, r2 must be > 0");
        if (p < 1) throw ConfigError("entropy: p must be >= 1");
        if (n <= m + 1) throw ConfigError("entropy: n must exceed m + 1");
    }

    // Window i (1-based) represents time index (i-1)*p + ceil(n/2), 1-based.
    Index midpoint(int window_index) const {
        return static_cast<Index>(window_index - 1) * p + (n + 1) / 2;
    }
};

// Per-window entropy values (nats) with the window-to-time mapping.
struct EntropySeries {
    Series values;
    std::vector<Index> window_midpoints;  // 1-based time indices, strictly increasing
    EntropyParams params;

    Index size() const { return values.size(); }
};

// exp(-d^r2 / r1); equals 1 at d = 0 and decays toward 0.
Scalar fuzzy_membership(Scalar d, Scalar r1, Scalar r2);

// Cross-fuzzy entropy ln(phi^m) - ln(phi^{m+1}) between two equal-length
// windows. Vectors of length m and m+1 are both drawn from offsets
// 1..n-m and are baseline-subtracted; the distance is the maximum
// absolute component difference.
Scalar cross_fuzzy_entropy(const Series& u, const Series& v, const EntropyParams& params);

// Entropy per sliding window of an aligned series pair.
EntropySeries entropy_series(const Series& u, const Series& v, const EntropyParams& params);

// Ensemble-mean reduction first, then per-window entropy. `members`
// restricts both ensembles to their first members (0 = all).
EntropySeries entropy_series(const EnsemblePair& pair, const EntropyParams& params,
                             int members = 0);

}  // namespace impactpath
