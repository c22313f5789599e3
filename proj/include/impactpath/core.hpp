#pragma once

#include "impactpath/types.hpp"

namespace impactpath {

// Splits a series of `series_length` samples into M = floor((L-n)/p) + 1
// full windows of size n and lag p. Trailing samples that do not fill a
// complete window are dropped.
std::vector<Window> build_windows(Index series_length, Index n, Index p);

// Area-weighted mean per region: sum_r(w*x) / sum_r(w).
Series regional_mean(const Series& grid_values, const RegionMask& mask);

// Validates member pairing, lengths and dates, and assembles an
// EnsemblePair. Both lists must describe the same (variable, region).
EnsemblePair align_pair(const std::vector<RegionalSeries>& forced,
                        const std::vector<RegionalSeries>& counterfactual);

// Plain ensemble mean over the first `members` series (all when 0).
Series ensemble_mean(const std::vector<Series>& members, int count = 0);

}  // namespace impactpath
