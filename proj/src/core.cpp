#include "impactpath/core.hpp"

namespace impactpath {

std::vector<Window> build_windows(Index series_length, Index n, Index p) {
    if (n < 1 || n > series_length)
        throw DataError("window size n must satisfy 1 <= n <= series length");
    if (p < 1) throw DataError("lag p must be >= 1");

    const Index count = (series_length - n) / p + 1;
    std::vector<Window> windows;
    windows.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i)
        windows.push_back(Window{static_cast<int>(i + 1), i * p, n});
    return windows;
}

Series regional_mean(const Series& grid_values, const RegionMask& mask) {
    mask.validate();
    if (grid_values.size() != static_cast<Index>(mask.assignment.size()))
        throw DataError("grid/mask length mismatch");

    const Index nreg = static_cast<Index>(mask.regions.size());
    Series num = Series::Zero(nreg);
    Series den = Series::Zero(nreg);
    for (Index c = 0; c < grid_values.size(); ++c) {
        const int r = mask.assignment[static_cast<std::size_t>(c)];
        num[r] += mask.weights[static_cast<std::size_t>(c)] * grid_values[c];
        den[r] += mask.weights[static_cast<std::size_t>(c)];
    }
    for (Index r = 0; r < nreg; ++r)
        if (den[r] == 0.0)
            throw DataError("region '" + mask.regions[static_cast<std::size_t>(r)] +
                            "' has no assigned columns");
    return num / den;
}

namespace {

// Sorts one scenario's members by index and checks pairing preconditions.
std::vector<const RegionalSeries*> ordered_members(const std::vector<RegionalSeries>& list,
                                                   Scenario expect) {
    std::vector<const RegionalSeries*> out(list.size(), nullptr);
    for (const auto& s : list) {
        s.validate();
        if (s.scenario != expect)
            throw DataError("series for member " + std::to_string(s.member) +
                            " has wrong scenario");
        if (s.member > static_cast<int>(list.size()))
            throw DataError("member indices must form 1..E; got member " +
                            std::to_string(s.member) + " among " +
                            std::to_string(list.size()) + " series");
        auto& slot = out[static_cast<std::size_t>(s.member - 1)];
        if (slot != nullptr)
            throw DataError("duplicate member " + std::to_string(s.member));
        slot = &s;
    }
    return out;
}

}  // namespace

EnsemblePair align_pair(const std::vector<RegionalSeries>& forced,
                        const std::vector<RegionalSeries>& counterfactual) {
    if (forced.empty() || counterfactual.empty())
        throw DataError("align_pair: both scenarios need at least one member");
    if (forced.size() != counterfactual.size())
        throw DataError("align_pair: ensemble sizes differ (" + std::to_string(forced.size()) +
                        " forced vs " + std::to_string(counterfactual.size()) +
                        " counterfactual)");

    const auto& ref = forced.front();
    for (const auto* list : {&forced, &counterfactual})
        for (const auto& s : *list)
            if (s.variable != ref.variable || s.region != ref.region)
                throw DataError("align_pair: mixed (variable, region) in input");

    auto fo = ordered_members(forced, Scenario::Forced);
    auto cf = ordered_members(counterfactual, Scenario::Counterfactual);

    EnsemblePair pair;
    pair.variable = ref.variable;
    pair.region = ref.region;
    pair.start_date = ref.start_date;
    for (std::size_t e = 0; e < fo.size(); ++e) {
        const std::string who = "member " + std::to_string(e + 1);
        if (fo[e] == nullptr || cf[e] == nullptr)
            throw DataError("align_pair: " + who + " missing in one scenario");
        if (fo[e]->values.size() != cf[e]->values.size() ||
            fo[e]->values.size() != fo[0]->values.size())
            throw DataError("align_pair: " + who + " length mismatch");
        if (fo[e]->start_date != ref.start_date || cf[e]->start_date != ref.start_date)
            throw DataError("align_pair: " + who + " start date mismatch");
        pair.forced.push_back(fo[e]->values);
        pair.counterfactual.push_back(cf[e]->values);
    }
    return pair;
}

Series ensemble_mean(const std::vector<Series>& members, int count) {
    if (members.empty()) throw DataError("ensemble_mean: empty ensemble");
    const int use = count == 0 ? static_cast<int>(members.size()) : count;
    if (use < 1 || use > static_cast<int>(members.size()))
        throw DataError("ensemble_mean: bad member count");
    Series mean = Series::Zero(members.front().size());
    for (int e = 0; e < use; ++e) mean += members[static_cast<std::size_t>(e)];
    return mean / static_cast<Scalar>(use);
}

}  // namespace impactpath
