#include "impactpath/types.hpp"

#include <cmath>
#include <cstdio>

namespace impactpath {

Date Date::parse(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3)
        throw DataError("bad ISO-8601 date: '" + text + "'");
    return from_ymd(y, m, d);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

std::string to_string(Scenario s) {
    return s == Scenario::Forced ? "forced" : "counterfactual";
}

Scenario scenario_from_string(const std::string& text) {
    if (text == "forced") return Scenario::Forced;
    if (text == "counterfactual") return Scenario::Counterfactual;
    throw DataError("unknown scenario: '" + text + "'");
}

void RegionalSeries::validate() const {
    if (member < 1) throw DataError("member index must be >= 1");
    if (!values.isFinite().all())
        throw DataError(variable + "/" + region + " member " + std::to_string(member) +
                        ": non-finite sample");
}

void RegionMask::validate() const {
    if (assignment.size() != weights.size())
        throw DataError("mask assignment/weight length mismatch");
    for (std::size_t c = 0; c < assignment.size(); ++c) {
        if (assignment[c] < 0 || assignment[c] >= static_cast<int>(regions.size()))
            throw DataError("mask column " + std::to_string(c) + ": region index out of range");
        if (!(weights[c] > 0.0))
            throw DataError("mask column " + std::to_string(c) + ": weight must be positive");
    }
}

}  // namespace impactpath
