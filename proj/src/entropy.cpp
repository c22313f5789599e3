#include "impactpath/entropy.hpp"

#include "impactpath/core.hpp"

#include <cmath>
#include <string>

namespace impactpath {

Scalar fuzzy_membership(Scalar d, Scalar r1, Scalar r2) {
    return std::exp(-std::pow(d, r2) / r1);
}

namespace {

// Rows are the baseline-subtracted embedding vectors of width `w`
// starting at offsets 0..rows-1.
Eigen::MatrixXd embed(const Series& s, Index rows, int w) {
    Eigen::MatrixXd x(rows, w);
    for (Index i = 0; i < rows; ++i) {
        const Scalar baseline = s.segment(i, w).mean();
        for (int k = 0; k < w; ++k) x(i, k) = s[i + k] - baseline;
    }
    return x;
}

// Mean fuzzy membership over all vector pairs, with Kahan compensation:
// the n^2 terms sit near 1.0 and plain summation loses the small
// entropy differences.
Scalar phi(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Scalar r1, Scalar r2) {
    const Index count = x.rows();
    const int w = static_cast<int>(x.cols());
    const bool square = r2 == 2.0;
    Scalar sum = 0.0, comp = 0.0;
    for (Index i = 0; i < count; ++i) {
        for (Index j = 0; j < count; ++j) {
            Scalar d = 0.0;
            for (int k = 0; k < w; ++k) d = std::max(d, std::abs(x(i, k) - y(j, k)));
            const Scalar member = std::exp(-(square ? d * d : std::pow(d, r2)) / r1);
            const Scalar t = member - comp;
            const Scalar next = sum + t;
            comp = (next - sum) - t;
            sum = next;
        }
    }
    return sum / (static_cast<Scalar>(count) * static_cast<Scalar>(count));
}

}  // namespace

Scalar cross_fuzzy_entropy(const Series& u, const Series& v, const EntropyParams& params) {
    params.validate();
    if (u.size() != v.size()) throw DataError("cross_fuzzy_entropy: window length mismatch");
    const Index n = u.size();
    if (n <= params.m + 1) throw DataError("cross_fuzzy_entropy: window shorter than m + 2");

    const Index rows = n - params.m;
    const Scalar phi_m = phi(embed(u, rows, params.m), embed(v, rows, params.m),
                             params.r1, params.r2);
    const Scalar phi_m1 = phi(embed(u, rows, params.m + 1), embed(v, rows, params.m + 1),
                              params.r1, params.r2);
    if (phi_m <= 0.0 || phi_m1 <= 0.0)
        throw DataError("cross_fuzzy_entropy: phi underflowed to zero");
    return std::log(phi_m) - std::log(phi_m1);
}

EntropySeries entropy_series(const Series& u, const Series& v, const EntropyParams& params) {
    params.validate();
    if (u.size() != v.size()) throw DataError("entropy_series: series length mismatch");
    if (u.size() < params.n) throw DataError("entropy_series: series shorter than window");

    const auto windows = build_windows(u.size(), params.n, params.p);
    EntropySeries out;
    out.params = params;
    out.values = Series(static_cast<Index>(windows.size()));
    out.window_midpoints.reserve(windows.size());
    for (const auto& w : windows) {
        try {
            out.values[w.index - 1] =
                cross_fuzzy_entropy(u.segment(w.start, w.length), v.segment(w.start, w.length),
                                    params);
        } catch (const DataError& err) {
            throw DataError("window " + std::to_string(w.index) + ": " + err.what());
        }
        out.window_midpoints.push_back(params.midpoint(w.index));
    }
    return out;
}

EntropySeries entropy_series(const EnsemblePair& pair, const EntropyParams& params,
                             int members) {
    return entropy_series(ensemble_mean(pair.forced, members),
                          ensemble_mean(pair.counterfactual, members), params);
}

}  // namespace impactpath
