#include "impactpath/stats.hpp"

#include <cmath>
#include <limits>

namespace impactpath {

namespace {

// Continued-fraction kernel for the regularized incomplete beta (Lentz).
Scalar betacf(Scalar a, Scalar b, Scalar x) {
    constexpr int kMaxIter = 500;
    constexpr Scalar kEps = 1e-15;
    constexpr Scalar kTiny = 1e-300;

    const Scalar qab = a + b;
    const Scalar qap = a + 1.0;
    const Scalar qam = a - 1.0;
    Scalar c = 1.0;
    Scalar d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    Scalar h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const Scalar m2 = 2.0 * m;
        Scalar aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const Scalar del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
Scalar incbeta(Scalar a, Scalar b, Scalar x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const Scalar ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * betacf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

Scalar two_sided_t_pvalue(Scalar t, Scalar df) {
    const Scalar t2 = t * t;
    return incbeta(df / 2.0, 0.5, df / (df + t2));
}

}  // namespace

Scalar student_t_cdf(Scalar t, Scalar df) {
    if (df < 1.0) throw ConfigError("student_t_cdf: df must be >= 1");
    const Scalar half_p = 0.5 * two_sided_t_pvalue(t, df);
    return t >= 0.0 ? 1.0 - half_p : half_p;
}

Scalar t_quantile(Scalar tail_prob, Scalar df) {
    if (df < 1.0) throw ConfigError("t_quantile: df must be >= 1");
    if (!(tail_prob > 0.0 && tail_prob <= 0.5))
        throw ConfigError("t_quantile: tail probability must lie in (0, 0.5]");
    if (tail_prob == 0.5) return 0.0;

    // Bisect on the two-sided tail; monotone decreasing in t.
    Scalar lo = 0.0, hi = 1.0;
    while (two_sided_t_pvalue(hi, df) > 2.0 * tail_prob) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const Scalar mid = 0.5 * (lo + hi);
        if (two_sided_t_pvalue(mid, df) > 2.0 * tail_prob)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(Scalar(1), hi)) break;
    }
    return 0.5 * (lo + hi);
}

TTestResult two_sample_t(const Series& a, const Series& b) {
    const Index na = a.size(), nb = b.size();
    if (na < 2 || nb < 2) throw DataError("two_sample_t: each sample needs >= 2 values");

    // An exactly constant sample has zero variance even when its mean
    // rounds away from the common value.
    const bool const_a = a.maxCoeff() == a.minCoeff();
    const bool const_b = b.maxCoeff() == b.minCoeff();
    const Scalar ma = const_a ? a[0] : a.mean();
    const Scalar mb = const_b ? b[0] : b.mean();
    const Scalar va = const_a ? 0.0 : (a - ma).square().sum() / static_cast<Scalar>(na - 1);
    const Scalar vb = const_b ? 0.0 : (b - mb).square().sum() / static_cast<Scalar>(nb - 1);

    TTestResult res;
    const Scalar sa = va / static_cast<Scalar>(na);
    const Scalar sb = vb / static_cast<Scalar>(nb);
    if (sa + sb == 0.0) {
        // Degenerate variance: identical constants are a perfect null,
        // distinct constants a certain change.
        if (ma == mb) {
            res.t = 0.0;
            res.df = static_cast<Scalar>(na + nb - 2);
            res.p = 1.0;
        } else {
            res.t = ma > mb ? std::numeric_limits<Scalar>::infinity()
                            : -std::numeric_limits<Scalar>::infinity();
            res.df = static_cast<Scalar>(na + nb - 2);
            res.p = 0.0;
        }
        return res;
    }
    res.t = (ma - mb) / std::sqrt(sa + sb);
    res.df = (sa + sb) * (sa + sb) /
             (sa * sa / static_cast<Scalar>(na - 1) + sb * sb / static_cast<Scalar>(nb - 1));
    res.p = two_sided_t_pvalue(res.t, res.df);
    return res;
}

Scalar interval_mean_diff(const Series& u, const Series& v, const FeatureInterval& interval) {
    if (interval.start_index < 1 || interval.end_index > u.size() ||
        interval.end_index > v.size() || interval.start_index > interval.end_index)
        throw DataError("interval_mean_diff: interval outside series");
    const Index len = interval.length();
    return (u.segment(interval.start_index - 1, len) - v.segment(interval.start_index - 1, len))
        .mean();
}

ImpactRecord impact_record(const EnsemblePair& pair, const FeatureInterval& interval,
                           Scalar ci_level) {
    if (!(ci_level > 0.0 && ci_level < 1.0))
        throw ConfigError("impact_record: ci_level must lie in (0, 1)");
    const int count = pair.ensemble_size();
    if (count < 2) throw DataError("impact_record: ensemble size must be >= 2");

    Series w(count);
    for (int e = 0; e < count; ++e)
        w[e] = interval_mean_diff(pair.forced[static_cast<std::size_t>(e)],
                                  pair.counterfactual[static_cast<std::size_t>(e)], interval);

    ImpactRecord rec;
    rec.variable = pair.variable;
    rec.region = pair.region;
    rec.interval = interval;
    rec.ci_level = ci_level;
    rec.ensemble_size = count;
    rec.mean_diff = w.mean();
    const Scalar sd = std::sqrt((w - rec.mean_diff).square().sum() / static_cast<Scalar>(count - 1));
    rec.se = sd / std::sqrt(static_cast<Scalar>(count));

    if (rec.se == 0.0) {
        rec.score = rec.mean_diff == 0.0
                        ? 0.0
                        : std::copysign(std::numeric_limits<Scalar>::infinity(), rec.mean_diff);
        rec.ci_low = rec.ci_high = rec.mean_diff;
        return rec;
    }
    const Scalar tq = t_quantile((1.0 - ci_level) / 2.0, static_cast<Scalar>(count - 1));
    rec.ci_low = rec.mean_diff - tq * rec.se;
    rec.ci_high = rec.mean_diff + tq * rec.se;
    rec.score = rec.mean_diff / rec.se;
    return rec;
}

std::vector<ImpactRecord> impacts_for_features(const EnsemblePair& pair,
                                               const std::vector<FeatureInterval>& intervals,
                                               Scalar ci_level) {
    std::vector<ImpactRecord> out;
    out.reserve(intervals.size());
    for (const auto& interval : intervals) out.push_back(impact_record(pair, interval, ci_level));
    return out;
}

Granularity granularity_from_string(const std::string& text) {
    if (text == "daily") return Granularity::Daily;
    if (text == "monthly") return Granularity::Monthly;
    if (text == "entropy") return Granularity::Entropy;
    throw ConfigError("unknown granularity: '" + text + "'");
}

std::string to_string(Granularity g) {
    switch (g) {
        case Granularity::Daily: return "daily";
        case Granularity::Monthly: return "monthly";
        default: return "entropy";
    }
}

std::vector<ImpactRecord> granularity_compare(const EnsemblePair& pair, Granularity mode,
                                              const EntropyParams& params,
                                              const ChangepointConfig& cfg, Scalar ci_level) {
    const Index len = pair.length();
    std::vector<FeatureInterval> intervals;
    switch (mode) {
        case Granularity::Daily:
            for (Index d = 1; d <= len; ++d) {
                const Date date = pair.start_date + static_cast<std::int32_t>(d - 1);
                intervals.push_back(FeatureInterval{d, d, date, date});
            }
            break;
        case Granularity::Monthly: {
            Index start = 1;
            for (Index d = 1; d <= len; ++d) {
                const Date date = pair.start_date + static_cast<std::int32_t>(d - 1);
                const Date next = date + 1;
                const bool month_ends = d == len || next.month() != date.month();
                if (month_ends) {
                    intervals.push_back(FeatureInterval{
                        start, d, pair.start_date + static_cast<std::int32_t>(start - 1), date});
                    start = d + 1;
                }
            }
            break;
        }
        case Granularity::Entropy: {
            const auto entropy = entropy_series(pair, params);
            const auto nu = detect_changepoints(entropy, cfg);
            intervals = map_to_time(nu, params, len, pair.start_date);
            break;
        }
    }
    return impacts_for_features(pair, intervals, ci_level);
}

}  // namespace impactpath
