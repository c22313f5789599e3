#include "impactpath/core.hpp"

#include <doctest.h>

using namespace impactpath;

TEST_CASE("build_windows counts and offsets") {
    const auto windows = build_windows(100, 30, 9);
    REQUIRE(windows.size() == 8);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        CHECK(windows[i].index == static_cast<int>(i + 1));
        CHECK(windows[i].start == static_cast<Index>(9 * i));
        CHECK(windows[i].length == 30);
    }
    CHECK(windows.back().start == 63);
}

TEST_CASE("build_windows edge sizes") {
    CHECK(build_windows(30, 30, 9).size() == 1);
    // one trailing sample short of a second window
    CHECK(build_windows(31, 30, 9).size() == 1);
    CHECK(build_windows(39, 30, 9).size() == 2);
    CHECK_THROWS_AS(build_windows(20, 30, 9), DataError);
    CHECK_THROWS_AS(build_windows(30, 30, 0), DataError);
}

TEST_CASE("window coverage is exact and overlap iff p < n") {
    for (const auto& [len, n, p] : std::vector<std::tuple<Index, Index, Index>>{
             {100, 30, 9}, {100, 10, 10}, {50, 5, 7}, {64, 30, 34}}) {
        const auto windows = build_windows(len, n, p);
        const Index last = static_cast<Index>(windows.size() - 1);
        CHECK(windows.back().start == last * p);
        for (std::size_t i = 1; i < windows.size(); ++i) {
            const Index prev_end = windows[i - 1].start + n;  // one past the last offset
            if (p <= n) CHECK(windows[i].start <= prev_end);  // gap-free union
            CHECK((windows[i].start < prev_end) == (p < n));  // overlap iff p < n
        }
    }
}

TEST_CASE("regional_mean weighted average") {
    RegionMask mask;
    mask.regions = {"A", "B"};
    mask.assignment = {0, 0, 1};
    mask.weights = {1.0, 3.0, 2.0};

    Series grid(3);
    grid << 2.0, 4.0, 7.0;
    const auto means = regional_mean(grid, mask);
    CHECK(means[0] == doctest::Approx(3.5).epsilon(1e-15));  // (2 + 12) / 4
    CHECK(means[1] == 7.0);                                  // single column
}

TEST_CASE("regional_mean of a constant field") {
    RegionMask mask;
    mask.regions = {"A", "B", "C"};
    mask.assignment = {0, 1, 2, 1, 0};
    mask.weights = {1.0, 2.0, 3.0, 4.0, 5.0};
    const auto means = regional_mean(Series::Constant(5, 5.0), mask);
    for (Index r = 0; r < 3; ++r) CHECK(means[r] == 5.0);
}

TEST_CASE("regional_mean invariant under uniform weight scaling") {
    RegionMask mask;
    mask.regions = {"A"};
    mask.assignment = {0, 0, 0};
    mask.weights = {1.0, 2.0, 3.0};
    Series grid(3);
    grid << 1.0, -2.0, 0.5;
    const Scalar before = regional_mean(grid, mask)[0];
    for (auto& w : mask.weights) w *= 7.5;
    CHECK(regional_mean(grid, mask)[0] == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("regional_mean rejects empty regions and bad masks") {
    RegionMask mask;
    mask.regions = {"A", "B"};
    mask.assignment = {0, 0};
    mask.weights = {1.0, 1.0};
    CHECK_THROWS_AS(regional_mean(Series::Zero(2), mask), DataError);  // B empty
    mask.weights[1] = -1.0;
    mask.assignment[1] = 1;
    CHECK_THROWS_AS(regional_mean(Series::Zero(2), mask), DataError);  // bad weight
    CHECK_THROWS_AS(regional_mean(Series::Zero(2), RegionMask{{"A"}, {0, 0, 0}, {1, 1, 1}}),
                    DataError);  // grid/mask length mismatch
}

namespace {

RegionalSeries make_series(const std::string& var, const std::string& region, Scenario sc,
                           int member, Index n, Scalar fill) {
    RegionalSeries s;
    s.variable = var;
    s.region = region;
    s.scenario = sc;
    s.member = member;
    s.start_date = Date::from_ymd(1991, 6, 1);
    s.values = Series::Constant(n, fill);
    return s;
}

}  // namespace

TEST_CASE("align_pair pairs members and validates") {
    std::vector<RegionalSeries> forced, cf;
    for (int e = 1; e <= 9; ++e) {
        forced.push_back(make_series("TREFHT", "Temperate North", Scenario::Forced, e, 40, e));
        cf.push_back(make_series("TREFHT", "Temperate North", Scenario::Counterfactual, e, 40, -e));
    }
    const auto pair = align_pair(forced, cf);
    CHECK(pair.ensemble_size() == 9);
    CHECK(pair.length() == 40);
    CHECK(pair.forced[2][0] == 3.0);
    CHECK(pair.counterfactual[2][0] == -3.0);

    SUBCASE("length mismatch names the member") {
        forced[2].values = Series::Constant(39, 3.0);
        CHECK_THROWS_WITH_AS(align_pair(forced, cf), doctest::Contains("member 3"), DataError);
    }
    SUBCASE("date mismatch detected") {
        cf[4].start_date = cf[4].start_date + 1;
        CHECK_THROWS_AS(align_pair(forced, cf), DataError);
    }
    SUBCASE("unmatched member index") {
        forced[8].member = 11;
        CHECK_THROWS_AS(align_pair(forced, cf), DataError);
    }
    SUBCASE("non-finite sample rejected at ingest") {
        forced[0].values[5] = std::numeric_limits<Scalar>::quiet_NaN();
        CHECK_THROWS_AS(align_pair(forced, cf), DataError);
    }
}

TEST_CASE("align_pair idempotence and E=1") {
    const auto f = make_series("V", "R", Scenario::Forced, 1, 12, 1.5);
    const auto c = make_series("V", "R", Scenario::Counterfactual, 1, 12, 0.5);
    const auto pair = align_pair({f}, {c});
    CHECK(pair.ensemble_size() == 1);

    // Re-aligning the pair's own content reproduces it.
    RegionalSeries f2 = f, c2 = c;
    f2.values = pair.forced[0];
    c2.values = pair.counterfactual[0];
    const auto again = align_pair({f2}, {c2});
    CHECK((again.forced[0] == pair.forced[0]).all());
    CHECK((again.counterfactual[0] == pair.counterfactual[0]).all());
    CHECK(again.start_date == pair.start_date);
}

TEST_CASE("date parsing and arithmetic") {
    const Date d = Date::parse("1991-06-15");
    CHECK(d.to_string() == "1991-06-15");
    CHECK((d + 17).to_string() == "1991-07-02");
    CHECK(Date::parse("1992-03-01") - Date::parse("1992-02-28") == 2);  // leap year
    CHECK_THROWS_AS(Date::parse("1991-13-01"), DataError);
    CHECK_THROWS_AS(Date::parse("not-a-date"), DataError);
}
