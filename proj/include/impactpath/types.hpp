#pragma once

#include <Eigen/Core>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace impactpath {

using Scalar = double;
using Series = Eigen::ArrayXd;
using Eigen::Index;

// Thrown for malformed configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for invalid or inconsistent input data (CLI exit code 3).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a graph search cannot reach its target (CLI exit code 4).
struct PathNotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gregorian calendar day, stored as days since 1970-01-01.
class Date {
  public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}

    static Date from_ymd(int year, unsigned month, unsigned day) {
        using namespace std::chrono;
        year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
        if (!ymd.ok()) throw DataError("invalid calendar date");
        return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
    }

    // Parses strict ISO-8601 "YYYY-MM-DD".
    static Date parse(const std::string& text);

    std::int32_t serial() const { return serial_; }

    int year() const { return int(ymd().year()); }
    unsigned month() const { return unsigned(ymd().month()); }
    unsigned day() const { return unsigned(ymd().day()); }

    std::string to_string() const;

    Date operator+(std::int32_t days) const { return Date(serial_ + days); }
    Date operator-(std::int32_t days) const { return Date(serial_ - days); }
    std::int32_t operator-(Date other) const { return serial_ - other.serial_; }

    friend bool operator==(Date a, Date b) { return a.serial_ == b.serial_; }
    friend bool operator!=(Date a, Date b) { return a.serial_ != b.serial_; }
    friend bool operator<(Date a, Date b) { return a.serial_ < b.serial_; }
    friend bool operator<=(Date a, Date b) { return a.serial_ <= b.serial_; }
    friend bool operator>(Date a, Date b) { return a.serial_ > b.serial_; }
    friend bool operator>=(Date a, Date b) { return a.serial_ >= b.serial_; }

  private:
    std::chrono::year_month_day ymd() const {
        using namespace std::chrono;
        return year_month_day{sys_days{days{serial_}}};
    }

    std::int32_t serial_ = 0;
};

enum class Scenario { Forced, Counterfactual };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& text);

// One variable's regional-mean daily values for a single ensemble member.
struct RegionalSeries {
    std::string variable;
    std::string region;
    Scenario scenario = Scenario::Forced;
    int member = 1;  // 1-based ensemble index
    Date start_date;
    Series values;

    // Rejects non-finite samples and member indices < 1.
    void validate() const;
};

// Aligned forced/counterfactual ensembles for one (variable, region).
struct EnsemblePair {
    std::string variable;
    std::string region;
    Date start_date;
    std::vector<Series> forced;          // index e-1 holds member e
    std::vector<Series> counterfactual;  // paired with forced[e-1]

    int ensemble_size() const { return static_cast<int>(forced.size()); }
    Index length() const { return forced.empty() ? 0 : forced.front().size(); }
};

// One sliding window into a daily series; index is 1-based.
struct Window {
    int index = 1;
    Index start = 0;  // 0-based offset (index-1)*p
    Index length = 0;
};

// Non-overlapping region assignment with per-column area weights.
struct RegionMask {
    std::vector<std::string> regions;
    std::vector<int> assignment;    // per-column region index into `regions`
    std::vector<Scalar> weights;    // strictly positive

    void validate() const;
};

}  // namespace impactpath
