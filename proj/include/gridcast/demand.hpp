#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "gridcast/common.hpp"

namespace gridcast {

using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using Date = std::chrono::sys_days;

struct DemandRecord {
    HourStamp time;
    double demand_mwh = 0.0;
};

// Hourly national demand observations plus the public-holiday calendar.
// Invariant: timestamps strictly increasing at a fixed 1-hour step,
// demand finite and non-negative. validate() enforces both.
struct DemandSeries {
    std::vector<DemandRecord> records;
    std::set<Date> holidays;

    void validate() const;
    Date date_at(std::size_t i) const;
    int hour_at(std::size_t i) const;
};

struct ColumnMap {
    std::string timestamp = "timestamp";
    std::string demand = "demand";
    std::string timestamp_format;  // empty = ISO-8601 "YYYY-MM-DD[ T]HH[:MM[:SS]]"
};

DemandSeries ingest_demand_csv(const std::string& path, const ColumnMap& columns = {});

struct SynthParams {
    Date start;
    int n_days = 365;
    double base_mwh = 30000.0;
    double daily_amp_mwh = 5000.0;
    double weekly_amp_mwh = 2000.0;
    double seasonal_amp_mwh = 4000.0;
    double noise_sd_mwh = 500.0;
    double drift_per_year_mwh = 0.0;
    std::uint64_t seed = 1;
};

// Deterministic synthetic series:
//   demand = base + daily sinusoid + weekend offset (-weekly_amp on Sat/Sun)
//          + annual sinusoid + linear drift + Gaussian noise, clipped at 0.
DemandSeries synth_demand(const SynthParams& p);

std::set<Date> load_holidays(const std::string& path);

HourStamp parse_timestamp(const std::string& text, const std::string& format = "");
Date parse_date(const std::string& text);
std::string format_date(Date d);
std::string format_timestamp(HourStamp t);

inline Date stamp_date(HourStamp t) { return std::chrono::floor<std::chrono::days>(t); }
inline int stamp_hour(HourStamp t) {
    auto h = (t - stamp_date(t)).count();
    return static_cast<int>(h);
}

}  // namespace gridcast
