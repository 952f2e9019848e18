#include "gridcast/demand.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace gridcast {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim whitespace and a possible trailing \r
        auto b = field.find_first_not_of(" \t\r\n");
        auto e = field.find_last_not_of(" \t\r\n");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back("");
    return out;
}

HourStamp make_stamp(int y, int mo, int d, int h) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                       day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23)
        fail("UnparsableTimestamp", "invalid calendar date or hour");
    return sys_days{ymd} + hours{h};
}

}  // namespace

HourStamp parse_timestamp(const std::string& text, const std::string& format) {
    if (!format.empty()) {
        std::tm tm = {};
        std::istringstream ss(text);
        ss >> std::get_time(&tm, format.c_str());
        if (ss.fail()) fail("UnparsableTimestamp", "'" + text + "' with format " + format);
        return make_stamp(tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour);
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%*1[T ]%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (n < 4) fail("UnparsableTimestamp", "'" + text + "'");
    if (mi != 0 || s != 0) fail("UnparsableTimestamp", "'" + text + "' is not on the hour");
    return make_stamp(y, mo, d, h);
}

Date parse_date(const std::string& text) {
    int y = 0, mo = 0, d = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &mo, &d) != 3)
        fail("UnparsableTimestamp", "date '" + text + "'");
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) fail("UnparsableTimestamp", "date '" + text + "'");
    return sys_days{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(HourStamp t) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%s %02d:00", format_date(stamp_date(t)).c_str(),
                  stamp_hour(t));
    return buf;
}

void DemandSeries::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double v = records[i].demand_mwh;
        if (!std::isfinite(v) || v < 0.0)
            fail("NegativeDemand", "demand at " + format_timestamp(records[i].time) +
                                       " is " + std::to_string(v));
        if (i > 0) {
            const auto gap = records[i].time - records[i - 1].time;
            if (gap == std::chrono::hours{0})
                fail("DuplicateTimestamp", format_timestamp(records[i].time));
            if (gap < std::chrono::hours{0})
                fail("DuplicateTimestamp",
                     "timestamps not increasing at " + format_timestamp(records[i].time));
            if (gap != std::chrono::hours{1})
                fail("GapInSeries", "missing hour " +
                                        format_timestamp(records[i - 1].time + std::chrono::hours{1}));
        }
    }
}

Date DemandSeries::date_at(std::size_t i) const { return stamp_date(records[i].time); }
int DemandSeries::hour_at(std::size_t i) const { return stamp_hour(records[i].time); }

DemandSeries ingest_demand_csv(const std::string& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) fail("FileNotFound", path);
    std::string line;
    if (!std::getline(in, line)) fail("MissingColumn", "empty file: " + path);
    const auto header = split_csv_line(line);
    int ts_col = -1, dm_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == columns.timestamp) ts_col = static_cast<int>(i);
        if (header[i] == columns.demand) dm_col = static_cast<int>(i);
    }
    if (ts_col < 0) fail("MissingColumn", "timestamp column '" + columns.timestamp + "'");
    if (dm_col < 0) fail("MissingColumn", "demand column '" + columns.demand + "'");

    DemandSeries series;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        const auto need = static_cast<std::size_t>(std::max(ts_col, dm_col));
        if (fields.size() <= need) fail("UnparsableTimestamp", "short row: " + line);
        DemandRecord rec;
        rec.time = parse_timestamp(fields[ts_col], columns.timestamp_format);
        try {
            rec.demand_mwh = std::stod(fields[dm_col]);
        } catch (const std::exception&) {
            fail("NegativeDemand", "unparsable demand '" + fields[dm_col] + "'");
        }
        series.records.push_back(rec);
    }
    std::sort(series.records.begin(), series.records.end(),
              [](const DemandRecord& a, const DemandRecord& b) { return a.time < b.time; });
    series.validate();
    return series;
}

DemandSeries synth_demand(const SynthParams& p) {
    if (p.n_days < 1) fail("InvalidArgument", "n_days must be >= 1");
    if (p.daily_amp_mwh < 0 || p.weekly_amp_mwh < 0 || p.seasonal_amp_mwh < 0 ||
        p.noise_sd_mwh < 0)
        fail("InvalidArgument", "amplitudes must be >= 0");

    Rng rng(p.seed);
    DemandSeries series;
    series.records.reserve(static_cast<std::size_t>(p.n_days) * 24);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int day = 0; day < p.n_days; ++day) {
        const Date date = p.start + std::chrono::days{day};
        const std::chrono::weekday wd{date};
        const bool weekend = wd == std::chrono::Saturday || wd == std::chrono::Sunday;
        for (int h = 0; h < 24; ++h) {
            const double t_hours = day * 24.0 + h;
            double v = p.base_mwh;
            v += p.daily_amp_mwh * std::sin(two_pi * h / 24.0);
            v += weekend ? -p.weekly_amp_mwh : 0.0;
            v += p.seasonal_amp_mwh * std::sin(two_pi * day / 365.25);
            v += p.drift_per_year_mwh * (t_hours / (24.0 * 365.25));
            if (p.noise_sd_mwh > 0.0) v += p.noise_sd_mwh * rng.normal();
            series.records.push_back({HourStamp{std::chrono::sys_days{date}} +
                                          std::chrono::hours{h},
                                      std::max(0.0, v)});
        }
    }
    series.validate();
    return series;
}

std::set<Date> load_holidays(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("FileNotFound", path);
    std::set<Date> out;
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r\n");
        out.insert(parse_date(line.substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace gridcast
