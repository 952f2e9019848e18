#include "gridcast/calendar.hpp"

namespace gridcast {

SeasonTable default_season_table() {
    // Shipped default partition: autumn split in two, winter in three,
    // half-open intervals assigned by start date.
    return SeasonTable{{{
        {"spring", {4, 1}, {6, 1}},
        {"summer", {6, 1}, {8, 1}},
        {"late_summer", {8, 1}, {9, 1}},
        {"early_autumn", {9, 1}, {10, 1}},
        {"late_autumn", {10, 1}, {11, 1}},
        {"early_winter", {11, 1}, {1, 15}},
        {"late_winter", {1, 15}, {4, 1}},
    }}};
}

void SeasonTable::validate() const {
    // check every month-day of a leap reference year maps to exactly one season
    static const int days_in_month[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    for (int m = 1; m <= 12; ++m) {
        for (int d = 1; d <= days_in_month[m - 1]; ++d) {
            const MonthDay md{m, d};
            int hits = 0;
            for (const auto& s : seasons)
                if (s.contains(md)) ++hits;
            char buf[8];
            std::snprintf(buf, sizeof buf, "%02d-%02d", m, d);
            if (hits > 1) fail("OverlappingSeasons", std::string("month-day ") + buf);
            if (hits == 0) fail("UncoveredDate", std::string("month-day ") + buf);
        }
    }
}

int SeasonTable::season_of(Date d) const {
    const std::chrono::year_month_day ymd{d};
    const MonthDay md{static_cast<int>(static_cast<unsigned>(ymd.month())),
                      static_cast<int>(static_cast<unsigned>(ymd.day()))};
    for (int i = 0; i < kNumSeasons; ++i)
        if (seasons[i].contains(md)) return i;
    fail("UncoveredDate", format_date(d));
}

std::vector<CalendarFeatures> label_calendar(const DemandSeries& series,
                                             const SeasonTable& table) {
    table.validate();
    std::vector<CalendarFeatures> out;
    out.reserve(series.records.size());
    for (const auto& rec : series.records) {
        const Date date = stamp_date(rec.time);
        const std::chrono::year_month_day ymd{date};
        const std::chrono::weekday wd{date};
        CalendarFeatures f;
        f.hour = stamp_hour(rec.time);
        f.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
        f.day_of_week = static_cast<int>(wd.iso_encoding()) - 1;  // Mon=0..Sun=6
        f.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
        f.year = static_cast<int>(ymd.year());
        const bool weekend = f.day_of_week >= 5;
        f.is_holiday_or_weekend = weekend || series.holidays.count(date) > 0;
        f.season = table.season_of(date);
        out.push_back(f);
    }
    return out;
}

}  // namespace gridcast
