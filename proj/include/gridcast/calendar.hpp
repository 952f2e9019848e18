#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridcast/demand.hpp"

namespace gridcast {

constexpr int kNumSeasons = 7;

struct CalendarFeatures {
    int hour = 0;          // 0-23
    int month = 1;         // 1-12
    int day_of_week = 0;   // 0 = Monday .. 6 = Sunday
    int day_of_month = 1;  // 1-31
    int year = 1970;
    bool is_holiday_or_weekend = false;
    int season = 0;  // index into the 7-way season table
};

struct MonthDay {
    int month = 1;
    int day = 1;
    friend auto operator<=>(const MonthDay&, const MonthDay&) = default;
};

// Half-open [start, end) month-day interval; may wrap across new year.
struct SeasonInterval {
    std::string name;
    MonthDay start;
    MonthDay end;
    bool contains(MonthDay md) const {
        if (start <= end) return start <= md && md < end;
        return md >= start || md < end;
    }
};

// Seven intervals that must partition the calendar year. The reserve
// market's season calendar splits autumn in two and winter in three;
// the default table mirrors that shape and is fully user-overridable.
struct SeasonTable {
    std::array<SeasonInterval, kNumSeasons> seasons;

    void validate() const;  // OverlappingSeasons / UncoveredDate
    int season_of(Date d) const;
};

SeasonTable default_season_table();

std::vector<CalendarFeatures> label_calendar(const DemandSeries& series,
                                             const SeasonTable& table);

}  // namespace gridcast
