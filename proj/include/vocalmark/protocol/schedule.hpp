// Copyright 2026 The vocalmark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Session timing rules for the two study arms.
//   Day:  three sessions in a day, starting 08-10, 13-15 and 17-19, at least
//         3.5 h apart; an optional second day on the same weekday 8-11 weeks
//         later, under the same rules.
//   Week: Monday, Wednesday and Friday of one week, start times of day
//         pairwise less than 30 minutes apart.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/protocol/report.hpp"

namespace vocalmark::protocol {

using Minutes = std::chrono::minutes;
using DateTime = std::chrono::sys_time<Minutes>;

// "YYYY-MM-DDTHH:MM" with an optional ":SS" (ignored) and either 'T' or ' '
// as the separator.
inline DateTime parse_datetime(const std::string& s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  char sep = 0;
  int consumed = 0;
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed);
  bool ok = n == 6 && (sep == 'T' || sep == ' ');
  if (ok && static_cast<std::size_t>(consumed) != s.size()) {
    int more = 0;
    ok = std::sscanf(s.c_str() + consumed, ":%2d%n", &sec, &more) == 1 &&
         static_cast<std::size_t>(consumed + more) == s.size() && sec >= 0 && sec < 60;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ok || !ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59)
    fail(Errc::kInvalidArgument, "bad date-time '" + s + "' (expected YYYY-MM-DDTHH:MM)");
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + Minutes{mi};
}

inline std::string format_datetime(DateTime t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const auto m = (t - day).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(m / 60),
                static_cast<int>(m % 60));
  return buf;
}

inline int minute_of_day(DateTime t) {
  return static_cast<int>((t - std::chrono::floor<std::chrono::days>(t)).count());
}

inline std::chrono::weekday weekday_of(DateTime t) {
  return std::chrono::weekday{std::chrono::floor<std::chrono::days>(t)};
}

enum class Arm { kDay, kWeek };

struct SessionSchedule {
  Arm arm = Arm::kDay;
  std::string participant;
  std::vector<DateTime> session_starts;
};

struct ScheduleRules {
  struct Window {
    int from, to;  // minutes of day, inclusive
  };
  std::vector<Window> day_windows{{8 * 60, 10 * 60}, {13 * 60, 15 * 60}, {17 * 60, 19 * 60}};
  Minutes min_gap{210};
  int day2_min_days = 56;
  int day2_max_days = 77;
  Minutes max_week_drift{30};  // exclusive
};

namespace detail {

inline std::string hhmm(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

inline void check_day(const std::vector<DateTime>& s, const std::string& tag, const ScheduleRules& rules, Report& r) {
  for (std::size_t i = 0; i < s.size() && i < rules.day_windows.size(); ++i) {
    const int m = minute_of_day(s[i]);
    const auto& w = rules.day_windows[i];
    if (m < w.from || m > w.to)
      r.error("OutsideWindow", tag + "/S" + std::to_string(i + 1),
              "starts " + hhmm(m) + ", window " + hhmm(w.from) + "-" + hhmm(w.to));
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto gap = s[i] - s[i - 1];
    if (gap < rules.min_gap)
      r.error("MinGap", tag + "/S" + std::to_string(i) + "-S" + std::to_string(i + 1),
              "gap " + hhmm(static_cast<int>(gap.count())) + " below " + hhmm(static_cast<int>(rules.min_gap.count())));
  }
}

}  // namespace detail

// Sessions are sorted before checking, so input order does not matter.
inline Report validate_schedule(SessionSchedule schedule, const ScheduleRules& rules = {}) {
  Report r;
  auto& s = schedule.session_starts;
  std::sort(s.begin(), s.end());
  std::map<std::chrono::sys_days, std::vector<DateTime>> by_date;
  for (auto t : s) by_date[std::chrono::floor<std::chrono::days>(t)].push_back(t);

  if (schedule.arm == Arm::kDay) {
    if (by_date.size() > 2) r.error("DayCount", "", std::to_string(by_date.size()) + " recording dates; expected 1 or 2");
    std::size_t k = 0;
    for (const auto& [date, sessions] : by_date) {
      const std::string tag = "D" + std::to_string(++k);
      if (sessions.size() != rules.day_windows.size())
        r.error("SessionCount", tag,
                std::to_string(sessions.size()) + " sessions; expected " + std::to_string(rules.day_windows.size()));
      detail::check_day(sessions, tag, rules, r);
    }
    if (by_date.size() == 2) {
      const auto d1 = by_date.begin()->first, d2 = std::next(by_date.begin())->first;
      const auto days = (d2 - d1).count();
      if (std::chrono::weekday{d1} != std::chrono::weekday{d2}) r.error("WeekdayMismatch", "D2", "Day 2 is on a different weekday");
      if (days < rules.day2_min_days || days > rules.day2_max_days)
        r.error("Day2Interval", "D2",
                std::to_string(days) + " days after Day 1; expected " + std::to_string(rules.day2_min_days) + "-" +
                    std::to_string(rules.day2_max_days));
    }
  } else {
    using std::chrono::Friday, std::chrono::Monday, std::chrono::Wednesday;
    const std::chrono::weekday expected[] = {Monday, Wednesday, Friday};
    if (s.size() != 3) r.error("SessionCount", "", std::to_string(s.size()) + " sessions; expected 3");
    if (by_date.size() != s.size()) r.error("SameDay", "", "two sessions share a date");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto wd = weekday_of(s[i]);
      if (wd != Monday && wd != Wednesday && wd != Friday)
        r.error("WrongWeekday", "S" + std::to_string(i + 1), format_datetime(s[i]) + " is not a Monday, Wednesday or Friday");
      else if (s.size() == 3 && wd != expected[i])
        r.error("WrongWeekday", "S" + std::to_string(i + 1), "sessions must fall on Monday, Wednesday and Friday in order");
    }
    if (!s.empty()) {
      const auto first = std::chrono::floor<std::chrono::days>(s.front());
      const auto last = std::chrono::floor<std::chrono::days>(s.back());
      if ((last - first).count() > 4) r.error("NotSameWeek", "", "sessions span more than one working week");
    }
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const int diff = std::abs(minute_of_day(s[i]) - minute_of_day(s[j]));
        if (Minutes{diff} >= rules.max_week_drift)
          r.error("StartTimeDrift", "S" + std::to_string(i + 1) + "-S" + std::to_string(j + 1),
                  "start times differ by " + std::to_string(diff) + " min");
      }
  }
  return r;
}

inline SessionSchedule schedule_from_json(const nlohmann::json& j) {
  SessionSchedule s;
  try {
    const auto arm = j.at("arm").get<std::string>();
    if (arm == "Day") s.arm = Arm::kDay;
    else if (arm == "Week") s.arm = Arm::kWeek;
    else fail(Errc::kBadConfig, "arm must be \"Day\" or \"Week\"");
    s.participant = j.value("participant", "");
    for (const auto& t : j.at("sessions")) s.session_starts.push_back(parse_datetime(t.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kBadConfig, std::string("schedule: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kBadConfig) throw;
    fail(Errc::kBadConfig, e.what());
  }
  return s;
}

}  // namespace vocalmark::protocol
