#include "satbot/protocol_calendar.hpp"

#include <algorithm>
#include <string>

#include "satbot/error.hpp"

namespace satbot {

int compute_protocol_day(Date registration_date, Date today) {
    if (today < registration_date) {
        throw Error(ErrorCode::InvalidDate,
                    "today " + format_date(today) + " precedes registration " + format_date(registration_date));
    }
    const auto elapsed = (today - registration_date).count();
    return static_cast<int>(std::min<long long>(1 + elapsed, kProtocolDays));
}

Stage stage_for_day(int day, const StageTable& table) {
    if (day < 1 || day > kProtocolDays) {
        throw Error(ErrorCode::OutOfRange, "protocol day " + std::to_string(day) + " outside 1..8");
    }
    return table.by_day[static_cast<std::size_t>(day - 1)];
}

}  // namespace satbot
