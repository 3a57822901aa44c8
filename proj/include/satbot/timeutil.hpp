#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace satbot {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

std::string format_date(Date d);
std::string format_timestamp(Timestamp t);

/// Parses YYYY-MM-DD. Throws Error{InvalidDate} on malformed input.
Date parse_date(std::string_view s);
/// Parses YYYY-MM-DDTHH:MM:SSZ.
Timestamp parse_timestamp(std::string_view s);

Date date_of(Timestamp t);

/// Injectable wall clock; the service never reads system_clock directly.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
    Date today() const { return date_of(now()); }
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override {
        return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    }
};

/// Manually driven clock for simulations and tests.
class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start) : now_(start) {}
    Timestamp now() const override { return now_; }
    void advance(std::chrono::seconds by) { now_ += by; }
    void set(Timestamp t) { now_ = t; }

private:
    Timestamp now_;
};

}  // namespace satbot
