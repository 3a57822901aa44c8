#pragma once

#include <array>

#include "satbot/session.hpp"
#include "satbot/timeutil.hpp"

namespace satbot {

inline constexpr int kProtocolDays = 8;

/// 1 + whole calendar days since registration, capped at day 8. Several
/// sessions on one calendar day share a value.
int compute_protocol_day(Date registration_date, Date today);

/// Day -> stage lookup. The default partition is 1-3 Beginning, 4-6
/// Intermediate, 7-8 Advanced; deployments can swap the table.
struct StageTable {
    std::array<Stage, kProtocolDays> by_day = {
        Stage::Beginning,    Stage::Beginning,    Stage::Beginning, Stage::Intermediate,
        Stage::Intermediate, Stage::Intermediate, Stage::Advanced,  Stage::Advanced,
    };
};

Stage stage_for_day(int day, const StageTable& table = {});

}  // namespace satbot
