#include "satbot/assignment.hpp"

#include <algorithm>

#include "satbot/error.hpp"
#include "satbot/random.hpp"

namespace satbot {

nlohmann::json to_json(const GroupAssignment& a) {
    return {
        {"participant_id", a.participant_id},
        {"variant", to_string(a.variant)},
        {"assigned_at", format_timestamp(a.assigned_at)},
        {"rng_seed_reference", a.rng_seed_reference},
    };
}

GroupAssignment assignment_from_json(const nlohmann::json& j) {
    GroupAssignment a;
    a.participant_id = j.at("participant_id").get<std::string>();
    a.variant = parse_variant(j.at("variant").get<std::string>());
    a.assigned_at = parse_timestamp(j.at("assigned_at").get<std::string>());
    a.rng_seed_reference = j.at("rng_seed_reference").get<std::string>();
    return a;
}

std::array<Variant, 3> BlockRandomizer::block_order(std::uint64_t seed, std::uint64_t block) {
    std::array<Variant, 3> order = {Variant::Alpha, Variant::Beta, Variant::Gamma};
    SplitMix64 rng(stream_seed(seed, block));
    shuffle_in_place(order.begin(), order.end(), rng);
    return order;
}

GroupAssignment BlockRandomizer::assign(const std::string& participant_id, Timestamp now) {
    std::lock_guard lock(mu_);
    if (assigned_.contains(participant_id)) {
        throw Error(ErrorCode::AlreadyAssigned, participant_id);
    }
    const std::uint64_t slot = next_slot_++;
    const std::uint64_t block = slot / 3;
    GroupAssignment a;
    a.participant_id = participant_id;
    a.variant = block_order(seed_, block)[slot % 3];
    a.assigned_at = now;
    a.rng_seed_reference =
        "seed=" + std::to_string(seed_) + ";block=" + std::to_string(block) + ";slot=" + std::to_string(slot);
    assigned_.emplace(participant_id, a);
    return a;
}

void BlockRandomizer::restore(const GroupAssignment& a) {
    std::lock_guard lock(mu_);
    const auto pos = a.rng_seed_reference.find(";slot=");
    if (pos != std::string::npos) {
        const std::uint64_t slot = std::stoull(a.rng_seed_reference.substr(pos + 6));
        next_slot_ = std::max(next_slot_, slot + 1);
    }
    assigned_[a.participant_id] = a;
}

std::size_t BlockRandomizer::assigned_count() const {
    std::lock_guard lock(mu_);
    return assigned_.size();
}

}  // namespace satbot
