#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

#include "json.hpp"

#include "satbot/session.hpp"
#include "satbot/timeutil.hpp"

namespace satbot {

struct GroupAssignment {
    std::string participant_id;
    Variant variant = Variant::Alpha;
    Timestamp assigned_at{};
    /// "seed=<s>;block=<b>;slot=<k>", enough to recompute the draw.
    std::string rng_seed_reference;
};

nlohmann::json to_json(const GroupAssignment& a);
GroupAssignment assignment_from_json(const nlohmann::json& j);

/// Permuted-block randomization with blocks of three: every block holds one
/// of each variant in a seeded random order, so arm sizes never differ by
/// more than one. Block b's order depends only on (seed, b).
class BlockRandomizer {
public:
    explicit BlockRandomizer(std::uint64_t seed) : seed_(seed) {}

    /// Throws AlreadyAssigned.
    GroupAssignment assign(const std::string& participant_id, Timestamp now);

    /// Re-registers an assignment loaded from storage, advancing the slot
    /// counter past it.
    void restore(const GroupAssignment& a);

    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t assigned_count() const;

    static std::array<Variant, 3> block_order(std::uint64_t seed, std::uint64_t block);

private:
    std::uint64_t seed_;
    mutable std::mutex mu_;
    std::uint64_t next_slot_ = 0;
    std::map<std::string, GroupAssignment> assigned_;
};

}  // namespace satbot
