#pragma once

#include <nlohmann/json.hpp>

#include "gadforge/perturb.hpp"

namespace gadforge {

// One document per injection:
// {"version":1,"types":[{"type":1,"name":"degree","nodes":[..],"controls":[..],
//   "entries":[{"node":7,"added":[[u,v],..],"removed":[..],"intensity":3.2}, ..]}, ..]}
nlohmann::json ledger_to_json(const PerturbationLedger& ledger);
PerturbationLedger ledger_from_json(const nlohmann::json& doc);

}  // namespace gadforge
