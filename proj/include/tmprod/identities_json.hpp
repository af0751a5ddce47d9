#pragma once

#include <json.hpp>

#include "tmprod/identities.hpp"

namespace tmprod {

inline nlohmann::json to_json(const Identity& id) {
    return nlohmann::json{
        {"name", id.name},
        {"start_index", id.spec.start_index},
        {"numerator_shifts", id.spec.numerator_shifts},
        {"denominator_shifts", id.spec.denominator_shifts},
        {"target", {{"coeff", id.target.coeff}, {"sqrt2_exp", id.target.sqrt2_exp}}},
        {"citation", id.citation},
    };
}

inline nlohmann::json catalog_json() {
    nlohmann::json arr = nlohmann::json::array();
    for (const Identity& id : builtin_catalog()) arr.push_back(to_json(id));
    return arr;
}

} // namespace tmprod
