#pragma once

#include <json.hpp>

#include "splitrx/constellation.hpp"

namespace splitrx {

inline nlohmann::json constellation_to_json(const Constellation& c) {
    nlohmann::json j;
    j["scheme"] = scheme_name(c.scheme);
    j["M"] = c.order;
    auto pts = nlohmann::json::array();
    for (const auto& p : c.points) pts.push_back({p.value.real(), p.value.imag()});
    j["points"] = pts;
    if (!c.rings.empty()) {
        auto rings = nlohmann::json::array();
        for (const auto& r : c.rings) rings.push_back({r.points, r.radius});
        j["rings"] = rings;
    }
    return j;
}

}  // namespace splitrx
