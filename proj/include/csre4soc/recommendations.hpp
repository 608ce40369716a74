#pragma once

#include <string>
#include <vector>

#include "csre4soc/catalog.hpp"

namespace csre4soc {

struct Recommendation {
    std::string action_id;
    DimensionId dimension = DimensionId::human;
    std::string text;

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// One recommendation per unimplemented action, in dimension order then
/// catalog order. Texts are copied from the catalog unchanged.
inline std::vector<Recommendation> recommend(const ValidatedSubmission& sub, const ActionCatalog& cat) {
    std::vector<Recommendation> out;
    for (const Dimension& dim : cat.dimensions()) {
        for (const ActionItem& a : dim.actions) {
            if (!sub->implemented.contains(a.id)) out.push_back({a.id, dim.id, a.recommendation});
        }
    }
    return out;
}

inline json recommendations_to_json(const std::vector<Recommendation>& recs) {
    json out = json::array();
    for (const Recommendation& r : recs) {
        out.push_back({{"action_id", r.action_id}, {"dimension", std::string(to_string(r.dimension))}, {"text", r.text}});
    }
    return out;
}

inline std::vector<Recommendation> recommendations_from_json(const json& j) {
    std::vector<Recommendation> out;
    for (const json& r : j) {
        auto dim = parse_dimension_id(r.at("dimension").get<std::string>());
        if (!dim) throw Error(ErrorCode::schema_violation, "bad recommendation dimension", "/recommendations");
        out.push_back({r.at("action_id").get<std::string>(), *dim, r.at("text").get<std::string>()});
    }
    return out;
}

}  // namespace csre4soc
