#pragma once

// Default scoring model: weighted coverage per dimension, mapped to an
// ordinal level by the catalog thresholds, aggregated by taking the weakest
// dimension. Thresholds and weights are catalog data, so a different model
// of the same shape only needs a different catalog file.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "csre4soc/catalog.hpp"

namespace csre4soc {

struct SustainabilityLevel {
    int ordinal = 1;
    std::string label;

    /// Labels depend only on the ordinal and the level count: the five-level
    /// model gets names, other sizes get "Level k".
    static SustainabilityLevel from_ordinal(int ordinal, int level_count) {
        static constexpr std::array<const char*, 5> kFiveLevelLabels = {"Initial", "Basic", "Intermediate",
                                                                        "Advanced", "Leader"};
        SustainabilityLevel level;
        level.ordinal = ordinal;
        if (level_count == 5 && ordinal >= 1 && ordinal <= 5) {
            level.label = kFiveLevelLabels[static_cast<std::size_t>(ordinal - 1)];
        } else {
            level.label = "Level " + std::to_string(ordinal);
        }
        return level;
    }

    /// Short form used in tables, e.g. "L3".
    std::string code() const { return "L" + std::to_string(ordinal); }

    friend bool operator==(const SustainabilityLevel&, const SustainabilityLevel&) = default;
};

struct DimensionScore {
    DimensionId dimension = DimensionId::human;
    Fraction coverage;
    SustainabilityLevel level;
    int implemented_count = 0;
    int total_count = 0;

    friend bool operator==(const DimensionScore&, const DimensionScore&) = default;
};

struct AssessmentResult {
    /// Indexed by index_of(DimensionId).
    std::array<DimensionScore, 3> scores;
    SustainabilityLevel overall;
    std::string catalog_digest;

    const DimensionScore& score(DimensionId id) const { return scores[index_of(id)]; }

    friend bool operator==(const AssessmentResult&, const AssessmentResult&) = default;
};

/// Sum of weights of implemented actions over sum of all weights in `dim`.
/// Ids from other dimensions are ignored.
template <typename IdSet>
Fraction weighted_coverage(const Dimension& dim, const IdSet& implemented) {
    std::int64_t hit = 0;
    std::int64_t total = 0;
    for (const ActionItem& a : dim.actions) {
        total += a.weight.units();
        if (implemented.find(a.id) != implemented.end()) hit += a.weight.units();
    }
    return Fraction(hit, total);
}

/// ordinal = 1 + number of thresholds the coverage reaches; a coverage equal
/// to a threshold belongs to the higher level.
inline SustainabilityLevel level_from_coverage(Fraction coverage, std::span<const Decimal> thresholds) {
    int ordinal = 1;
    for (Decimal t : thresholds) {
        if (coverage.reaches(t)) ++ordinal;
    }
    return SustainabilityLevel::from_ordinal(ordinal, static_cast<int>(thresholds.size()) + 1);
}

inline AssessmentResult assess(const ValidatedSubmission& sub, const ActionCatalog& cat) {
    AssessmentResult result;
    int overall = cat.level_count();
    for (const Dimension& dim : cat.dimensions()) {
        DimensionScore& s = result.scores[index_of(dim.id)];
        s.dimension = dim.id;
        s.coverage = weighted_coverage(dim, sub->implemented);
        s.level = level_from_coverage(s.coverage, cat.thresholds());
        s.total_count = static_cast<int>(dim.actions.size());
        s.implemented_count = static_cast<int>(std::count_if(
            dim.actions.begin(), dim.actions.end(), [&](const ActionItem& a) { return sub->implemented.contains(a.id); }));
        overall = std::min(overall, s.level.ordinal);
    }
    result.overall = SustainabilityLevel::from_ordinal(overall, cat.level_count());
    result.catalog_digest = cat.digest();
    return result;
}

inline json level_to_json(const SustainabilityLevel& level) {
    return {{"ordinal", level.ordinal}, {"label", level.label}};
}

inline SustainabilityLevel level_from_json(const json& j) {
    return {j.at("ordinal").get<int>(), j.at("label").get<std::string>()};
}

/// Coverage is written twice: "coverage" as a number for display and
/// "coverage_fraction" as the exact "n/d" value, which is what is read back.
inline json result_to_json(const AssessmentResult& r) {
    json scores = json::array();
    for (const DimensionScore& s : r.scores) {
        scores.push_back({{"dimension", std::string(to_string(s.dimension))},
                          {"coverage", s.coverage.to_double()},
                          {"coverage_fraction", s.coverage.to_string()},
                          {"level", level_to_json(s.level)},
                          {"implemented_count", s.implemented_count},
                          {"total_count", s.total_count}});
    }
    return {{"scores", std::move(scores)}, {"overall", level_to_json(r.overall)}, {"catalog_digest", r.catalog_digest}};
}

inline AssessmentResult result_from_json(const json& j) {
    AssessmentResult r;
    const json& scores = j.at("scores");
    if (!scores.is_array() || scores.size() != 3) {
        throw Error(ErrorCode::schema_violation, "result must hold exactly three dimension scores", "/scores");
    }
    std::array<bool, 3> seen{};
    for (const json& s : scores) {
        auto id = parse_dimension_id(s.at("dimension").get<std::string>());
        if (!id || seen[index_of(*id)]) {
            throw Error(ErrorCode::schema_violation, "bad or repeated dimension in result", "/scores");
        }
        seen[index_of(*id)] = true;
        auto coverage = Fraction::parse(s.at("coverage_fraction").get<std::string>());
        if (!coverage) throw Error(ErrorCode::schema_violation, "bad coverage_fraction", "/scores");
        DimensionScore& d = r.scores[index_of(*id)];
        d.dimension = *id;
        d.coverage = *coverage;
        d.level = level_from_json(s.at("level"));
        d.implemented_count = s.at("implemented_count").get<int>();
        d.total_count = s.at("total_count").get<int>();
    }
    r.overall = level_from_json(j.at("overall"));
    r.catalog_digest = j.at("catalog_digest").get<std::string>();
    return r;
}

}  // namespace csre4soc
