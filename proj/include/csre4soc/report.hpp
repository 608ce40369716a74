#pragma once

// Human- and machine-readable renderings used by the command-line tool.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "csre4soc/history.hpp"
#include "csre4soc/recommendations.hpp"
#include "csre4soc/scoring.hpp"

namespace csre4soc {

struct ReportDocument {
    AssessmentResult result;
    std::vector<Recommendation> recommendations;
    /// Set when the assessment was also appended to a store.
    std::optional<std::string> record_id;

    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Same field layout as the 201 body of POST /api/v1/assessments.
inline json report_to_json(const ReportDocument& doc) {
    json j = {{"result", result_to_json(doc.result)}, {"recommendations", recommendations_to_json(doc.recommendations)}};
    if (doc.record_id) j["record_id"] = *doc.record_id;
    return j;
}

inline ReportDocument report_from_json(const json& j) {
    ReportDocument doc;
    doc.result = result_from_json(j.at("result"));
    doc.recommendations = recommendations_from_json(j.at("recommendations"));
    if (auto it = j.find("record_id"); it != j.end()) doc.record_id = it->get<std::string>();
    return doc;
}

namespace detail {

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline std::string percent(const Fraction& f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%6.2f%%", 100.0 * f.to_double());
    return buf;
}

inline std::string dimension_title(DimensionId id) {
    std::string s(to_string(id));
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

}  // namespace detail

inline std::string render_report_text(const ReportDocument& doc, const ActionCatalog& cat) {
    std::ostringstream out;
    out << "Catalog " << cat.catalog_version() << " (" << doc.result.catalog_digest << ")\n\n";
    out << detail::pad("Dimension", 15) << detail::pad("Coverage", 10) << detail::pad("Actions", 9) << "Level\n";
    for (const DimensionScore& s : doc.result.scores) {
        out << detail::pad(detail::dimension_title(s.dimension), 15) << detail::pad(detail::percent(s.coverage), 10)
            << detail::pad(std::to_string(s.implemented_count) + "/" + std::to_string(s.total_count), 9)
            << s.level.code() << ' ' << s.level.label << '\n';
    }
    out << detail::pad("Overall", 34) << doc.result.overall.code() << ' ' << doc.result.overall.label << '\n';

    out << "\nRecommendations (" << doc.recommendations.size() << ")\n";
    if (doc.recommendations.empty()) out << "  none: every catalog action is implemented\n";
    for (const Recommendation& r : doc.recommendations) {
        out << "  [" << to_string(r.dimension) << "] " << r.action_id << ": " << r.text << '\n';
    }
    if (doc.record_id) out << "\nStored as " << *doc.record_id << '\n';
    return out.str();
}

inline std::string render_evolution_text(const EvolutionSeries& series) {
    std::ostringstream out;
    out << "Evolution for " << series.company_id << " (" << series.points.size() << " point"
        << (series.points.size() == 1 ? "" : "s") << ")\n";
    if (series.points.empty()) return out.str();
    out << detail::pad("Timestamp", 22) << detail::pad("Human", 7) << detail::pad("Economic", 10)
        << detail::pad("Environmental", 15) << detail::pad("Overall", 9) << "Record\n";
    for (const EvolutionPoint& p : series.points) {
        auto level = [](int ordinal) { return "L" + std::to_string(ordinal); };
        out << detail::pad(format_timestamp(p.timestamp), 22)
            << detail::pad(level(p.levels[index_of(DimensionId::human)]), 7)
            << detail::pad(level(p.levels[index_of(DimensionId::economic)]), 10)
            << detail::pad(level(p.levels[index_of(DimensionId::environmental)]), 15)
            << detail::pad(level(p.overall), 9) << p.record_id
            << (p.catalog_digest_changed ? "  (catalog changed)" : "") << '\n';
    }
    return out.str();
}

}  // namespace csre4soc
