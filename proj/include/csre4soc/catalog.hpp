#pragma once

// Action catalog and assessment submissions.
//
// A catalog is a versioned JSON document listing, for each of the three
// software-sustainability dimensions, the actions a company may declare in
// its CSR. Parsing is strict: unknown fields are rejected and every type
// invariant is enforced, so an ActionCatalog value is always valid.

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csre4soc/decimal.hpp"
#include "csre4soc/error.hpp"
#include "csre4soc/timestamp.hpp"

namespace csre4soc {

using nlohmann::json;

enum class DimensionId { human, economic, environmental };

/// Fixed presentation and serialization order.
inline constexpr std::array<DimensionId, 3> kDimensionOrder = {
    DimensionId::human, DimensionId::economic, DimensionId::environmental};

constexpr std::size_t index_of(DimensionId id) { return static_cast<std::size_t>(id); }

constexpr std::string_view to_string(DimensionId id) {
    switch (id) {
        case DimensionId::human: return "human";
        case DimensionId::economic: return "economic";
        case DimensionId::environmental: return "environmental";
    }
    return "unknown";
}

inline std::optional<DimensionId> parse_dimension_id(std::string_view text) {
    for (DimensionId id : kDimensionOrder) {
        if (to_string(id) == text) return id;
    }
    return std::nullopt;
}

struct ActionItem {
    std::string id;
    std::string statement;
    Decimal weight = Decimal::from_integer(1);
    std::string recommendation;

    friend bool operator==(const ActionItem&, const ActionItem&) = default;
};

struct Dimension {
    DimensionId id = DimensionId::human;
    std::string name;
    std::vector<ActionItem> actions;

    friend bool operator==(const Dimension&, const Dimension&) = default;
};

inline std::vector<Decimal> default_thresholds() {
    return {Decimal::from_units(250'000'000), Decimal::from_units(500'000'000),
            Decimal::from_units(750'000'000), Decimal::from_integer(1)};
}

class ActionCatalog;
inline json serialize_catalog(const ActionCatalog& cat);
inline std::string catalog_digest(const ActionCatalog& cat);

class ActionCatalog {
public:
    /// Validates every catalog invariant. `dimensions` may come in any order;
    /// error paths refer to positions in that order.
    ActionCatalog(std::string catalog_version, std::vector<Decimal> thresholds,
                  std::vector<Dimension> dimensions)
        : version_(std::move(catalog_version)), thresholds_(std::move(thresholds)) {
        check_thresholds();
        std::array<bool, 3> seen{};
        for (std::size_t i = 0; i < dimensions.size(); ++i) {
            const std::string path = "/dimensions/" + std::to_string(i);
            const std::size_t slot = index_of(dimensions[i].id);
            if (seen[slot]) {
                throw Error(ErrorCode::invariant_violation,
                            "dimension '" + std::string(to_string(dimensions[i].id)) + "' appears more than once",
                            path + "/id");
            }
            seen[slot] = true;
            check_dimension(dimensions[i], path, slot);
            dimensions_[slot] = std::move(dimensions[i]);
        }
        for (DimensionId id : kDimensionOrder) {
            if (!seen[index_of(id)]) {
                throw Error(ErrorCode::invariant_violation,
                            "missing dimension '" + std::string(to_string(id)) + "'", "/dimensions");
            }
        }
        digest_ = catalog_digest(*this);
    }

    const std::string& catalog_version() const { return version_; }
    std::span<const Decimal> thresholds() const { return thresholds_; }
    /// Number of ordinal levels, thresholds().size() + 1.
    int level_count() const { return static_cast<int>(thresholds_.size()) + 1; }

    const Dimension& dimension(DimensionId id) const { return dimensions_[index_of(id)]; }
    /// Dimensions in kDimensionOrder.
    const std::array<Dimension, 3>& dimensions() const { return dimensions_; }

    bool contains(std::string_view action_id) const { return index_.contains(std::string(action_id)); }
    std::optional<DimensionId> dimension_of(std::string_view action_id) const {
        auto it = index_.find(std::string(action_id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t action_count() const { return index_.size(); }

    /// All action ids in presentation order.
    std::vector<std::string> action_ids() const {
        std::vector<std::string> ids;
        ids.reserve(index_.size());
        for (const auto& dim : dimensions_) {
            for (const auto& a : dim.actions) ids.push_back(a.id);
        }
        return ids;
    }

    /// Content digest of the canonical serialization ("sha256:<hex>").
    const std::string& digest() const { return digest_; }

    friend bool operator==(const ActionCatalog& a, const ActionCatalog& b) {
        return a.version_ == b.version_ && a.thresholds_ == b.thresholds_ && a.dimensions_ == b.dimensions_;
    }

private:
    void check_thresholds() const {
        if (thresholds_.empty()) {
            throw Error(ErrorCode::invariant_violation, "thresholds must not be empty", "/thresholds");
        }
        const Decimal zero{}, one = Decimal::from_integer(1);
        for (std::size_t i = 0; i < thresholds_.size(); ++i) {
            const std::string path = "/thresholds/" + std::to_string(i);
            if (thresholds_[i] <= zero || thresholds_[i] > one) {
                throw Error(ErrorCode::invariant_violation, "threshold must lie in (0, 1]", path);
            }
            if (i > 0 && thresholds_[i] <= thresholds_[i - 1]) {
                throw Error(ErrorCode::invariant_violation, "thresholds must be strictly increasing", path);
            }
        }
        if (thresholds_.back() != one) {
            throw Error(ErrorCode::invariant_violation, "final threshold must equal 1",
                        "/thresholds/" + std::to_string(thresholds_.size() - 1));
        }
    }

    void check_dimension(const Dimension& dim, const std::string& path, std::size_t slot) {
        if (dim.actions.empty()) {
            throw Error(ErrorCode::invariant_violation, "dimension has no actions", path + "/actions");
        }
        // Keeps the weight sum of a dimension inside int64 with headroom.
        constexpr std::int64_t kMaxSum = std::numeric_limits<std::int64_t>::max() / 4;
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < dim.actions.size(); ++j) {
            const ActionItem& a = dim.actions[j];
            const std::string apath = path + "/actions/" + std::to_string(j);
            if (a.id.empty()) throw Error(ErrorCode::invariant_violation, "action id is empty", apath + "/id");
            if (a.statement.empty()) {
                throw Error(ErrorCode::invariant_violation, "statement is empty", apath + "/statement");
            }
            if (a.recommendation.empty()) {
                throw Error(ErrorCode::invariant_violation, "recommendation is empty", apath + "/recommendation");
            }
            if (a.weight <= Decimal{}) {
                throw Error(ErrorCode::invariant_violation, "weight must be positive", apath + "/weight");
            }
            sum += a.weight.units();
            if (sum > kMaxSum) {
                throw Error(ErrorCode::invariant_violation, "total weight of dimension is too large", apath + "/weight");
            }
            if (!index_.emplace(a.id, static_cast<DimensionId>(slot)).second) {
                throw Error(ErrorCode::invariant_violation, "duplicate action id '" + a.id + "'", apath + "/id");
            }
        }
    }

    std::string version_;
    std::vector<Decimal> thresholds_;
    std::array<Dimension, 3> dimensions_;
    std::unordered_map<std::string, DimensionId> index_;
    std::string digest_;
};

namespace detail {

inline std::string type_name(const json& j) {
    return j.is_number() ? "number" : std::string(j.type_name());
}

/// Strict view over a JSON object: rejects keys outside `allowed`.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
        : j_(j), path_(std::move(path)) {
        if (!j.is_object()) {
            throw Error(ErrorCode::schema_violation, "expected object, found " + type_name(j), display_path());
        }
        for (const auto& [key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw Error(ErrorCode::schema_violation, "unknown field '" + key + "'", child(key));
            }
        }
    }

    const json* optional(std::string_view key) const {
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& required(std::string_view key) const {
        if (const json* v = optional(key)) return *v;
        throw Error(ErrorCode::schema_violation, "missing required field '" + std::string(key) + "'",
                    display_path());
    }

    std::string string(std::string_view key) const {
        const json& v = required(key);
        if (!v.is_string()) {
            throw Error(ErrorCode::schema_violation, "expected string, found " + type_name(v), child(key));
        }
        return v.get<std::string>();
    }

    const json& array(std::string_view key) const {
        const json& v = required(key);
        if (!v.is_array()) {
            throw Error(ErrorCode::schema_violation, "expected array, found " + type_name(v), child(key));
        }
        return v;
    }

    std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

private:
    std::string display_path() const { return path_.empty() ? "/" : path_; }

    const json& j_;
    std::string path_;
};

inline Decimal to_decimal(const json& v, const std::string& path) {
    std::optional<Decimal> d;
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u <= static_cast<std::uint64_t>(Decimal::kMaxWhole)) d = Decimal::from_integer(static_cast<std::int64_t>(u));
    } else if (v.is_number_integer()) {
        const auto i = v.get<std::int64_t>();
        if (i >= -Decimal::kMaxWhole && i <= Decimal::kMaxWhole) d = Decimal::from_integer(i);
    } else if (v.is_number_float()) {
        d = Decimal::from_double(v.get<double>());
    } else {
        throw Error(ErrorCode::schema_violation, "expected number, found " + type_name(v), path);
    }
    if (!d) {
        throw Error(ErrorCode::invariant_violation,
                    "number must have magnitude <= 1000000 and at most 9 decimal places", path);
    }
    return *d;
}

inline json from_decimal(Decimal d) {
    if (d.is_integer()) return json(d.units() / Decimal::kScale);
    return json(d.to_double());
}

inline json parse_json(std::string_view document) {
    try {
        return json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::malformed_document, e.what(), "/");
    }
}

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 0x0f];
    }
    return out;
}

}  // namespace detail

/// Parses and validates a catalog JSON document.
inline ActionCatalog parse_catalog_json(const json& doc) {
    detail::ObjectReader root(doc, "", {"catalog_version", "thresholds", "dimensions"});
    std::string version = root.string("catalog_version");

    std::vector<Decimal> thresholds = default_thresholds();
    if (const json* t = root.optional("thresholds")) {
        if (!t->is_array()) {
            throw Error(ErrorCode::schema_violation, "expected array, found " + detail::type_name(*t), "/thresholds");
        }
        thresholds.clear();
        for (std::size_t i = 0; i < t->size(); ++i) {
            thresholds.push_back(detail::to_decimal((*t)[i], "/thresholds/" + std::to_string(i)));
        }
    }

    const json& dims = root.array("dimensions");
    std::vector<Dimension> dimensions;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::string dpath = "/dimensions/" + std::to_string(i);
        detail::ObjectReader dr(dims[i], dpath, {"id", "name", "actions"});
        Dimension dim;
        const std::string id = dr.string("id");
        auto parsed = parse_dimension_id(id);
        if (!parsed) {
            throw Error(ErrorCode::schema_violation,
                        "unknown dimension '" + id + "' (expected human, economic or environmental)", dpath + "/id");
        }
        dim.id = *parsed;
        dim.name = dr.string("name");
        const json& actions = dr.array("actions");
        for (std::size_t j = 0; j < actions.size(); ++j) {
            const std::string apath = dpath + "/actions/" + std::to_string(j);
            detail::ObjectReader ar(actions[j], apath, {"id", "statement", "weight", "recommendation"});
            ActionItem item;
            item.id = ar.string("id");
            item.statement = ar.string("statement");
            if (const json* w = ar.optional("weight")) item.weight = detail::to_decimal(*w, apath + "/weight");
            item.recommendation = ar.string("recommendation");
            dim.actions.push_back(std::move(item));
        }
        dimensions.push_back(std::move(dim));
    }
    return ActionCatalog(std::move(version), std::move(thresholds), std::move(dimensions));
}

inline ActionCatalog parse_catalog(std::string_view document) {
    return parse_catalog_json(detail::parse_json(document));
}

/// Canonical form: all defaults explicit, dimensions in fixed order, object
/// keys sorted (nlohmann::json orders keys).
inline json serialize_catalog(const ActionCatalog& cat) {
    json thresholds = json::array();
    for (Decimal t : cat.thresholds()) thresholds.push_back(detail::from_decimal(t));
    json dims = json::array();
    for (const Dimension& d : cat.dimensions()) {
        json actions = json::array();
        for (const ActionItem& a : d.actions) {
            actions.push_back({{"id", a.id},
                               {"statement", a.statement},
                               {"weight", detail::from_decimal(a.weight)},
                               {"recommendation", a.recommendation}});
        }
        dims.push_back({{"id", std::string(to_string(d.id))}, {"name", d.name}, {"actions", std::move(actions)}});
    }
    return {{"catalog_version", cat.catalog_version()},
            {"thresholds", std::move(thresholds)},
            {"dimensions", std::move(dims)}};
}

inline std::string catalog_digest(const ActionCatalog& cat) {
    return "sha256:" + detail::sha256_hex(serialize_catalog(cat).dump());
}

struct AssessmentSubmission {
    std::string company_id;
    Timestamp timestamp{};
    std::set<std::string, std::less<>> implemented;

    friend bool operator==(const AssessmentSubmission&, const AssessmentSubmission&) = default;
};

/// A submission whose ids all resolve in the catalog it was checked against.
/// Only validate_submission() produces one.
class ValidatedSubmission {
public:
    const AssessmentSubmission& get() const { return sub_; }
    const AssessmentSubmission* operator->() const { return &sub_; }

private:
    explicit ValidatedSubmission(AssessmentSubmission sub) : sub_(std::move(sub)) {}
    friend ValidatedSubmission validate_submission(AssessmentSubmission sub, const ActionCatalog& cat);

    AssessmentSubmission sub_;
};

inline ValidatedSubmission validate_submission(AssessmentSubmission sub, const ActionCatalog& cat) {
    if (sub.company_id.empty()) {
        throw Error(ErrorCode::empty_company_id, "company_id must not be empty", "/company_id");
    }
    std::vector<std::string> unknown;
    for (const std::string& id : sub.implemented) {
        if (!cat.contains(id)) unknown.push_back(id);
    }
    if (!unknown.empty()) throw Error::unknown_actions(std::move(unknown));
    return ValidatedSubmission(std::move(sub));
}

/// Parses a submission body / answers file:
/// {"company_id": "...", "timestamp": "RFC 3339 UTC", "implemented": [...]}.
/// Duplicate ids collapse. Membership is checked by validate_submission().
inline AssessmentSubmission parse_submission_json(const json& doc) {
    detail::ObjectReader root(doc, "", {"company_id", "timestamp", "implemented"});
    AssessmentSubmission sub;
    sub.company_id = root.string("company_id");
    const std::string ts = root.string("timestamp");
    auto parsed = parse_timestamp(ts);
    if (!parsed) {
        throw Error(ErrorCode::schema_violation,
                    "timestamp '" + ts + "' is not an RFC 3339 UTC date-time with second precision", "/timestamp");
    }
    sub.timestamp = *parsed;
    const json& implemented = root.array("implemented");
    for (std::size_t i = 0; i < implemented.size(); ++i) {
        if (!implemented[i].is_string()) {
            throw Error(ErrorCode::schema_violation, "expected string, found " + detail::type_name(implemented[i]),
                        "/implemented/" + std::to_string(i));
        }
        sub.implemented.insert(implemented[i].get<std::string>());
    }
    return sub;
}

inline AssessmentSubmission parse_submission(std::string_view document) {
    return parse_submission_json(detail::parse_json(document));
}

inline json submission_to_json(const AssessmentSubmission& sub) {
    return {{"company_id", sub.company_id},
            {"timestamp", format_timestamp(sub.timestamp)},
            {"implemented", json(std::vector<std::string>(sub.implemented.begin(), sub.implemented.end()))}};
}

}  // namespace csre4soc
