#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csre4soc {

/// Closed set of failure categories shared by the library, the HTTP service
/// and the CLI. The string form is the wire code used in API error bodies.
enum class ErrorCode {
    malformed_document,
    schema_violation,
    invariant_violation,
    unknown_action_id,
    empty_company_id,
    duplicate_record_id,
    storage_failure,
    not_found,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::malformed_document: return "malformed_document";
        case ErrorCode::schema_violation: return "schema_violation";
        case ErrorCode::invariant_violation: return "invariant_violation";
        case ErrorCode::unknown_action_id: return "unknown_action_id";
        case ErrorCode::empty_company_id: return "empty_company_id";
        case ErrorCode::duplicate_record_id: return "duplicate_record_id";
        case ErrorCode::storage_failure: return "storage_failure";
        case ErrorCode::not_found: return "not_found";
    }
    return "unknown";
}

/// Exception carrying an ErrorCode and, when known, the JSON pointer of the
/// offending field (e.g. "/dimensions/1/actions/0/weight").
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail, std::string path = {})
        : std::runtime_error(compose(code, detail, path)),
          code_(code),
          detail_(std::move(detail)),
          path_(std::move(path)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::string& path() const noexcept { return path_; }

    /// Unresolvable ids, populated for ErrorCode::unknown_action_id.
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    static Error unknown_actions(std::vector<std::string> ids) {
        std::string detail = "unknown action id(s): ";
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i != 0) detail += ", ";
            detail += ids[i];
        }
        Error err(ErrorCode::unknown_action_id, std::move(detail), "/implemented");
        err.ids_ = std::move(ids);
        return err;
    }

private:
    static std::string compose(ErrorCode code, const std::string& detail,
                               const std::string& path) {
        std::string msg(to_string(code));
        if (!path.empty()) msg += " at " + path;
        msg += ": " + detail;
        return msg;
    }

    ErrorCode code_;
    std::string detail_;
    std::string path_;
    std::vector<std::string> ids_;
};

}  // namespace csre4soc
