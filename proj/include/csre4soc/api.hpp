#pragma once

// HTTP surface of the scorecard.
//
//   GET  /api/v1/catalog
//   POST /api/v1/assessments
//   GET  /api/v1/companies/{company_id}/assessments
//   GET  /api/v1/companies/{company_id}/evolution
//   GET  /api/v1/health
//
// Service::handle() is transport-independent and is what the tests drive;
// mount() wires it into a cpp-httplib server.

#include <algorithm>
#include <charconv>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>

#include "csre4soc/catalog.hpp"
#include "csre4soc/history.hpp"
#include "csre4soc/recommendations.hpp"
#include "csre4soc/scoring.hpp"

namespace csre4soc::api {

struct ApiError {
    int status = 500;
    ErrorCode code = ErrorCode::storage_failure;
    std::string detail;
    std::string path;

    json to_json() const {
        json j = {{"status", status}, {"code", std::string(to_string(code))}, {"detail", detail}};
        if (!path.empty()) j["path"] = path;
        return j;
    }

    static int status_for(ErrorCode code) {
        switch (code) {
            case ErrorCode::malformed_document:
            case ErrorCode::schema_violation:
            case ErrorCode::invariant_violation: return 400;
            case ErrorCode::unknown_action_id:
            case ErrorCode::empty_company_id: return 422;
            case ErrorCode::duplicate_record_id: return 409;
            case ErrorCode::not_found: return 404;
            case ErrorCode::storage_failure: return 500;
        }
        return 500;
    }

    static ApiError from(const Error& e) { return {status_for(e.code()), e.code(), e.detail(), e.path()}; }
};

struct Request {
    std::string method;
    /// Raw request target, percent-encoded, optionally with a query string.
    std::string target;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

namespace detail {

inline std::optional<std::string> percent_decode(std::string_view s) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out += s[i];
            continue;
        }
        if (i + 2 >= s.size()) return std::nullopt;
        const int hi = hex(s[i + 1]), lo = hex(s[i + 2]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
    }
    return out;
}

/// Splits the path part of `target` into decoded segments.
inline std::optional<std::vector<std::string>> split_path(std::string_view target) {
    target = target.substr(0, target.find_first_of("?#"));
    std::vector<std::string> segments;
    std::size_t pos = 0;
    while (pos < target.size()) {
        if (target[pos] == '/') {
            ++pos;
            continue;
        }
        const std::size_t end = std::min(target.find('/', pos), target.size());
        auto decoded = percent_decode(target.substr(pos, end - pos));
        if (!decoded) return std::nullopt;
        segments.push_back(std::move(*decoded));
        pos = end;
    }
    return segments;
}

}  // namespace detail

class Service {
public:
    using Clock = std::function<Timestamp()>;

    Service(ActionCatalog catalog, RecordStore& store, Clock clock = utc_now)
        : catalog_(std::move(catalog)), store_(store), clock_(std::move(clock)) {
        catalog_body_ = json{{"catalog", serialize_catalog(catalog_)}, {"digest", catalog_.digest()}}.dump();
    }

    const ActionCatalog& catalog() const { return catalog_; }

    Response handle(const Request& req) const {
        try {
            return route(req);
        } catch (const Error& e) {
            return error(ApiError::from(e));
        } catch (const std::exception& e) {
            return error({500, ErrorCode::storage_failure, e.what(), {}});
        }
    }

    /// Registers catch-all handlers that forward to handle().
    void mount(httplib::Server& server) const {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            Response out = handle({req.method, req.target, req.body});
            res.status = out.status;
            res.set_content(out.body, out.content_type);
        };
        server.Get(".*", forward);
        server.Post(".*", forward);
        server.Put(".*", forward);
        server.Delete(".*", forward);
        server.Patch(".*", forward);
    }

private:
    static Response json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }
    static Response error(const ApiError& e) { return json_response(e.status, e.to_json()); }

    static Response not_found(const Request& req) {
        return error({404, ErrorCode::not_found, "no route for " + req.method + " " + req.target, {}});
    }

    Response route(const Request& req) const {
        auto segments = detail::split_path(req.target);
        if (!segments || segments->size() < 3 || (*segments)[0] != "api" || (*segments)[1] != "v1") {
            return not_found(req);
        }
        const std::vector<std::string>& s = *segments;
        const bool get = req.method == "GET";

        if (s.size() == 3 && s[2] == "health" && get) return {200, "text/plain", "ok"};
        if (s.size() == 3 && s[2] == "catalog" && get) return {200, "application/json", catalog_body_};
        if (s.size() == 3 && s[2] == "assessments" && req.method == "POST") return post_assessment(req.body);
        if (s.size() == 5 && s[2] == "companies" && get) {
            if (s[4] == "assessments") return history(s[3]);
            if (s[4] == "evolution") return json_response(200, evolution_to_json(store_.evolution(s[3])));
        }
        return not_found(req);
    }

    Response post_assessment(const std::string& body) const {
        // Everything that can reject the request runs before the store is touched.
        ValidatedSubmission sub = validate_submission(parse_submission(body), catalog_);
        AssessmentResult result = assess(sub, catalog_);
        std::vector<Recommendation> recs = recommend(sub, catalog_);
        AssessmentRecord record = store_.append_new(sub.get(), result, clock_());
        return json_response(201, {{"record_id", record.record_id},
                                   {"result", result_to_json(result)},
                                   {"recommendations", recommendations_to_json(recs)}});
    }

    Response history(const std::string& company_id) const {
        json out = json::array();
        for (const AssessmentRecord& r : store_.list_assessments(company_id)) out.push_back(record_to_json(r));
        return json_response(200, out);
    }

    ActionCatalog catalog_;
    RecordStore& store_;
    Clock clock_;
    std::string catalog_body_;
};

/// "host:port" split at the last colon; brackets around IPv6 hosts are dropped.
inline std::optional<std::pair<std::string, int>> parse_listen_address(std::string_view addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    std::string host(addr.substr(0, colon));
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    const std::string_view port_text = addr.substr(colon + 1);
    int port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
        return std::nullopt;
    }
    return std::make_pair(std::move(host), port);
}

}  // namespace csre4soc::api
