#pragma once

// Assessment history: an append-only store of scored submissions and the
// per-company level evolution derived from it.
//
// FileRecordStore keeps one canonical-JSON record per line. The file is only
// ever appended to; an in-memory index is rebuilt when the store is opened.
// A final line without its newline is a torn write from an interrupted
// process: it is reported through the warning sink, never read as data, and
// cut off before the next append.

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "csre4soc/catalog.hpp"
#include "csre4soc/scoring.hpp"

namespace csre4soc {

struct AssessmentRecord {
    std::string record_id;
    AssessmentSubmission submission;
    AssessmentResult result;
    Timestamp stored_at{};

    friend bool operator==(const AssessmentRecord&, const AssessmentRecord&) = default;
};

inline json record_to_json(const AssessmentRecord& r) {
    return {{"record_id", r.record_id},
            {"stored_at", format_timestamp(r.stored_at)},
            {"submission", submission_to_json(r.submission)},
            {"result", result_to_json(r.result)}};
}

inline AssessmentRecord record_from_json(const json& j) {
    AssessmentRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    auto stored = parse_timestamp(j.at("stored_at").get<std::string>());
    if (!stored) throw Error(ErrorCode::schema_violation, "bad stored_at", "/stored_at");
    r.stored_at = *stored;
    r.submission = parse_submission_json(j.at("submission"));
    r.result = result_from_json(j.at("result"));
    return r;
}

/// History order: submission timestamp, then stored_at, then record_id.
inline bool history_before(const AssessmentRecord& a, const AssessmentRecord& b) {
    return std::tie(a.submission.timestamp, a.stored_at, a.record_id) <
           std::tie(b.submission.timestamp, b.stored_at, b.record_id);
}

struct EvolutionPoint {
    Timestamp timestamp{};
    std::string record_id;
    /// Level ordinals indexed by index_of(DimensionId).
    std::array<int, 3> levels{};
    int overall = 1;
    std::string catalog_digest;
    /// True when this point was scored under a different catalog than the
    /// previous point. Always false for the first point.
    bool catalog_digest_changed = false;

    friend bool operator==(const EvolutionPoint&, const EvolutionPoint&) = default;
};

struct EvolutionSeries {
    std::string company_id;
    std::vector<EvolutionPoint> points;

    friend bool operator==(const EvolutionSeries&, const EvolutionSeries&) = default;
};

/// Projects records that are already in history order.
inline EvolutionSeries project_evolution(std::string company_id, const std::vector<AssessmentRecord>& records) {
    EvolutionSeries series{std::move(company_id), {}};
    series.points.reserve(records.size());
    for (const AssessmentRecord& r : records) {
        EvolutionPoint p;
        p.timestamp = r.submission.timestamp;
        p.record_id = r.record_id;
        for (DimensionId id : kDimensionOrder) p.levels[index_of(id)] = r.result.score(id).level.ordinal;
        p.overall = r.result.overall.ordinal;
        p.catalog_digest = r.result.catalog_digest;
        p.catalog_digest_changed = !series.points.empty() && series.points.back().catalog_digest != p.catalog_digest;
        series.points.push_back(std::move(p));
    }
    return series;
}

inline json evolution_to_json(const EvolutionSeries& series) {
    json points = json::array();
    for (const EvolutionPoint& p : series.points) {
        json levels = json::object();
        for (DimensionId id : kDimensionOrder) levels[std::string(to_string(id))] = p.levels[index_of(id)];
        points.push_back({{"timestamp", format_timestamp(p.timestamp)},
                          {"record_id", p.record_id},
                          {"levels", std::move(levels)},
                          {"overall", p.overall},
                          {"catalog_digest", p.catalog_digest},
                          {"catalog_digest_changed", p.catalog_digest_changed}});
    }
    return {{"company_id", series.company_id}, {"points", std::move(points)}};
}

/// Storage interface. Implementations serialize writers store-wide and allow
/// concurrent readers.
class RecordStore {
public:
    virtual ~RecordStore() = default;

    /// Stores `record` as given. Throws duplicate_record_id or storage_failure.
    virtual std::string append(const AssessmentRecord& record) = 0;

    /// Assigns a fresh record id and stores the record under the same lock.
    virtual AssessmentRecord append_new(AssessmentSubmission submission, AssessmentResult result,
                                        Timestamp stored_at) = 0;

    /// Records for one company in history order; empty for an unknown company.
    virtual std::vector<AssessmentRecord> list_assessments(std::string_view company_id) const = 0;

    virtual std::size_t size() const = 0;

    EvolutionSeries evolution(std::string_view company_id) const {
        return project_evolution(std::string(company_id), list_assessments(company_id));
    }
};

using WarningSink = std::function<void(const std::string&)>;

inline void stderr_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

class FileRecordStore final : public RecordStore {
public:
    /// Opens `path`, creating nothing until the first append. A missing file
    /// is an empty store.
    explicit FileRecordStore(std::filesystem::path path, WarningSink warn = stderr_warning)
        : path_(std::move(path)), warn_(std::move(warn)) {
        load();
    }

    const std::filesystem::path& path() const { return path_; }

    std::string append(const AssessmentRecord& record) override {
        std::unique_lock lock(mutex_);
        if (ids_.contains(record.record_id)) {
            throw Error(ErrorCode::duplicate_record_id, "record id '" + record.record_id + "' already stored",
                        "/record_id");
        }
        write_locked(record);
        return record.record_id;
    }

    AssessmentRecord append_new(AssessmentSubmission submission, AssessmentResult result,
                                Timestamp stored_at) override {
        std::unique_lock lock(mutex_);
        AssessmentRecord record{next_id_locked(), std::move(submission), std::move(result), stored_at};
        write_locked(record);
        return record;
    }

    std::vector<AssessmentRecord> list_assessments(std::string_view company_id) const override {
        std::shared_lock lock(mutex_);
        std::vector<AssessmentRecord> out;
        auto it = by_company_.find(std::string(company_id));
        if (it == by_company_.end()) return out;
        out.reserve(it->second.size());
        for (std::size_t i : it->second) out.push_back(records_[i]);
        std::sort(out.begin(), out.end(), history_before);
        return out;
    }

    std::size_t size() const override {
        std::shared_lock lock(mutex_);
        return records_.size();
    }

private:
    [[noreturn]] void fail(const std::string& what, int err = 0) const {
        std::string detail = what + " (" + path_.string() + ")";
        if (err != 0) detail += ": " + std::string(std::strerror(err));
        throw Error(ErrorCode::storage_failure, detail);
    }

    void load() {
        std::error_code ec;
        if (!std::filesystem::exists(path_, ec)) {
            if (ec) fail("cannot stat store", ec.value());
            return;
        }
        std::ifstream in(path_, std::ios::binary);
        if (!in) fail("cannot open store for reading", errno);
        std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (in.bad()) fail("cannot read store", errno);

        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < data.size()) {
            const std::size_t nl = data.find('\n', pos);
            if (nl == std::string::npos) {
                warn_("ignoring partial trailing line (" + std::to_string(data.size() - pos) + " bytes) in " +
                      path_.string());
                break;
            }
            ++line_no;
            const std::string_view line(data.data() + pos, nl - pos);
            AssessmentRecord record;
            try {
                record = record_from_json(json::parse(line));
            } catch (const std::exception& e) {
                fail("corrupt record on line " + std::to_string(line_no) + ": " + e.what());
            }
            if (ids_.contains(record.record_id)) {
                fail("duplicate record id '" + record.record_id + "' on line " + std::to_string(line_no));
            }
            index_locked(std::move(record));
            pos = nl + 1;
        }
        valid_length_ = pos;
    }

    void index_locked(AssessmentRecord record) {
        ids_.insert(record.record_id);
        by_company_[record.submission.company_id].push_back(records_.size());
        records_.push_back(std::move(record));
    }

    std::string next_id_locked() const {
        for (std::size_t n = records_.size() + 1;; ++n) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "rec-%08zu", n);
            if (!ids_.contains(buf)) return buf;
        }
    }

    void write_locked(const AssessmentRecord& record) {
        const std::string line = record_to_json(record).dump() + "\n";
        const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
        if (fd < 0) fail("cannot open store for writing", errno);
        struct FdCloser {
            int fd;
            ~FdCloser() { ::close(fd); }
        } closer{fd};

        // Drop a torn tail left by an interrupted writer.
        const off_t end = ::lseek(fd, 0, SEEK_END);
        if (end < 0) fail("cannot seek store", errno);
        if (static_cast<std::size_t>(end) != valid_length_) {
            if (::ftruncate(fd, static_cast<off_t>(valid_length_)) != 0) fail("cannot truncate torn tail", errno);
            if (::lseek(fd, static_cast<off_t>(valid_length_), SEEK_SET) < 0) fail("cannot seek store", errno);
        }

        std::size_t written = 0;
        while (written < line.size()) {
            const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                fail("cannot write store", errno);
            }
            written += static_cast<std::size_t>(n);
        }
        if (::fsync(fd) != 0) fail("cannot sync store", errno);

        valid_length_ += line.size();
        index_locked(record);
    }

    std::filesystem::path path_;
    WarningSink warn_;
    mutable std::shared_mutex mutex_;
    std::vector<AssessmentRecord> records_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_company_;
    std::unordered_set<std::string> ids_;
    std::size_t valid_length_ = 0;
};

}  // namespace csre4soc
