#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "test_support.hpp"

using namespace csre4soc;
using namespace csre4soc::testing;

namespace {

const Timestamp kFixedNow = ts("2024-06-01T12:00:00Z");

api::Service::Clock fixed_clock() {
    return [] { return kFixedNow; };
}

api::Response get(const api::Service& svc, const std::string& target) { return svc.handle({"GET", target, ""}); }
api::Response post(const api::Service& svc, const std::string& body) {
    return svc.handle({"POST", "/api/v1/assessments", body});
}

std::string body_for(const std::string& company, const std::string& when, const std::vector<std::string>& ids) {
    return json{{"company_id", company}, {"timestamp", when}, {"implemented", ids}}.dump();
}

const std::set<std::string> kErrorCodes = {"malformed_document", "schema_violation", "invariant_violation",
                                           "unknown_action_id",  "empty_company_id", "duplicate_record_id",
                                           "storage_failure",    "not_found"};

}  // namespace

// Each fixture under tests/fixtures/api holds a request and the exact
// response expected from it. They run in file-name order against one service
// with a pinned clock and a fresh store. Set CSRE4SOC_UPDATE_GOLDEN=1 to
// rewrite the expected responses after an intended format change.
TEST(ApiGolden, Fixtures) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store, fixed_clock());
    const bool update = std::getenv("CSRE4SOC_UPDATE_GOLDEN") != nullptr;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(kFixtures / "api")) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    ASSERT_GE(files.size(), 7u);

    std::set<std::string> covered;
    for (const auto& file : files) {
        json fixture = json::parse(read_file(file));
        const json& req = fixture.at("request");
        const api::Response res = svc.handle({req.at("method"), req.at("target"), req.value("body", "")});
        if (update) {
            fixture["response"] = {{"status", res.status}, {"content_type", res.content_type}, {"body", res.body}};
            write_file(file, fixture.dump(2) + "\n");
            continue;
        }
        const json& want = fixture.at("response");
        EXPECT_EQ(res.status, want.at("status").get<int>()) << file;
        EXPECT_EQ(res.content_type, want.at("content_type").get<std::string>()) << file;
        EXPECT_EQ(res.body, want.at("body").get<std::string>()) << file;
        covered.insert(req.at("method").get<std::string>() + " " + req.at("target").get<std::string>());
    }
    if (!update) {
        for (const char* endpoint : {"GET /api/v1/catalog", "POST /api/v1/assessments", "GET /api/v1/health",
                                     "GET /api/v1/companies/acme-software/assessments",
                                     "GET /api/v1/companies/acme-software/evolution"}) {
            EXPECT_TRUE(covered.contains(endpoint)) << endpoint;
        }
    }
}

TEST(ApiCatalog, SelfConsistentAndStable) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    const auto first = get(svc, "/api/v1/catalog");
    ASSERT_EQ(first.status, 200);
    const json body = json::parse(first.body);
    EXPECT_EQ(body["catalog"]["dimensions"].size(), 3u);
    EXPECT_EQ(body["digest"], catalog_digest(parse_catalog_json(body["catalog"])));
    EXPECT_EQ(get(svc, "/api/v1/catalog").body, first.body);
}

TEST(ApiAssessments, HappyPathMatchesInProcessScoring) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const ActionCatalog cat = example_catalog();
    const api::Service svc(cat, store, fixed_clock());
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto ids = random_subset(rng, cat.action_ids());
        const std::vector<std::string> list(ids.begin(), ids.end());
        const auto res = post(svc, body_for("acme", "2024-01-01T00:00:00Z", list));
        ASSERT_EQ(res.status, 201) << res.body;
        const json body = json::parse(res.body);
        ASSERT_EQ(body["result"]["scores"].size(), 3u);
        ASSERT_TRUE(body["result"].contains("overall"));
        const auto sub = validate_submission({"acme", ts("2024-01-01T00:00:00Z"), ids}, cat);
        ASSERT_EQ(result_from_json(body["result"]), assess(sub, cat));
        ASSERT_EQ(body["result"].dump(), result_to_json(assess(sub, cat)).dump());
        ASSERT_EQ(recommendations_from_json(body["recommendations"]), recommend(sub, cat));
    }
    EXPECT_EQ(store.size(), 50u);
}

TEST(ApiAssessments, FullCoverage) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const ActionCatalog cat = example_catalog();
    const api::Service svc(cat, store);
    const auto res = post(svc, body_for("acme", "2024-01-01T00:00:00Z", cat.action_ids()));
    ASSERT_EQ(res.status, 201);
    const json body = json::parse(res.body);
    EXPECT_TRUE(body["recommendations"].empty());
    EXPECT_EQ(body["result"]["overall"]["ordinal"], 5);
    EXPECT_EQ(body["result"]["overall"]["label"], "Leader");
}

TEST(ApiAssessments, RejectedRequestsPersistNothing) {
    TempDir dir;
    const auto path = dir / "store.jsonl";
    FileRecordStore store(path);
    const api::Service svc(example_catalog(), store);

    auto res = post(svc, body_for("acme", "2024-01-01T00:00:00Z", {"env-01", "bogus-id"}));
    EXPECT_EQ(res.status, 422);
    json err = json::parse(res.body);
    EXPECT_EQ(err["code"], "unknown_action_id");
    EXPECT_NE(err["detail"].get<std::string>().find("bogus-id"), std::string::npos);

    res = post(svc, body_for("", "2024-01-01T00:00:00Z", {}));
    EXPECT_EQ(res.status, 422);
    EXPECT_EQ(json::parse(res.body)["code"], "empty_company_id");

    res = post(svc, "{\"company_id\": ");
    EXPECT_EQ(res.status, 400);
    EXPECT_EQ(json::parse(res.body)["code"], "malformed_document");

    res = post(svc, R"({"company_id":"acme","timestamp":"2024-01-01T00:00:00Z"})");
    EXPECT_EQ(res.status, 400);
    err = json::parse(res.body);
    EXPECT_EQ(err["code"], "schema_violation");
    EXPECT_EQ(err["path"], "/");

    res = post(svc, R"({"company_id":"acme","timestamp":"soon","implemented":[]})");
    EXPECT_EQ(res.status, 400);
    EXPECT_EQ(json::parse(res.body)["path"], "/timestamp");

    EXPECT_EQ(store.size(), 0u);
    EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(ApiAssessments, StorageFailureIs500) {
    TempDir dir;
    FileRecordStore store(dir / "no-such-dir" / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    const auto res = post(svc, body_for("acme", "2024-01-01T00:00:00Z", {}));
    EXPECT_EQ(res.status, 500);
    EXPECT_EQ(json::parse(res.body)["code"], "storage_failure");
}

TEST(ApiHistory, UnknownCompanyAndWriteReadCoherence) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    auto res = get(svc, "/api/v1/companies/nobody/assessments");
    EXPECT_EQ(res.status, 200);
    EXPECT_EQ(res.body, "[]");

    const json created = json::parse(post(svc, body_for("acme", "2024-01-01T00:00:00Z", {"env-02"})).body);
    const json listed = json::parse(get(svc, "/api/v1/companies/acme/assessments").body);
    ASSERT_EQ(listed.size(), 1u);
    EXPECT_EQ(listed[0]["record_id"], created["record_id"]);
    EXPECT_EQ(listed[0]["result"], created["result"]);
}

TEST(ApiHistory, SortedBySubmissionTimestamp) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    std::vector<std::string> stamps = {"2024-03-01T00:00:00Z", "2023-12-24T08:30:00Z", "2024-01-15T17:00:00Z"};
    for (const auto& s : stamps) ASSERT_EQ(post(svc, body_for("acme", s, {})).status, 201);
    std::sort(stamps.begin(), stamps.end());
    const json listed = json::parse(get(svc, "/api/v1/companies/acme/assessments").body);
    ASSERT_EQ(listed.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(listed[i]["submission"]["timestamp"], stamps[i]);
}

TEST(ApiEvolution, EmptyAndSinglePoint) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    EXPECT_EQ(get(svc, "/api/v1/companies/acme/evolution").body, R"({"company_id":"acme","points":[]})");

    const json created =
        json::parse(post(svc, body_for("acme", "2024-01-01T00:00:00Z", {"hum-01", "hum-02", "eco-01"})).body);
    const json evo = json::parse(get(svc, "/api/v1/companies/acme/evolution").body);
    ASSERT_EQ(evo["points"].size(), 1u);
    const json& p = evo["points"][0];
    EXPECT_EQ(p["levels"]["human"], created["result"]["scores"][0]["level"]["ordinal"]);
    EXPECT_EQ(p["levels"]["economic"], created["result"]["scores"][1]["level"]["ordinal"]);
    EXPECT_EQ(p["levels"]["environmental"], created["result"]["scores"][2]["level"]["ordinal"]);
    EXPECT_EQ(p["overall"], created["result"]["overall"]["ordinal"]);
    EXPECT_EQ(p["catalog_digest_changed"], false);
}

TEST(ApiEvolution, CatalogChangeIsFlagged) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const ActionCatalog first = example_catalog();
    const ActionCatalog second = parse_catalog(read_file(kFixtures / "catalog_weighted.json"));
    ASSERT_NE(first.digest(), second.digest());
    {
        const api::Service svc(first, store);
        ASSERT_EQ(post(svc, body_for("acme", "2024-01-01T00:00:00Z", {"env-01"})).status, 201);
    }
    const api::Service svc(second, store);
    ASSERT_EQ(post(svc, body_for("acme", "2024-02-01T00:00:00Z", {"env-01"})).status, 201);
    const json evo = json::parse(get(svc, "/api/v1/companies/acme/evolution").body);
    ASSERT_EQ(evo["points"].size(), 2u);
    EXPECT_EQ(evo["points"][0]["catalog_digest"], first.digest());
    EXPECT_EQ(evo["points"][1]["catalog_digest"], second.digest());
    EXPECT_EQ(evo["points"][0]["catalog_digest_changed"], false);
    EXPECT_EQ(evo["points"][1]["catalog_digest_changed"], true);
}

TEST(ApiRouting, ReadsNeverMutateStore) {
    TempDir dir;
    const auto path = dir / "store.jsonl";
    FileRecordStore store(path);
    const api::Service svc(example_catalog(), store);
    ASSERT_EQ(post(svc, body_for("acme", "2024-01-01T00:00:00Z", {"env-01"})).status, 201);
    const std::string before = read_file(path);
    for (const char* target : {"/api/v1/catalog", "/api/v1/health", "/api/v1/companies/acme/assessments",
                               "/api/v1/companies/acme/evolution", "/api/v1/companies/x/evolution"}) {
        EXPECT_EQ(get(svc, target).status, 200) << target;
    }
    EXPECT_EQ(read_file(path), before);
}

TEST(ApiRouting, PercentEncodedCompanyIds) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    ASSERT_EQ(post(svc, body_for("acme co/eu", "2024-01-01T00:00:00Z", {})).status, 201);
    const json listed = json::parse(get(svc, "/api/v1/companies/acme%20co%2Feu/assessments").body);
    ASSERT_EQ(listed.size(), 1u);
    EXPECT_EQ(listed[0]["submission"]["company_id"], "acme co/eu");
    EXPECT_EQ(get(svc, "/api/v1/companies/acme%2/assessments").status, 404);
}

TEST(ApiRouting, ErrorTaxonomyIsClosed) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    const std::vector<std::string> methods = {"GET", "POST", "PUT", "DELETE"};
    const std::vector<std::string> targets = {"/",
                                              "/api",
                                              "/api/v1",
                                              "/api/v2/catalog",
                                              "/api/v1/catalog",
                                              "/api/v1/assessments",
                                              "/api/v1/health",
                                              "/api/v1/companies",
                                              "/api/v1/companies/a",
                                              "/api/v1/companies/a/assessments",
                                              "/api/v1/companies/a/evolution",
                                              "/api/v1/companies/a/other",
                                              "/api/v1/catalog?x=1"};
    const std::vector<std::string> bodies = {"", "{}", "[]", "null", "{\"company_id\":1}",
                                             body_for("a", "2024-01-01T00:00:00Z", {"nope"}),
                                             body_for("a", "2024-01-01T00:00:00Z", {"env-01"})};
    int errors = 0;
    for (const auto& m : methods) {
        for (const auto& t : targets) {
            for (const auto& b : bodies) {
                const auto res = svc.handle({m, t, b});
                if (res.status < 300) continue;
                ++errors;
                const json err = json::parse(res.body);
                ASSERT_TRUE(kErrorCodes.contains(err.at("code").get<std::string>())) << res.body;
                ASSERT_EQ(err.at("status").get<int>(), res.status);
                ASSERT_FALSE(err.at("detail").get<std::string>().empty());
            }
        }
    }
    EXPECT_GT(errors, 100);
    EXPECT_EQ(get(svc, "/api/v1/nothing").status, 404);
    EXPECT_EQ(json::parse(get(svc, "/api/v1/nothing").body)["code"], "not_found");
}

TEST(ApiListen, ParsesAddresses) {
    EXPECT_EQ(api::parse_listen_address("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"), 8080));
    EXPECT_EQ(api::parse_listen_address("[::1]:0"), std::make_pair(std::string("::1"), 0));
    EXPECT_FALSE(api::parse_listen_address("localhost"));
    EXPECT_FALSE(api::parse_listen_address(":80"));
    EXPECT_FALSE(api::parse_listen_address("host:99999"));
    EXPECT_FALSE(api::parse_listen_address("host:http"));
}

TEST(ApiHttp, ServesOverLoopback) {
    TempDir dir;
    FileRecordStore store(dir / "store.jsonl");
    const api::Service svc(example_catalog(), store);
    httplib::Server server;
    svc.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/api/v1/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->body, "ok");

    auto created = client.Post("/api/v1/assessments", body_for("acme co", "2024-01-01T00:00:00Z", {"env-01"}),
                               "application/json");
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    EXPECT_EQ(created->get_header_value("Content-Type"), "application/json");

    auto listed = client.Get("/api/v1/companies/acme%20co/assessments");
    ASSERT_TRUE(listed);
    EXPECT_EQ(json::parse(listed->body).size(), 1u);

    auto missing = client.Delete("/api/v1/catalog");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    server.stop();
    runner.join();
}
