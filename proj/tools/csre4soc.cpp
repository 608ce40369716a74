// csre4soc: score CSR answer files offline, inspect assessment history, or
// run the HTTP scorecard service.
//
// Exit codes: 0 success, 1 parse/validation failure, 2 I/O or environment
// failure.

#include <pthread.h>
#include <signal.h>
#include <sys/socket.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "csre4soc/csre4soc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("cannot read " + path);
    return data;
}

int exit_code_for(const csre4soc::Error& e) {
    return e.code() == csre4soc::ErrorCode::storage_failure ? kExitIo : kExitInvalid;
}

csre4soc::ActionCatalog load_catalog(const std::string& path) {
    try {
        return csre4soc::parse_catalog(read_file(path));
    } catch (const csre4soc::Error& e) {
        // Prefix the file so diagnostics name both the file and the JSON path.
        throw csre4soc::Error(e.code(), path + ": " + e.detail(), e.path());
    }
}

struct AssessOptions {
    std::string catalog;
    std::string answers;
    std::string format = "text";
    std::string store;
};

int run_assess(const AssessOptions& opt) {
    using namespace csre4soc;
    const ActionCatalog cat = load_catalog(opt.catalog);
    AssessmentSubmission raw;
    try {
        raw = parse_submission(read_file(opt.answers));
    } catch (const Error& e) {
        throw Error(e.code(), opt.answers + ": " + e.detail(), e.path());
    }
    const ValidatedSubmission sub = validate_submission(std::move(raw), cat);

    ReportDocument doc{assess(sub, cat), recommend(sub, cat), std::nullopt};
    if (!opt.store.empty()) {
        FileRecordStore store(opt.store);
        doc.record_id = store.append_new(sub.get(), doc.result, utc_now()).record_id;
    }

    if (opt.format == "json") {
        std::cout << report_to_json(doc).dump() << '\n';
    } else {
        std::cout << render_report_text(doc, cat);
    }
    return kExitOk;
}

struct EvolutionOptions {
    std::string store;
    std::string company;
    std::string format = "text";
};

int run_evolution(const EvolutionOptions& opt) {
    using namespace csre4soc;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(opt.store, ec)) throw IoFailure("store not found: " + opt.store);
    FileRecordStore store(opt.store);
    const EvolutionSeries series = store.evolution(opt.company);
    if (opt.format == "json") {
        std::cout << evolution_to_json(series).dump() << '\n';
    } else {
        std::cout << render_evolution_text(series);
    }
    return kExitOk;
}

struct ServeOptions {
    std::string catalog;
    std::string store;
    std::string listen = "127.0.0.1:8080";
};

int run_serve(const ServeOptions& opt) {
    using namespace csre4soc;

    // Block termination signals before any thread starts so only the waiter
    // below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const ActionCatalog cat = load_catalog(opt.catalog);
    auto address = api::parse_listen_address(opt.listen);
    if (!address) {
        std::cerr << "error: invalid listen address '" << opt.listen << "' (expected host:port)\n";
        return kExitInvalid;
    }
    FileRecordStore store(opt.store);
    api::Service service(cat, store);

    httplib::Server server;
    // The library default adds SO_REUSEPORT, which would let a second
    // instance share a port that is already taken.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    service.mount(server);
    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        std::cerr << req.method << ' ' << req.target << ' ' << res.status << '\n';
    });

    int port = address->second;
    if (port == 0) {
        port = server.bind_to_any_port(address->first);
        if (port < 0) port = 0;
    } else if (!server.bind_to_port(address->first, port)) {
        port = 0;
    }
    if (port == 0) {
        std::cerr << "error: cannot bind " << opt.listen << '\n';
        return kExitIo;
    }

    std::cout << "csre4soc listening on " << address->first << ':' << port << " (catalog " << cat.catalog_version()
              << ", " << cat.digest() << ", " << store.size() << " stored records)" << std::endl;

    std::thread([&server, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    }).detach();

    server.listen_after_bind();
    std::cout << "csre4soc stopped" << std::endl;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CSR software-sustainability scorecard"};
    app.require_subcommand(1);

    AssessOptions assess_opt;
    auto* assess_cmd = app.add_subcommand("assess", "Score an answers file against a catalog");
    assess_cmd->add_option("--catalog", assess_opt.catalog, "Catalog JSON file")->required();
    assess_cmd->add_option("--answers", assess_opt.answers, "Answers JSON file (same shape as the API body)")
        ->required();
    assess_cmd->add_option("--format", assess_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    assess_cmd->add_option("--store", assess_opt.store, "Also append the assessment to this store");

    EvolutionOptions evo_opt;
    auto* evo_cmd = app.add_subcommand("evolution", "Print a company's level evolution");
    evo_cmd->add_option("--store", evo_opt.store, "Store file")->required();
    evo_cmd->add_option("--company", evo_opt.company, "Company id")->required();
    evo_cmd->add_option("--format", evo_opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    ServeOptions serve_opt;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--catalog", serve_opt.catalog, "Catalog JSON file")
        ->envname("CSRE4SOC_CATALOG")
        ->required();
    serve_cmd->add_option("--store", serve_opt.store, "Store file")->envname("CSRE4SOC_STORE")->required();
    serve_cmd->add_option("--listen", serve_opt.listen, "Listen address host:port")
        ->envname("CSRE4SOC_LISTEN")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*assess_cmd) return run_assess(assess_opt);
        if (*evo_cmd) return run_evolution(evo_opt);
        if (*serve_cmd) return run_serve(serve_opt);
    } catch (const csre4soc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitInvalid;
}
