#include "reviewrank/service.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include <httplib.h>
#include <json.hpp>

#include "reviewrank/digest.hpp"

namespace reviewrank {

using nlohmann::json;

namespace {

struct FieldError {
    std::string field;
    std::string message;
};

HttpReply bad_request(int status, const std::string& error, const std::vector<FieldError>& fields) {
    nlohmann::ordered_json j;
    j["error"] = error;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : fields) arr.push_back(nlohmann::ordered_json{{"field", f.field}, {"message", f.message}});
    j["fields"] = std::move(arr);
    return {status, j.dump(2) + "\n"};
}

HttpReply internal_error(const std::string& what) {
    static std::atomic<std::uint64_t> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    auto id = hex_digest(std::to_string(stamp) + ":" + std::to_string(counter++));
    std::cerr << "internal error " << id << ": " << what << "\n";
    nlohmann::ordered_json j;
    j["error"] = "internal error";
    j["id"] = id;
    return {500, j.dump(2) + "\n"};
}

std::optional<int> positive_int(const json& body, const char* field, std::vector<FieldError>& errors) {
    if (!body.contains(field) || body[field].is_null()) return std::nullopt;
    const auto& v = body[field];
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
        errors.push_back({field, "expected a positive integer"});
        return std::nullopt;
    }
    return v.get<int>();
}

} // namespace

HttpReply handle_health() { return {200, "ok", "text/plain"}; }

HttpReply handle_recommend(Workspace& workspace, const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        return bad_request(400, "malformed body", {{"<body>", e.what()}});
    }
    if (!j.is_object()) return bad_request(400, "malformed body", {{"<body>", "expected a JSON object"}});

    std::vector<FieldError> errors;
    RecommendRequest req;
    if (j.contains("pr_id") && !j["pr_id"].is_null()) {
        const auto& v = j["pr_id"];
        if (v.is_string() && !v.get<std::string>().empty()) req.pr_id = v.get<std::string>();
        else if (v.is_number_integer()) req.pr_id = std::to_string(v.get<long long>());
        else errors.push_back({"pr_id", "expected a non-empty string or integer"});
    }
    if (j.contains("changed_files") && !j["changed_files"].is_null()) {
        const auto& v = j["changed_files"];
        if (!v.is_array() || v.empty()) {
            errors.push_back({"changed_files", "expected a non-empty array"});
        } else {
            for (const auto& f : v) {
                if (f.is_string()) {
                    req.files.push_back(parse_file_spec(f.get<std::string>()));
                } else if (f.is_object() && f.contains("path") && f["path"].is_string()) {
                    FileSpec spec{f["path"].get<std::string>(), "HEAD"};
                    if (f.contains("commit") && f["commit"].is_string()) spec.rev = f["commit"].get<std::string>();
                    req.files.push_back(std::move(spec));
                } else {
                    errors.push_back({"changed_files", "entries must be paths or {path, commit} objects"});
                    break;
                }
            }
        }
    }
    if (j.contains("author") && !j["author"].is_null()) {
        if (j["author"].is_string()) req.author = j["author"].get<std::string>();
        else errors.push_back({"author", "expected a string"});
    }
    req.k = positive_int(j, "k", errors);
    req.window = positive_int(j, "window", errors);
    if (j.contains("strategy") && !j["strategy"].is_null()) {
        try {
            req.strategy = strategy_from_name(j["strategy"].is_string() ? j["strategy"].get<std::string>() : "");
        } catch (const ValidationError& e) {
            errors.push_back({"strategy", e.what()});
        }
    }
    if (j.contains("refresh") && !j["refresh"].is_null()) {
        if (j["refresh"].is_boolean()) req.refresh = j["refresh"].get<bool>();
        else errors.push_back({"refresh", "expected a boolean"});
    }
    if (!req.pr_id && req.files.empty() && errors.empty())
        errors.push_back({"pr_id", "either pr_id or changed_files with author is required"});
    if (!errors.empty()) return bad_request(400, "invalid request", errors);

    try {
        auto result = workspace.recommend(req);
        return {200, result.document};
    } catch (const RequestError& e) {
        return bad_request(e.status(), e.status() == 404 ? "not found" : "invalid request", {{e.field(), e.what()}});
    } catch (const std::exception& e) {
        return internal_error(e.what());
    }
}

BindAddress parse_bind_address(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0) throw ValidationError("bind address must be host:port, got '" + text + "'");
    BindAddress addr;
    addr.host = text.substr(0, colon);
    try {
        std::size_t used = 0;
        addr.port = std::stoi(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1 || addr.port < 0 || addr.port > 65535) throw std::out_of_range("port");
    } catch (const std::exception&) {
        throw ValidationError("invalid port in bind address '" + text + "'");
    }
    return addr;
}

BindAddress resolve_bind_address(const std::string& flag_value) {
    if (!flag_value.empty()) return parse_bind_address(flag_value);
    if (const char* env = std::getenv(kServeAddrEnv); env && *env) return parse_bind_address(env);
    return parse_bind_address(kDefaultServeAddr);
}

RecommendationService::RecommendationService(Workspace& workspace)
    : workspace_(workspace), server_(std::make_unique<httplib::Server>()) {
    server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
        auto reply = handle_health();
        res.status = reply.status;
        res.set_content(reply.body, reply.content_type);
    });
    server_->Post("/recommend", [this](const httplib::Request& req, httplib::Response& res) {
        auto reply = handle_recommend(workspace_, req.body);
        res.status = reply.status;
        if (reply.status == 200) res.set_header("X-Config-Digest", workspace_.config().digest());
        res.set_content(reply.body, reply.content_type);
    });
}

RecommendationService::~RecommendationService() { stop(); }

int RecommendationService::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool RecommendationService::listen_after_bind() { return server_->listen_after_bind(); }

void RecommendationService::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

void RecommendationService::wait_until_ready() const { server_->wait_until_ready(); }

} // namespace reviewrank
