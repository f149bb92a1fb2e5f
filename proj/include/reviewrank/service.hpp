#pragma once

#include <functional>
#include <memory>
#include <string>

#include "reviewrank/workspace.hpp"

namespace httplib {
class Server;
}

namespace reviewrank {

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// POST /recommend. Body: {"pr_id": ...} or {"changed_files": [...],
/// "author": ...}, with optional "k", "window", "strategy", "refresh".
HttpReply handle_recommend(Workspace& workspace, const std::string& body);

/// GET /health.
HttpReply handle_health();

inline constexpr const char* kServeAddrEnv = "REVIEWRANK_SERVE_ADDR";
inline constexpr const char* kDefaultServeAddr = "127.0.0.1:8080";

struct BindAddress {
    std::string host;
    int port = 0;
};

/// "host:port"; throws ValidationError when malformed.
BindAddress parse_bind_address(const std::string& text);

/// Flag value if given, else the environment variable, else the default.
BindAddress resolve_bind_address(const std::string& flag_value);

/// HTTP front end over a workspace. The workspace must outlive the service.
class RecommendationService {
public:
    explicit RecommendationService(Workspace& workspace);
    ~RecommendationService();

    /// Binds (port 0 picks a free port) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Blocks serving requests until stop().
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    Workspace& workspace_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace reviewrank
