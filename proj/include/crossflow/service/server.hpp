#pragma once

#include "crossflow/service/api.hpp"
#include "crossflow/service/config.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace crossflow::service {

// Serves an Api over HTTP. Port 0 binds an ephemeral port.
class HttpServer {
public:
    HttpServer(Api& api, std::string host, int port, int threads = 8);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    int port() const { return port_; }

    // Blocks until stop() is called from another thread.
    void run();
    // Serves on a background thread; returns once the socket is bound.
    void start();
    void stop();

private:
    Api& api_;
    std::string host_;
    int port_ = 0;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

// Loads config (when given) and env overrides, ingests the configured
// registry and serves until the process is stopped.
int serve(const ServiceConfig& cfg);

}  // namespace crossflow::service
