#include "crossflow/service/server.hpp"

#include <httplib.h>

#include <iostream>
#include <stdexcept>

namespace crossflow::service {

HttpServer::HttpServer(Api& api, std::string host, int port, int threads)
    : api_(api), host_(std::move(host)), server_(std::make_unique<httplib::Server>()) {
    server_->new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        Query query;
        for (const auto& [k, v] : req.params) query[k] = v;
        const auto out = api_.handle(req.method, req.path, req.body, query);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    const std::string any = R"(/.*)";
    server_->Get(any, handler);
    server_->Post(any, handler);
    server_->Put(any, handler);
    server_->Delete(any, handler);
    // Unmatched methods (PATCH etc.) fall through to httplib's 404/405.

    if (port == 0) {
        port_ = server_->bind_to_any_port(host_);
    } else if (server_->bind_to_port(host_, port)) {
        port_ = port;
    } else {
        port_ = -1;
    }
    if (port_ < 0) throw std::runtime_error("cannot bind " + host_ + ":" + std::to_string(port));
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::start() {
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void HttpServer::stop() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

int serve(const ServiceConfig& cfg) {
    Api api({cfg.data_dir, {}});
    if (cfg.registry) {
        const auto summary = api.ingest(ingest::load_registry(*cfg.registry));
        std::cerr << "ingested " << summary["indicators"].size() << " indicators\n";
    }
    HttpServer server(api, cfg.host, cfg.port, cfg.threads);
    std::cerr << "listening on " << cfg.host << ':' << server.port() << '\n';
    server.run();
    return 0;
}

}  // namespace crossflow::service
