#include "gateway/server.hpp"

#include <exception>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "dataset/dataset.hpp"
#include "gateway/records.hpp"

namespace mqsum::gateway {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int status_for(Errc code) {
    switch (code) {
    case Errc::schema:
    case Errc::invalid_argument:
    case Errc::empty_record_field:
    case Errc::queries_dont_fit:
        return 400;
    case Errc::timeout:
        return 504;
    default:
        return 502;
    }
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
    send_json(res, status,
              ordered_json{{"error", {{"code", code}, {"message", message}}}});
}

// Shared error-to-status mapping so the route bodies stay straight-line.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        send_error(res, status_for(e.code()), errc_name(e.code()), e.what());
    } catch (const json::exception& e) {
        send_error(res, 400, errc_name(Errc::schema), e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
    }
}

CoalescePolicy policy_with_overrides(const CoalescePolicy& base,
                                     const json& obj) {
    if (!obj.is_object())
        throw Error(Errc::schema, "policy must be an object", 0, "policy");
    CoalescePolicy policy = base;
    if (obj.contains("fallback"))
        policy.fallback =
            fallback_from_name(obj["fallback"].get<std::string>());
    if (obj.contains("max_queries_per_prompt"))
        policy.max_queries_per_prompt =
            obj["max_queries_per_prompt"].get<int>();
    if (obj.contains("window_ms")) policy.window_ms = obj["window_ms"].get<int>();
    if (obj.contains("max_single_retries_per_job"))
        policy.max_single_retries_per_job =
            obj["max_single_retries_per_job"].get<int>();
    policy.validate();
    return policy;
}

} // namespace

GatewayServer::GatewayServer(Config config, Gateway& gw)
    : config_(std::move(config)), gateway_(gw),
      server_(std::make_unique<httplib::Server>()) {}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::start() {
    auto& srv = *server_;

    srv.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, ordered_json{{"status", "ok"}});
    });

    srv.Get("/v1/metrics",
            [this](const httplib::Request&, httplib::Response& res) {
                guarded(res, [&] {
                    send_json(res, 200,
                              metrics_json(gateway_.metrics_snapshot()));
                });
            });

    srv.Post("/v1/query", [this](const httplib::Request& req,
                                 httplib::Response& res) {
        guarded(res, [&] {
            json body = json::parse(req.body);
            if (!body.is_object() || !body.contains("context") ||
                !body["context"].is_string() || !body.contains("query") ||
                !body["query"].is_string())
                throw Error(Errc::schema,
                            "expected {\"context\": ..., \"query\": ...}");
            QuerySummaryPair pair =
                gateway_.submit_single(body["context"].get<std::string>(),
                                       body["query"].get<std::string>());
            send_json(res, 200, pair_json(pair));
        });
    });

    srv.Post("/v1/jobs", [this](const httplib::Request& req,
                                httplib::Response& res) {
        guarded(res, [&] {
            json body = json::parse(req.body);
            MultiQueryJob job = dataset::job_from_json(body);
            JobResult result =
                body.contains("policy")
                    ? gateway_.run(job, policy_with_overrides(
                                            gateway_.policy(), body["policy"]))
                    : gateway_.run(job);
            send_json(res, 200, job_result_json(result));
        });
    });

    if (config_.port == 0) {
        port_ = srv.bind_to_any_port(config_.host);
        if (port_ < 0)
            throw Error(Errc::io, "failed to bind " + config_.host);
    } else {
        if (!srv.bind_to_port(config_.host, config_.port))
            throw Error(Errc::io, "failed to bind " + config_.host + ":" +
                                      std::to_string(config_.port));
        port_ = config_.port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void GatewayServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace mqsum::gateway
