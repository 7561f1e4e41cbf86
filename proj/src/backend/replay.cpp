#include "backend/replay.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "backend/wire.hpp"
#include "core/error.hpp"

namespace fs = std::filesystem;

namespace mqsum::backend {

ReplayStore::ReplayStore(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
        throw Error(Errc::io, "cannot create replay dir " + dir_ + ": " +
                                  ec.message());
}

std::string ReplayStore::path_for(const std::string& digest) const {
    return dir_ + "/" + digest + ".json";
}

bool ReplayStore::has(const BackendRequest& request) const {
    std::shared_lock lock(mu_);
    return fs::exists(path_for(request_digest(request)));
}

void ReplayStore::record(const BackendRequest& request,
                         const std::string& raw_body) {
    std::string path = path_for(request_digest(request));
    std::unique_lock lock(mu_);
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (buf.str() == raw_body) return; // idempotent re-record
        throw Error(Errc::io,
                    "replay store already holds a different response for " +
                        path);
    }
    // write-then-rename so readers never see a torn file
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io, "cannot write " + tmp);
        out.write(raw_body.data(),
                  static_cast<std::streamsize>(raw_body.size()));
        if (!out) throw Error(Errc::io, "short write to " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(Errc::io, "cannot commit " + path + ": " + ec.message());
}

std::string ReplayStore::read(const BackendRequest& request) const {
    std::string path = path_for(request_digest(request));
    std::shared_lock lock(mu_);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::missing_recording,
                    "no recording for digest " + request_digest(request));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

BackendResponse ReplayBackend::complete(const BackendRequest& request) {
    std::string body = store_.read(request);
    ParsedCompletion parsed = parse_completion_body(body);
    BackendResponse resp;
    resp.text = std::move(parsed.text);
    resp.usage = parsed.usage;
    if (resp.usage.estimated) {
        resp.usage.input_tokens = prompt::estimate_tokens(request.prompt.text);
        resp.usage.output_tokens = prompt::estimate_tokens(resp.text);
    }
    resp.latency_ms = 0;
    resp.source = Source::Replay;
    resp.raw_body = std::move(body);
    return resp;
}

BackendResponse RecordingBackend::complete(const BackendRequest& request) {
    BackendResponse resp = inner_.complete(request);
    store_.record(request, resp.raw_body);
    return resp;
}

} // namespace mqsum::backend
