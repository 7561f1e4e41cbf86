#pragma once

#include <shared_mutex>
#include <string>

#include "backend/backend.hpp"

namespace mqsum::backend {

// On-disk recording of completion bodies, one file per request digest.
// Append-only: a digest can be written once; re-recording identical bytes is
// a no-op, different bytes are refused. Readers may run concurrently with
// each other; writes take the store exclusively.
class ReplayStore {
public:
    explicit ReplayStore(std::string dir); // creates the directory

    bool has(const BackendRequest& request) const;
    void record(const BackendRequest& request, const std::string& raw_body);
    std::string read(const BackendRequest& request) const; // verbatim body

    const std::string& dir() const { return dir_; }

private:
    std::string path_for(const std::string& digest) const;

    std::string dir_;
    mutable std::shared_mutex mu_;
};

// Backend view over a store: answers only what was recorded, byte-exactly.
// A cache miss is Errc::missing_recording.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const ReplayStore& store) : store_(store) {}

    BackendResponse complete(const BackendRequest& request) override;

private:
    const ReplayStore& store_;
};

// Pass-through decorator that records every completed response.
class RecordingBackend : public Backend {
public:
    RecordingBackend(Backend& inner, ReplayStore& store)
        : inner_(inner), store_(store) {}

    BackendResponse complete(const BackendRequest& request) override;

private:
    Backend& inner_;
    ReplayStore& store_;
};

} // namespace mqsum::backend
