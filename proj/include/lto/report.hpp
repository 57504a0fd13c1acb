#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lto {

struct CheckReport {
    std::string check;
    nlohmann::json model = nullptr;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json dims = nlohmann::json::object();
    nlohmann::json residuals = nlohmann::json::object();
    std::vector<std::string> notes;
    bool pass = false;
    std::string error;  // error code when the check refused to run
    double seconds = 0;

    // seconds are only emitted on request so reports stay byte-reproducible
    nlohmann::json to_json(bool timing = false) const;
    static CheckReport from_json(const nlohmann::json& j);
    std::string line() const;
};

// Runs body, fills seconds, and turns library errors into a failed report
// carrying the error code.
template <class F>
CheckReport timed(const std::string& name, F&& body);

}  // namespace lto

#include <chrono>

#include "lto/common.hpp"

namespace lto {

template <class F>
CheckReport timed(const std::string& name, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r;
    try {
        r = body();
    } catch (const Error& e) {
        r.pass = false;
        r.error = e.code();
        r.notes.push_back(e.what());
    }
    if (r.check.empty()) r.check = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace lto
