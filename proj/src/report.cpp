#include "lto/report.hpp"

#include <sstream>

namespace lto {

nlohmann::json CheckReport::to_json(bool timing) const {
    nlohmann::json j = {{"check", check}, {"model", model},         {"params", params},
                        {"dims", dims},   {"residuals", residuals}, {"pass", pass}};
    if (!notes.empty()) j["notes"] = notes;
    if (!error.empty()) j["error"] = error;
    if (timing) j["seconds"] = seconds;
    return j;
}

CheckReport CheckReport::from_json(const nlohmann::json& j) {
    CheckReport r;
    r.check = j.value("check", "");
    r.model = j.value("model", nlohmann::json());
    r.params = j.value("params", nlohmann::json::object());
    r.dims = j.value("dims", nlohmann::json::object());
    r.residuals = j.value("residuals", nlohmann::json::object());
    r.pass = j.value("pass", false);
    r.error = j.value("error", "");
    r.seconds = j.value("seconds", 0.0);
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    return r;
}

std::string CheckReport::line() const {
    std::ostringstream o;
    o << (pass ? "PASS " : "FAIL ") << check;
    if (!error.empty()) o << " [" << error << "]";
    for (auto& [k, v] : residuals.items()) o << ' ' << k << '=' << v.dump();
    return o.str();
}

}  // namespace lto
