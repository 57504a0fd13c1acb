#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lto/lto_checks.hpp"
#include "lto/models.hpp"
#include "lto/report.hpp"

namespace lto {

// One explicit check with its regions, as given in a config file.
struct CheckSpec {
    std::string check;
    nlohmann::json args = nlohmann::json::object();
};

struct RunConfig {
    std::string mode = "check";  // check (lattice models) | skein
    std::vector<ModelDesc> models;
    std::string category = "fibonacci";
    std::vector<int> n = {3};
    std::vector<std::string> suites;
    std::vector<CheckSpec> checks;
    CheckOptions opts;
    int jobs = 1;
    unsigned seed = 7;

    // CONFIG_INVALID naming the offending field
    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct RunResult {
    std::vector<CheckReport> reports;  // sorted by check name, then input order
    bool pass = true;
    nlohmann::json to_json(bool timing = false) const;
};

const std::vector<std::string>& lattice_suites();
const std::vector<std::string>& skein_suites();

RunResult run(const RunConfig& cfg);

// Modular-theory identities on random multimatrix algebras in standard form.
CheckReport tomita_selftest(int count, unsigned seed);

}  // namespace lto
