// lto-verify: batch driver for the lattice, skein and toolkit checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lto/runner.hpp"

using nlohmann::json;

namespace {

struct Flags {
    std::string config, model, patch, group, layout, convention, cat, out;
    std::vector<std::string> suites;
    std::vector<int> n;
    double cut = 0, tol = 0;
    long budget = 0;
    int jobs = 1, s = 1;
    unsigned seed = 7;
    bool json_out = false, timing = false;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw lto::Error("CONFIG_INVALID", "config: cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw lto::Error("CONFIG_INVALID", std::string("config: ") + e.what());
    }
}

std::vector<std::string> split_suites(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    for (auto& s : in) {
        std::stringstream ss(s);
        for (std::string part; std::getline(ss, part, ',');)
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

// flags override the file
json merge(json cfg, const Flags& f, CLI::App& sub, const std::string& mode) {
    cfg["mode"] = mode;
    auto given = [&](const char* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
    if (mode == "check") {
        bool any = given("--model") || given("--patch") || given("--group") || given("--layout") || given("--cut") ||
                   given("--convention");
        if (any) {
            json m = cfg.contains("models") && cfg["models"].is_array() && !cfg["models"].empty() ? cfg["models"][0]
                                                                                                   : json::object();
            if (given("--model")) m["kind"] = f.model;
            if (given("--patch")) {
                int w = 0, h = 0;
                char x = 0;
                std::stringstream ss(f.patch);
                if (!(ss >> w >> x >> h) || (x != 'x' && x != 'X'))
                    throw lto::Error("CONFIG_INVALID", "patch: expected WxH");
                m["patch"] = {w, h};
            }
            if (given("--group")) m["group"] = f.group;
            if (given("--layout")) m["layout"] = f.layout;
            if (given("--convention")) m["convention"] = f.convention;
            if (given("--cut")) m["cut"] = f.cut;
            if (m.value("kind", "toric") != "toric" && !m.contains("group")) m["group"] = "Z2";
            cfg["models"] = json::array({m});
        }
    } else {
        if (given("--cat")) cfg["category"] = f.cat;
        if (given("--n")) cfg["n"] = f.n;
    }
    if (given("--suite")) cfg["suite"] = split_suites(f.suites);
    if (given("--tol")) cfg["tol"] = f.tol;
    if (given("--dense-budget")) cfg["dense_budget"] = f.budget;
    if (given("--jobs")) cfg["jobs"] = f.jobs;
    if (given("--seed")) cfg["seed"] = f.seed;
    if (given("--s")) cfg["s"] = f.s;
    if (const char* env = std::getenv("LTO_VERIFY_BUDGET")) {
        try {
            cfg["dense_budget"] = std::stol(env);
        } catch (...) {
            throw lto::Error("CONFIG_INVALID", "LTO_VERIFY_BUDGET: not an integer");
        }
    }
    return cfg;
}

int emit(const json& doc, const std::vector<lto::CheckReport>& reports, bool pass, const Flags& f) {
    if (!f.out.empty()) {
        std::ofstream o(f.out);
        if (!o) {
            std::cerr << "cannot write " << f.out << "\n";
            return 2;
        }
        o << doc.dump(2) << "\n";
    }
    if (f.json_out) {
        std::cout << doc.dump(2) << "\n";
    } else {
        for (auto& r : reports) std::cout << r.line() << "\n";
        std::cout << (pass ? "ALL PASS" : "SOME FAILED") << " (" << reports.size() << " checks)\n";
    }
    return pass ? 0 : 1;
}

void common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--suite", f.suites, "suites to run (repeat or comma separate)");
    sub->add_option("--tol", f.tol, "operator identity tolerance");
    sub->add_option("--dense-budget", f.budget, "largest dense dimension");
    sub->add_option("--jobs", f.jobs, "worker threads");
    sub->add_option("--seed", f.seed, "seed for sampled checks");
    sub->add_option("--out", f.out, "write the JSON report here");
    sub->add_flag("--json", f.json_out, "print JSON instead of one line per check");
    sub->add_flag("--timing", f.timing, "include wall-clock seconds in JSON");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume checks for local topological order"};
    app.require_subcommand(1);
    Flags f;

    auto* check = app.add_subcommand("check", "run checks on lattice models");
    common(check, f);
    check->add_option("--model", f.model, "toric or qd");
    check->add_option("--patch", f.patch, "patch size WxH");
    check->add_option("--group", f.group, "Z<N>, S3");
    check->add_option("--layout", f.layout, "edge or medial");
    check->add_option("--convention", f.convention, "paper or standard");
    check->add_option("--cut", f.cut, "reflection axis x = c (half-integer)");
    check->add_option("--s", f.s, "surround margin");

    auto* skein = app.add_subcommand("skein", "run checks on fusion boundary algebras");
    common(skein, f);
    skein->add_option("--cat", f.cat, "vec_z<N>, fibonacci, ising");
    skein->add_option("--n", f.n, "number of boundary points");

    auto* tom = app.add_subcommand("tomita", "toolkit self-test on random multimatrix algebras");
    int count = 20;
    tom->add_option("--n", count, "number of random algebras");
    tom->add_option("--seed", f.seed, "seed");
    tom->add_option("--out", f.out, "write the JSON report here");
    tom->add_flag("--json", f.json_out, "print JSON");

    auto* rep = app.add_subcommand("report", "pretty-print a JSON report");
    std::string file;
    rep->add_option("file", file, "report file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tom) {
            auto r = lto::tomita_selftest(count, f.seed);
            json doc = {{"pass", r.pass}, {"reports", json::array({r.to_json()})}};
            return emit(doc, {r}, r.pass, f);
        }
        if (*rep) {
            std::ifstream in(file);
            if (!in) throw lto::Error("CONFIG_INVALID", "report: cannot open " + file);
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw lto::Error("CONFIG_INVALID", std::string("report: ") + e.what());
            }
            std::vector<lto::CheckReport> rs;
            bool pass = true;
            for (auto& j : doc.value("reports", json::array())) {
                rs.push_back(lto::CheckReport::from_json(j));
                pass = pass && rs.back().pass;
            }
            Flags pf;
            return emit(doc, rs, pass, pf);
        }
        CLI::App* sub = *check ? check : skein;
        json cfg = merge(load_config(f.config), f, *sub, *check ? "check" : "skein");
        auto rc = lto::RunConfig::from_json(cfg);
        auto res = lto::run(rc);
        json doc = res.to_json(f.timing);
        doc["config"] = rc.to_json();
        return emit(doc, res.reports, res.pass, f);
    } catch (const lto::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
