#include "lto/runner.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <thread>

namespace lto {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
    throw Error("CONFIG_INVALID", path + ": " + why);
}

Region parse_region(const nlohmann::json& j, const std::string& path) {
    try {
        if (j.contains("rect")) {
            auto r = j["rect"].get<std::vector<int>>();
            if (r.size() != 4) invalid(path, "rect needs four integers");
            return Region::rect(r[0], r[1], r[2], r[3]);
        }
        return Region::from_json(j);
    } catch (const nlohmann::json::exception& e) {
        invalid(path, e.what());
    }
}

struct Task {
    std::string name;
    std::function<CheckReport()> fn;
};

// Lattice model plus the exact net when available; kept alive for all tasks.
struct ModelCtx {
    std::unique_ptr<Model> m;
    std::unique_ptr<StabilizerNet> net;
};

const StabilizerNet& need_net(const ModelCtx& c) {
    if (!c.net) throw Error("BAD_GROUP", "check needs a prime cyclic group");
    return *c.net;
}

int xc_of(const Model& m) { return int(std::floor(m.desc.cut)); }

void lattice_suite(const std::string& suite, const ModelCtx& c, const CheckOptions& o, std::vector<Task>& out) {
    const Model& m = *c.m;
    const int w = m.desc.w, h = m.desc.h, xc = xc_of(m);
    const ModelCtx* cp = &c;
    auto add = [&](std::string name, std::function<CheckReport()> f) {
        out.push_back({name, [name, f, &m]() {
                           CheckReport r = timed(name, f);
                           if (r.model.is_null()) r.model = m.descriptor();
                           return r;
                       }});
    };
    if (suite == "straddle") {
        add("straddle", [&m]() { return straddle_identities(m, cut_interval(m, '+', 0, m.desc.h - 1)); });
    } else if (suite == "lto") {
        add("lto1", [cp, o]() {
            const Region R{{1, 1}};
            auto rects = surrounding_rects(*cp->m, R, o.s);
            if (rects.empty()) throw Error("NO_SURROUNDING_REGION", "patch too small");
            return check_lto1(need_net(*cp), R, rects.front(), o);
        });
        add("lto2", [cp, o]() {
            return extract_boundary_algebra(need_net(*cp), Region{{1, 1}}, Region::rect(0, 1, 2, 2), o).second;
        });
        add("lto3_lto4", [cp, o, h]() {
            return check_lto3_lto4(need_net(*cp), Region{{1, 1}}, Region{{1, 1}, {1, 2}},
                                   Region::rect(0, 1, 2, std::min(3, h - 1)), Region::rect(0, 1, 3, std::min(3, h - 1)),
                                   o);
        });
        add("lto3_lto4_nested", [cp, o, h]() {
            auto r = check_lto3_lto4(need_net(*cp), Region{{1, 1}}, Region{{1, 1}}, Region::rect(0, 1, 2, 2),
                                     Region::rect(0, 1, 3, std::min(3, h - 1)), o);
            r.check = "lto3_lto4_nested";
            return r;
        });
    } else if (suite == "hd") {
        add("hd", [cp, o, xc, h]() {
            return check_hd(need_net(*cp), Region::rect(xc, 1, xc + 1, std::min(2, h - 2)), cp->m->patch, o);
        });
    } else if (suite == "rp") {
        add("rp", [cp, o, xc, h]() {
            return check_rp(need_net(*cp), Region::rect(xc - 1, 1, xc + 2, std::min(2, h - 2)), cp->m->patch, o);
        });
    } else if (suite == "haag") {
        // two columns each side when they fit inside the boundary margin
        add("finite_haag", [cp, o, xc, w, h]() {
            return check_finite_haag(need_net(*cp), Region::rect(std::max(1, xc - 1), 1, xc, h - 2),
                                     Region::rect(xc + 1, 1, std::min(w - 2, xc + 2), h - 2), cp->m->patch, o);
        });
    } else if (suite == "product") {
        add("product_state", [cp, o, w, h]() {
            return check_product_state(need_net(*cp), Region{{1, 1}}, Region{{w - 3, h - 2}}, o);
        });
    } else if (suite == "interaction") {
        add("interaction", [cp, o, xc, h]() {
            return interaction_algebra(need_net(*cp), Region::rect(xc - 1, 1, xc + 2, std::min(2, h - 2)),
                                       cp->m->patch, o);
        });
    } else if (suite == "os") {
        add("os_map", [cp, o, xc, h]() {
            return os_map_check(need_net(*cp), Region::rect(xc - 1, 1, xc + 2, std::min(2, h - 2)), cp->m->patch,
                                o);
        });
    } else if (suite == "hamiltonian") {
        add("rp_hamiltonian", [&m, o]() { return check_rp_hamiltonian(m, false, o); });
        add("rp_hamiltonian_negative_control", [&m, o]() {
            auto r = check_rp_hamiltonian(m, true, o);
            // the perturbed model must be rejected
            r.check = "rp_hamiltonian_negative_control";
            r.params["expect"] = "fail";
            r.pass = !r.pass;
            return r;
        });
    } else if (suite == "dense") {
        add("lto1_dense", [&m, o]() {
            const Region R{{1, 1}};
            auto rects = surrounding_rects(m, R, o.s);
            if (rects.empty()) throw Error("NO_SURROUNDING_REGION", "patch too small");
            return check_lto1_dense(m, R, rects.front(), o);
        });
        // full patches are beyond the dense budget; a 4x3 block suffices for a 2-site R
        add("hd_dense", [&m, o, xc, w, h]() {
            return check_hd_dense(m, Region::rect(xc, 1, xc + 1, 1),
                                  Region::rect(std::max(0, xc - 1), 0, std::min(w - 1, xc + 2), std::min(2, h - 1)), o);
        });
    } else {
        invalid("suite", "unknown lattice suite " + suite);
    }
}

void explicit_check(const CheckSpec& s, std::size_t idx, const ModelCtx& c, const CheckOptions& o,
                    std::vector<Task>& out) {
    const std::string path = "checks[" + std::to_string(idx) + "]";
    auto reg = [&](const char* k) {
        if (!s.args.contains(k)) invalid(path + "." + k, "missing region");
        return parse_region(s.args[k], path + "." + k);
    };
    const ModelCtx* cp = &c;
    std::function<CheckReport()> f;
    if (s.check == "lto1") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return check_lto1(need_net(*cp), R, S, o); };
    } else if (s.check == "lto2") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return extract_boundary_algebra(need_net(*cp), R, S, o).second; };
    } else if (s.check == "lto3_lto4") {
        Region R1 = reg("R1"), R2 = reg("R2"), S1 = reg("S1"), S2 = reg("S2");
        f = [=]() { return check_lto3_lto4(need_net(*cp), R1, R2, S1, S2, o); };
    } else if (s.check == "hd") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return check_hd(need_net(*cp), R, S, o); };
    } else if (s.check == "rp") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return check_rp(need_net(*cp), R, S, o); };
    } else if (s.check == "finite_haag") {
        Region Rp = reg("Rp"), Rm = reg("Rm"), S = reg("S");
        f = [=]() { return check_finite_haag(need_net(*cp), Rp, Rm, S, o); };
    } else if (s.check == "product_state") {
        Region R1 = reg("R1"), R2 = reg("R2");
        f = [=]() { return check_product_state(need_net(*cp), R1, R2, o); };
    } else if (s.check == "interaction") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return interaction_algebra(need_net(*cp), R, S, o); };
    } else if (s.check == "os_map") {
        Region R = reg("R"), S = reg("S");
        f = [=]() { return os_map_check(need_net(*cp), R, S, o); };
    } else {
        invalid(path + ".check", "unknown check " + s.check);
    }
    const Model* m = c.m.get();
    std::string name = s.check;
    out.push_back({name, [name, f, m]() {
                       CheckReport r = timed(name, f);
                       if (r.model.is_null()) r.model = m->descriptor();
                       return r;
                   }});
}

void skein_suite(const std::string& suite, const std::shared_ptr<FusionCategory>& C, int n, const CheckOptions& o,
                 std::vector<Task>& out) {
    auto add = [&](std::string name, std::function<CheckReport()> f) {
        out.push_back({name, [name, f, C, n]() {
                           CheckReport r = timed(name, f);
                           if (r.model.is_null()) r.model = {{"category", C->name}, {"n", n}};
                           return r;
                       }});
    };
    if (suite == "modular")
        add("skein_modular", [C, n, o]() { return check_skein_modular(*C, n, o); });
    else if (suite == "condexp")
        add("cond_exp", [C, n, o]() { return check_cond_exp(*C, n, o); });
    else if (suite == "haag")
        add("finite_haag_skein", [C, n, o]() { return check_finite_haag_skein(*C, n, o); });
    else
        invalid("suite", "unknown skein suite " + suite);
}

}  // namespace

const std::vector<std::string>& lattice_suites() {
    static const std::vector<std::string> s = {"straddle", "lto",         "hd", "rp",          "haag",
                                               "product",  "interaction", "os", "hamiltonian", "dense"};
    return s;
}

const std::vector<std::string>& skein_suites() {
    static const std::vector<std::string> s = {"modular", "condexp", "haag"};
    return s;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (!j.is_object()) invalid("$", "config must be an object");
    auto field = [&](const char* k, auto& dst) {
        if (!j.contains(k)) return;
        try {
            j[k].get_to(dst);
        } catch (const nlohmann::json::exception& e) {
            invalid(k, e.what());
        }
    };
    field("mode", c.mode);
    if (c.mode != "check" && c.mode != "skein") invalid("mode", "must be check or skein");
    if (j.contains("models")) {
        if (!j["models"].is_array()) invalid("models", "must be an array");
        for (std::size_t i = 0; i < j["models"].size(); ++i) {
            const std::string path = "models[" + std::to_string(i) + "]";
            try {
                c.models.push_back(ModelDesc::from_json(j["models"][i]));
            } catch (const nlohmann::json::exception& e) {
                invalid(path, e.what());
            } catch (const Error& e) {
                invalid(path, e.what());
            }
        }
    }
    field("category", c.category);
    if (j.contains("n")) {
        if (j["n"].is_array())
            field("n", c.n);
        else {
            int n = 0;
            field("n", n);
            c.n = {n};
        }
    }
    for (int n : c.n)
        if (n < 1) invalid("n", "must be positive");
    if (j.contains("suite")) {
        if (j["suite"].is_string())
            c.suites = {j["suite"].get<std::string>()};
        else
            field("suite", c.suites);
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) invalid("checks", "must be an array");
        for (std::size_t i = 0; i < j["checks"].size(); ++i) {
            const auto& e = j["checks"][i];
            if (!e.is_object() || !e.contains("check") || !e["check"].is_string())
                invalid("checks[" + std::to_string(i) + "].check", "missing check name");
            c.checks.push_back({e["check"].get<std::string>(), e});
        }
    }
    field("tol", c.opts.tol);
    field("angle_tol", c.opts.angle_tol);
    field("s", c.opts.s);
    field("r", c.opts.r);
    long budget = long(c.opts.budget);
    field("dense_budget", budget);
    if (budget <= 0) invalid("dense_budget", "must be positive");
    c.opts.budget = std::size_t(budget);
    field("jobs", c.jobs);
    if (c.jobs <= 0) invalid("jobs", "must be positive");
    field("seed", c.seed);
    if (c.opts.tol <= 0) invalid("tol", "must be positive");
    if (c.opts.s < 1) invalid("s", "must be at least 1");
    const auto& known = c.mode == "skein" ? skein_suites() : lattice_suites();
    for (auto& s : c.suites)
        if (s != "all" && std::find(known.begin(), known.end(), s) == known.end())
            invalid("suite", "unknown suite " + s);
    for (auto& m : c.models) m.budget = c.opts.budget;
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = {{"mode", mode}, {"suite", suites}, {"tol", opts.tol}, {"angle_tol", opts.angle_tol},
                        {"s", opts.s},   {"r", opts.r},        {"dense_budget", opts.budget}, {"seed", seed}};
    if (mode == "skein") {
        j["category"] = category;
        j["n"] = n;
    } else {
        j["models"] = nlohmann::json::array();
        for (auto& m : models) j["models"].push_back(m.to_json());
    }
    if (!checks.empty()) {
        j["checks"] = nlohmann::json::array();
        for (auto& c : checks) j["checks"].push_back(c.args);
    }
    return j;
}

nlohmann::json RunResult::to_json(bool timing) const {
    nlohmann::json a = nlohmann::json::array();
    for (auto& r : reports) a.push_back(r.to_json(timing));
    return {{"pass", pass}, {"reports", a}};
}

RunResult run(const RunConfig& cfg) {
    std::vector<Task> tasks;
    std::vector<std::unique_ptr<ModelCtx>> ctx;
    std::vector<CheckReport> early;
    std::vector<std::string> suites = cfg.suites;

    if (cfg.mode == "skein") {
        if (std::find(suites.begin(), suites.end(), "all") != suites.end()) suites = skein_suites();
        std::shared_ptr<FusionCategory> C;
        try {
            C = std::make_shared<FusionCategory>(build_category(cfg.category));
        } catch (const Error& e) {
            CheckReport r;
            r.check = "category";
            r.model = {{"category", cfg.category}};
            r.error = e.code();
            r.notes.push_back(e.what());
            early.push_back(r);
        }
        if (C)
            for (int n : cfg.n)
                for (auto& s : suites) {
                    if (s == "condexp" && n < 2) continue;
                    skein_suite(s, C, n, cfg.opts, tasks);
                }
    } else {
        for (auto& d : cfg.models) {
            auto c = std::make_unique<ModelCtx>();
            try {
                ModelDesc dd = d;
                dd.budget = cfg.opts.budget;
                c->m = std::make_unique<Model>(build_model(dd));
                if (c->m->pauli()) c->net = std::make_unique<StabilizerNet>(*c->m);
            } catch (const Error& e) {
                CheckReport r;
                r.check = "model";
                r.model = d.to_json();
                r.error = e.code();
                r.notes.push_back(e.what());
                early.push_back(r);
                continue;
            }
            std::vector<std::string> ss = suites;
            if (std::find(ss.begin(), ss.end(), "all") != ss.end()) {
                // only the suites that apply to this model
                const bool medial = c->m->desc.layout == Layout::Medial;
                ss = {"straddle"};
                if (c->m->pauli()) {
                    for (const char* s : {"lto", "hd", "haag", "product", "interaction"}) ss.push_back(s);
                    if (medial)
                        for (const char* s : {"rp", "os", "hamiltonian"}) ss.push_back(s);
                }
            }
            for (auto& s : ss) lattice_suite(s, *c, cfg.opts, tasks);
            for (std::size_t i = 0; i < cfg.checks.size(); ++i) explicit_check(cfg.checks[i], i, *c, cfg.opts, tasks);
            ctx.push_back(std::move(c));
        }
    }

    std::vector<CheckReport> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i; (i = next++) < tasks.size();) out[i] = tasks[i].fn();
    };
    const int jobs = std::max(1, std::min<int>(cfg.jobs, int(tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunResult res;
    res.reports = std::move(early);
    res.reports.insert(res.reports.end(), out.begin(), out.end());
    std::stable_sort(res.reports.begin(), res.reports.end(),
                     [](const CheckReport& a, const CheckReport& b) { return a.check < b.check; });
    for (auto& r : res.reports) res.pass = res.pass && r.pass;
    return res;
}

CheckReport tomita_selftest(int count, unsigned seed) {
    CheckReport r;
    r.check = "tomita_selftest";
    r.params = {{"count", count}, {"seed", seed}};
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    auto gauss = [&](long a, long b) {
        Mat m(a, b);
        for (long i = 0; i < a; ++i)
            for (long j = 0; j < b; ++j) m(i, j) = cplx(g(rng), g(rng));
        return m;
    };
    double bicomm = 0, jdual = 0, fixed = 0, invar = 0, kms = 0;
    for (int it = 0; it < count; ++it) {
        // direct sum of M_n (x) 1_n with a random standard vector
        std::uniform_int_distribution<int> nb(1, 3), sz(1, 3);
        std::vector<int> ns(nb(rng));
        for (auto& n : ns) n = sz(rng);
        long N = 0;
        for (int n : ns) N += n * n;
        std::vector<Mat> basis;
        Vec omega = Vec::Zero(N);
        long off = 0;
        for (int n : ns) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Mat e = Mat::Zero(N, N);
                    for (int k = 0; k < n; ++k) e(off + i * n + k, off + j * n + k) = 1;
                    basis.push_back(e);
                }
            Mat a = gauss(n, n);
            omega.segment(off, n * n) = vec_of(a);
            off += n * n;
        }
        omega.normalize();
        Mat U = gauss(N, N).householderQr().householderQ();
        for (auto& b : basis) b = U * b * U.adjoint();
        omega = U * omega;
        VNAlgebra A{orthonormal_span(basis)};
        VNAlgebra Ac = commutant(A);
        bicomm = std::max(bicomm, subspace_equal(commutant(Ac).space, A.space).angle);
        auto md = tomita(basis, omega);
        std::vector<Mat> jb;
        for (auto& b : basis) jb.push_back(md.J_conj(b));
        jdual = std::max(jdual, subspace_equal(orthonormal_span(jb), Ac.space).angle);
        fixed = std::max(fixed, (md.delta * omega - omega).norm());
        Mat x = Mat::Zero(N, N), y = Mat::Zero(N, N);
        for (auto& b : basis) {
            x += cplx(g(rng), g(rng)) * b;
            y += cplx(g(rng), g(rng)) * b;
        }
        auto phi = [&](const Mat& z) { return omega.dot(z * omega); };
        for (double t : {-0.7, 1.3}) invar = std::max(invar, std::abs(phi(md.sigma(x, t)) - phi(x)));
        kms = std::max(kms, std::abs(phi(x * md.sigma(y, cplx(0, -1))) - phi(y * x)));
    }
    r.dims = {{"algebras", count}};
    r.residuals = {{"bicommutant_angle", bicomm},
                   {"J_commutant_angle", jdual},
                   {"delta_omega", fixed},
                   {"state_invariance", invar},
                   {"kms", kms}};
    r.pass = bicomm < kAngleTol && jdual < kAngleTol && fixed < 1e-9 && invar < 1e-9 && kms < 1e-9;
    return r;
}

}  // namespace lto
