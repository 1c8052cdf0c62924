#include "gwb/correspondence.hpp"
#include "gwb/random_gen.hpp"
#include "gwb/workspace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

using nlohmann::json;
using namespace gwb;

namespace {

struct JobResult {
    std::string name;
    bool pass = false;
    json detail = json::object();
    double millis = 0.0;
};

struct Ctx {
    Workspace ws;
    double tol = kDefaultTol;
    unsigned seed = 7;
};

template <typename T>
const T& named(const std::map<std::string, T>& m, const std::string& name,
               const char* what) {
    auto it = m.find(name);
    if (it == m.end())
        throw std::runtime_error(std::string("unresolved ") + what + " '" + name + "'");
    return it->second;
}

json blocks_json(const std::vector<int>& b) { return json(b); }

// ---- command bodies; each returns (pass, detail) -------------------------

std::pair<bool, json> cmd_validate(Ctx& c, const std::vector<std::string>&) {
    // parse_workspace already validated everything; summarize what loaded.
    json d;
    d["groupoids"] = c.ws.groupoids.size();
    d["measures"] = c.ws.measures.size();
    d["functors"] = c.ws.functors.size();
    d["bibundles"] = c.ws.bibundles.size();
    return {true, d};
}

std::pair<bool, json> cmd_algebra(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 1) throw CLI::ValidationError("algebra needs: <measure>");
    auto s = analyze_convolution_algebra(named(c.ws.measures, a[0], "measure"), c.tol);
    json d;
    d["dimension"] = s.dimension;
    d["center_dimension"] = s.center_dimension;
    d["blocks"] = blocks_json(s.blocks);
    return {true, d};
}

std::pair<bool, json> cmd_wedderburn(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 1) throw CLI::ValidationError("wedderburn needs: <measure>");
    const auto& mg = named(c.ws.measures, a[0], "measure");
    RegularRepresentation rep(mg);
    std::vector<MatrixC> gens;
    for (ArrowId x = 0; x < mg.g->num_arrows(); ++x)
        gens.push_back(rep.to_orthonormal(rep.piL_delta(x)));
    auto basis = generate_algebra(gens, rep.dim(), c.tol);
    json d;
    d["blocks"] = blocks_json(wedderburn(basis, c.tol, c.seed));
    return {true, d};
}

std::pair<bool, json> cmd_correspondence(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 3)
        throw CLI::ValidationError("correspondence needs: <functor> <dom-measure> <cod-measure>");
    auto sp = build_correspondence(named(c.ws.functors, a[0], "functor"),
                                   named(c.ws.measures, a[1], "measure"),
                                   named(c.ws.measures, a[2], "measure"));
    json d;
    d["dimension"] = sp.dim();
    return {true, d};
}

std::pair<bool, json> cmd_fuse(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 5)
        throw CLI::ValidationError("fuse needs: <phi> <psi> <mg> <mh> <mk>");
    auto c1 = build_correspondence(named(c.ws.functors, a[0], "functor"),
                                   named(c.ws.measures, a[2], "measure"),
                                   named(c.ws.measures, a[3], "measure"));
    auto c2 = build_correspondence(named(c.ws.functors, a[1], "functor"),
                                   named(c.ws.measures, a[3], "measure"),
                                   named(c.ws.measures, a[4], "measure"));
    auto r = relative_tensor(c1, c2, c.tol);
    json d;
    d["quotient_dimension"] = r.space.dim;
    d["min_form_eigenvalue"] = r.min_form_eigenvalue;
    return {true, d};
}

std::pair<bool, json> cmd_verify_w(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 5)
        throw CLI::ValidationError("verify-w-functor needs: <phi> <psi> <mg> <mh> <mk>");
    auto cert = fusion_intertwiner(named(c.ws.functors, a[0], "functor"),
                                   named(c.ws.functors, a[1], "functor"),
                                   named(c.ws.measures, a[2], "measure"),
                                   named(c.ws.measures, a[3], "measure"),
                                   named(c.ws.measures, a[4], "measure"), c.tol);
    json d;
    d["isometry_residual"] = cert.isometry_residual;
    d["intertwining_residual"] = cert.intertwining_residual;
    d["rank"] = cert.rank;
    d["target_dimension"] = cert.target_dim;
    d["summary"] = cert.summary();
    return {cert.passed(), d};
}

std::pair<bool, json> cmd_bimodule(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 3)
        throw CLI::ValidationError("bimodule needs: <bibundle> <left-measure> <right-measure>");
    auto e = build_bimodule(named(c.ws.bibundles, a[0], "bibundle"),
                            named(c.ws.measures, a[1], "measure"),
                            named(c.ws.measures, a[2], "measure"), c.tol);
    json d;
    d["dimension"] = e.dim;
    d["gram_min_eigenvalue"] = min_eigenvalue(e.operator_gram());
    return {true, d};
}

std::pair<bool, json> cmd_compose(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 2) throw CLI::ValidationError("compose needs: <bibundle1> <bibundle2>");
    auto t = bibundle_tensor(named(c.ws.bibundles, a[0], "bibundle"),
                             named(c.ws.bibundles, a[1], "bibundle"));
    auto rep = validate_bibundle(t, false);
    json d;
    d["carrier"] = t.carrier_size;
    d["valid"] = rep.ok();
    return {rep.ok(), d};
}

std::pair<bool, json> cmd_verify_c(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 5)
        throw CLI::ValidationError("verify-c-functor needs: <b1> <b2> <mg> <mh> <mk>");
    auto cert = bimodule_intertwiner(named(c.ws.bibundles, a[0], "bibundle"),
                                     named(c.ws.bibundles, a[1], "bibundle"),
                                     named(c.ws.measures, a[2], "measure"),
                                     named(c.ws.measures, a[3], "measure"),
                                     named(c.ws.measures, a[4], "measure"), c.tol);
    json d;
    d["well_defined"] = cert.well_defined ? "exact" : "violated";
    d["isometry_residual"] = cert.isometry_residual;
    d["linearity_residual"] = cert.linearity_residual;
    d["rank"] = cert.rank;
    d["target_dimension"] = cert.target_dim;
    d["summary"] = cert.summary();
    return {cert.passed(), d};
}

std::pair<bool, json> cmd_morita(Ctx& c, const std::vector<std::string>& a) {
    if (a.size() != 2) throw CLI::ValidationError("morita needs: <groupoid1> <groupoid2>");
    auto v = morita_decide(named(c.ws.groupoids, a[0], "groupoid"),
                           named(c.ws.groupoids, a[1], "groupoid"), c.tol);
    json d;
    d["equivalent"] = v.equivalent;
    d["blocks_left"] = blocks_json(v.blocks_left);
    d["blocks_right"] = blocks_json(v.blocks_right);
    if (v.witness) d["witness_carrier"] = v.witness->carrier_size;
    if (!v.obstruction.empty()) d["obstruction"] = v.obstruction;
    return {true, d}; // a definite verdict either way is a successful run
}

using Handler = std::pair<bool, json> (*)(Ctx&, const std::vector<std::string>&);

const std::map<std::string, Handler> kHandlers = {
    {"validate", cmd_validate},           {"algebra", cmd_algebra},
    {"wedderburn", cmd_wedderburn},       {"correspondence", cmd_correspondence},
    {"fuse", cmd_fuse},                   {"bimodule", cmd_bimodule},
    {"compose", cmd_compose},             {"verify-w-functor", cmd_verify_w},
    {"verify-c-functor", cmd_verify_c},   {"morita", cmd_morita},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"groupoid workbench: validation and certification of finite "
                 "groupoid convolution algebras, correspondences, bibundles, "
                 "and Morita equivalence"};
    app.require_subcommand(1);

    Ctx ctx;
    std::string ws_path;
    std::vector<std::string> args;
    bool emit_json = false;
    std::string command;
    for (const auto& [name, handler] : kHandlers) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("workspace", ws_path, "workspace file")->required();
        sub->add_option("names", args, "named objects from the workspace");
        sub->add_option("--tolerance", ctx.tol, "numeric tolerance");
        sub->add_option("--seed", ctx.seed, "rng seed for randomized checks");
        sub->add_flag("--json", emit_json, "structured report on stdout");
        sub->callback([&command, name = name] { command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    json report;
    report["schema_version"] = 1;
    report["command"] = command;
    report["tolerance"] = ctx.tol;
    report["seed"] = ctx.seed;
    std::vector<JobResult> results;
    bool all_pass = true;
    try {
        ctx.ws = parse_workspace(ws_path);
        // Explicit names run one ad-hoc job; otherwise run every stored job
        // whose command matches (always at least the workspace summary for
        // `validate`).
        std::vector<std::pair<std::string, std::vector<std::string>>> todo;
        if (!args.empty() || command == "validate") {
            todo.emplace_back(command, args);
        } else {
            for (const auto& [name, job] : ctx.ws.jobs)
                if (job.command == command) todo.emplace_back(name, job.args);
            if (todo.empty())
                throw std::runtime_error("no arguments given and no matching jobs "
                                         "in the workspace");
        }
        for (const auto& [name, jargs] : todo) {
            JobResult r;
            r.name = name;
            auto t0 = std::chrono::steady_clock::now();
            try {
                auto [pass, detail] = kHandlers.at(command)(ctx, jargs);
                r.pass = pass;
                r.detail = detail;
            } catch (const CLI::ValidationError&) {
                throw;
            } catch (const std::exception& e) {
                r.pass = false;
                r.detail["error"] = e.what();
            }
            r.millis = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
            all_pass = all_pass && r.pass;
            results.push_back(std::move(r));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        report["status"] = "error";
        report["error"] = e.what();
        if (emit_json) std::cout << report.dump(2) << "\n";
        return 1;
    }

    json jobs = json::array();
    for (const auto& r : results) {
        json o;
        o["name"] = r.name;
        o["status"] = r.pass ? "pass" : "fail";
        o["millis"] = r.millis;
        o["certificates"] = r.detail;
        jobs.push_back(o);
    }
    report["jobs"] = jobs;
    report["status"] = all_pass ? "pass" : "fail";
    if (emit_json) {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << command << " " << r.name;
            for (auto it = r.detail.begin(); it != r.detail.end(); ++it)
                std::cout << " " << it.key() << "=" << it.value().dump();
            std::cout << "\n";
        }
    }
    return all_pass ? 0 : 1;
}
