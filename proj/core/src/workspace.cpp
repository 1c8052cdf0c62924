#include "gwb/workspace.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gwb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw WorkspaceError(where, what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + "/" + it.key(), "unknown key");
    for (const auto& k : required)
        if (!obj.contains(k)) fail(where, "missing key '" + k + "'");
}

int get_int(const json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<int>();
}

std::vector<int> get_int_array(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of integers");
    std::vector<int> out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer())
            fail(where + "/" + std::to_string(i), "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

std::vector<std::vector<int>> get_table(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of rows");
    std::vector<std::vector<int>> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(get_int_array(v[i], where + "/" + std::to_string(i)));
    return out;
}

Rational get_rational(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a rational as a \"p/q\" string");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

std::shared_ptr<const FiniteGroupoid> parse_groupoid(const json& obj,
                                                     const std::string& where) {
    require_keys(obj, where,
                 {"kind", "points", "table", "action", "objects", "arrows", "src",
                  "tgt", "unit", "inv", "comp"},
                 {"kind"});
    std::string kind = obj.at("kind").is_string() ? obj.at("kind").get<std::string>() : "";
    try {
        if (kind == "unit") return std::make_shared<const FiniteGroupoid>(
            unit_groupoid(get_int(obj, where, "points")));
        if (kind == "pair") return std::make_shared<const FiniteGroupoid>(
            pair_groupoid(get_int(obj, where, "points")));
        if (kind == "group") return std::make_shared<const FiniteGroupoid>(
            group_groupoid(get_table(obj.at("table"), where + "/table")));
        if (kind == "action") return std::make_shared<const FiniteGroupoid>(
            action_groupoid(get_table(obj.at("table"), where + "/table"),
                            get_table(obj.at("action"), where + "/action")));
    } catch (const WorkspaceError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    if (kind != "explicit")
        fail(where + "/kind", "expected unit|pair|group|action|explicit");
    for (const char* k : {"objects", "arrows", "src", "tgt", "unit", "inv", "comp"})
        if (!obj.contains(k)) fail(where, std::string("missing key '") + k + "'");
    FiniteGroupoid g(get_int(obj, where, "objects"), get_int(obj, where, "arrows"));
    auto src = get_int_array(obj.at("src"), where + "/src");
    auto tgt = get_int_array(obj.at("tgt"), where + "/tgt");
    auto unit = get_int_array(obj.at("unit"), where + "/unit");
    auto inv = get_int_array(obj.at("inv"), where + "/inv");
    if (static_cast<int>(src.size()) != g.num_arrows() ||
        static_cast<int>(tgt.size()) != g.num_arrows() ||
        static_cast<int>(inv.size()) != g.num_arrows())
        fail(where, "src/tgt/inv must have one entry per arrow");
    if (static_cast<int>(unit.size()) != g.num_objects())
        fail(where + "/unit", "one entry per object required");
    for (ArrowId x = 0; x < g.num_arrows(); ++x) {
        g.set_src(x, src[x]);
        g.set_tgt(x, tgt[x]);
        g.set_inv(x, inv[x]);
    }
    for (ObjectId u = 0; u < g.num_objects(); ++u) g.set_unit(u, unit[u]);
    auto comp = get_table(obj.at("comp"), where + "/comp");
    for (size_t i = 0; i < comp.size(); ++i) {
        const std::string cw = where + "/comp/" + std::to_string(i);
        if (comp[i].size() != 3) fail(cw, "expected a triple [x, y, xy]");
        for (int v : comp[i])
            if (v < 0 || v >= g.num_arrows())
                fail(cw, "dangling arrow id " + std::to_string(v));
        g.set_comp(comp[i][0], comp[i][1], comp[i][2]);
    }
    auto rep = validate_groupoid(g);
    if (!rep.ok()) fail(where, "invalid groupoid:\n" + rep.to_string());
    return std::make_shared<const FiniteGroupoid>(std::move(g));
}

template <typename T>
const T& resolve(const std::map<std::string, T>& m, const json& v,
                 const std::string& where) {
    if (!v.is_string()) fail(where, "expected a name");
    auto it = m.find(v.get<std::string>());
    if (it == m.end()) fail(where, "unresolved name '" + v.get<std::string>() + "'");
    return it->second;
}

std::vector<Rational> parse_weights(const json& v, const std::string& where,
                                    int n, const char* uniform_word) {
    std::vector<Rational> out;
    if (v.is_string() && v.get<std::string>() == uniform_word) {
        out.assign(n, Rational(1));
        return out;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        fail(where, "expected \"" + std::string(uniform_word) + "\" or an array of " +
                        std::to_string(n) + " rationals");
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(get_rational(v[i], where + "/" + std::to_string(i)));
    return out;
}

} // namespace

Workspace parse_workspace_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << "line " << line << ", column " << col;
        fail(os.str(), "syntax error");
    }
    Workspace w;
    require_keys(doc, "", {"groupoids", "measures", "functors", "bibundles", "jobs"}, {});

    if (doc.contains("groupoids")) {
        const auto& gs = doc.at("groupoids");
        if (!gs.is_object()) fail("/groupoids", "expected an object");
        for (auto it = gs.begin(); it != gs.end(); ++it) {
            auto g = parse_groupoid(it.value(), "/groupoids/" + it.key());
            w.groupoid_name[g.get()] = it.key();
            w.groupoids[it.key()] = std::move(g);
        }
    }
    if (doc.contains("measures")) {
        const auto& ms = doc.at("measures");
        if (!ms.is_object()) fail("/measures", "expected an object");
        for (auto it = ms.begin(); it != ms.end(); ++it) {
            const std::string where = "/measures/" + it.key();
            require_keys(it.value(), where, {"groupoid", "weights", "base"},
                         {"groupoid", "weights", "base"});
            MeasuredGroupoid mg;
            mg.g = resolve(w.groupoids, it.value().at("groupoid"), where + "/groupoid");
            mg.haar.weight = parse_weights(it.value().at("weights"), where + "/weights",
                                           mg.g->num_arrows(), "counting");
            mg.base = parse_weights(it.value().at("base"), where + "/base",
                                    mg.g->num_objects(), "uniform");
            auto rep = validate_haar(mg);
            if (!rep.ok()) fail(where, "invalid Haar system:\n" + rep.to_string());
            w.measures[it.key()] = std::move(mg);
        }
    }
    if (doc.contains("functors")) {
        const auto& fs = doc.at("functors");
        if (!fs.is_object()) fail("/functors", "expected an object");
        for (auto it = fs.begin(); it != fs.end(); ++it) {
            const std::string where = "/functors/" + it.key();
            require_keys(it.value(), where, {"dom", "cod", "phi1"},
                         {"dom", "cod", "phi1"});
            auto dom = resolve(w.groupoids, it.value().at("dom"), where + "/dom");
            auto cod = resolve(w.groupoids, it.value().at("cod"), where + "/cod");
            auto phi1 = get_int_array(it.value().at("phi1"), where + "/phi1");
            GroupoidFunctor f;
            try {
                f = functor_from_arrow_map(dom, cod, phi1);
            } catch (const std::exception& e) {
                fail(where, e.what());
            }
            auto rep = validate_functor(f);
            if (!rep.ok()) fail(where, "invalid functor:\n" + rep.to_string());
            w.functors[it.key()] = std::move(f);
        }
    }
    if (doc.contains("bibundles")) {
        const auto& bs = doc.at("bibundles");
        if (!bs.is_object()) fail("/bibundles", "expected an object");
        for (auto it = bs.begin(); it != bs.end(); ++it) {
            const std::string where = "/bibundles/" + it.key();
            require_keys(it.value(), where,
                         {"kind", "groupoid", "functor", "left", "right", "carrier",
                          "tau", "sigma", "lact", "ract"},
                         {"kind"});
            const auto& o = it.value();
            std::string kind = o.at("kind").is_string() ? o.at("kind").get<std::string>() : "";
            Bibundle b;
            if (kind == "canonical") {
                b = canonical_bibundle(
                    resolve(w.groupoids, o.at("groupoid"), where + "/groupoid"));
            } else if (kind == "functor") {
                b = functor_bibundle(resolve(w.functors, o.at("functor"), where + "/functor"));
            } else if (kind == "explicit") {
                for (const char* k : {"left", "right", "carrier", "tau", "sigma", "lact", "ract"})
                    if (!o.contains(k)) fail(where, std::string("missing key '") + k + "'");
                auto g = resolve(w.groupoids, o.at("left"), where + "/left");
                auto h = resolve(w.groupoids, o.at("right"), where + "/right");
                b = make_bibundle(g, h, get_int(o, where, "carrier"));
                auto tau = get_int_array(o.at("tau"), where + "/tau");
                auto sigma = get_int_array(o.at("sigma"), where + "/sigma");
                if (static_cast<int>(tau.size()) != b.carrier_size ||
                    static_cast<int>(sigma.size()) != b.carrier_size)
                    fail(where, "tau/sigma must have one entry per carrier point");
                b.tau = tau;
                b.sigma = sigma;
                for (auto [name, is_left] : {std::pair{"lact", true}, {"ract", false}}) {
                    auto rows = get_table(o.at(name), where + "/" + name);
                    for (size_t i = 0; i < rows.size(); ++i) {
                        const std::string rw =
                            where + "/" + name + "/" + std::to_string(i);
                        if (rows[i].size() != 3) fail(rw, "expected a triple");
                        // lact rows are [arrow, point, out]; ract rows are
                        // [point, arrow, out], matching the action order.
                        int a = is_left ? rows[i][0] : rows[i][1];
                        int p = is_left ? rows[i][1] : rows[i][0];
                        int out = rows[i][2];
                        int na = is_left ? g->num_arrows() : h->num_arrows();
                        if (a < 0 || a >= na) fail(rw, "dangling arrow id");
                        if (p < 0 || p >= b.carrier_size || out < 0 ||
                            out >= b.carrier_size)
                            fail(rw, "dangling carrier point");
                        if (is_left)
                            b.set_lact(a, p, out);
                        else
                            b.set_ract(p, a, out);
                    }
                }
            } else {
                fail(where + "/kind", "expected canonical|functor|explicit");
            }
            auto rep = validate_bibundle(b, /*check_principal=*/false);
            if (!rep.ok()) fail(where, "invalid bibundle:\n" + rep.to_string());
            w.bibundles[it.key()] = std::move(b);
        }
    }
    if (doc.contains("jobs")) {
        const auto& js = doc.at("jobs");
        if (!js.is_object()) fail("/jobs", "expected an object");
        for (auto it = js.begin(); it != js.end(); ++it) {
            const std::string where = "/jobs/" + it.key();
            require_keys(it.value(), where, {"command", "args"}, {"command", "args"});
            Workspace::Job j;
            if (!it.value().at("command").is_string())
                fail(where + "/command", "expected a string");
            j.command = it.value().at("command").get<std::string>();
            const auto& args = it.value().at("args");
            if (!args.is_array()) fail(where + "/args", "expected an array of names");
            for (size_t i = 0; i < args.size(); ++i) {
                if (!args[i].is_string())
                    fail(where + "/args/" + std::to_string(i), "expected a name");
                j.args.push_back(args[i].get<std::string>());
            }
            w.jobs[it.key()] = std::move(j);
        }
    }
    return w;
}

Workspace parse_workspace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_workspace_text(buf.str());
}

namespace {

json groupoid_to_json(const FiniteGroupoid& g) {
    json o;
    o["kind"] = "explicit";
    o["objects"] = g.num_objects();
    o["arrows"] = g.num_arrows();
    std::vector<int> src, tgt, unit, inv;
    for (ArrowId x = 0; x < g.num_arrows(); ++x) {
        src.push_back(g.src(x));
        tgt.push_back(g.tgt(x));
        inv.push_back(g.inv(x));
    }
    for (ObjectId u = 0; u < g.num_objects(); ++u) unit.push_back(g.unit(u));
    o["src"] = src;
    o["tgt"] = tgt;
    o["unit"] = unit;
    o["inv"] = inv;
    json comp = json::array();
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        for (ArrowId y = 0; y < g.num_arrows(); ++y)
            if (g.comp_raw(x, y) >= 0)
                comp.push_back(json::array({x, y, g.comp_raw(x, y)}));
    o["comp"] = comp;
    return o;
}

json rationals_to_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(to_string(r));
    return out;
}

} // namespace

std::string serialize_workspace(const Workspace& w) {
    json doc = json::object();
    json gs = json::object();
    for (const auto& [name, g] : w.groupoids) gs[name] = groupoid_to_json(*g);
    if (!gs.empty()) doc["groupoids"] = gs;
    json ms = json::object();
    for (const auto& [name, m] : w.measures) {
        json o;
        o["groupoid"] = w.groupoid_name.at(m.g.get());
        o["weights"] = rationals_to_json(m.haar.weight);
        o["base"] = rationals_to_json(m.base);
        ms[name] = o;
    }
    if (!ms.empty()) doc["measures"] = ms;
    json fs = json::object();
    for (const auto& [name, f] : w.functors) {
        json o;
        o["dom"] = w.groupoid_name.at(f.dom.get());
        o["cod"] = w.groupoid_name.at(f.cod.get());
        o["phi1"] = f.phi1;
        fs[name] = o;
    }
    if (!fs.empty()) doc["functors"] = fs;
    json bs = json::object();
    for (const auto& [name, b] : w.bibundles) {
        json o;
        o["kind"] = "explicit";
        o["left"] = w.groupoid_name.at(b.left_groupoid.get());
        o["right"] = w.groupoid_name.at(b.right_groupoid.get());
        o["carrier"] = b.carrier_size;
        o["tau"] = b.tau;
        o["sigma"] = b.sigma;
        json lact = json::array(), ract = json::array();
        for (ArrowId x = 0; x < b.left_groupoid->num_arrows(); ++x)
            for (int m = 0; m < b.carrier_size; ++m)
                if (b.lact_raw(x, m) >= 0)
                    lact.push_back(json::array({x, m, b.lact_raw(x, m)}));
        for (int m = 0; m < b.carrier_size; ++m)
            for (ArrowId h = 0; h < b.right_groupoid->num_arrows(); ++h)
                if (b.ract_raw(m, h) >= 0)
                    ract.push_back(json::array({m, h, b.ract_raw(m, h)}));
        o["lact"] = lact;
        o["ract"] = ract;
        bs[name] = o;
    }
    if (!bs.empty()) doc["bibundles"] = bs;
    json js = json::object();
    for (const auto& [name, j] : w.jobs) {
        json o;
        o["command"] = j.command;
        o["args"] = j.args;
        js[name] = o;
    }
    if (!js.empty()) doc["jobs"] = js;
    return doc.dump(2) + "\n";
}

} // namespace gwb
