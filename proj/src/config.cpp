#include "gfpc/config.hpp"

#include "gfpc/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gfpc {

namespace {

using Json = nlohmann::ordered_json;

// byte offset -> 1-based line/column, for ParseError
std::pair<int, int> locate(const std::string& text, size_t byte) {
    int line = 1;
    int column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

void check_keys(const Json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError("config: unknown key '" + item.key() + "' in " + context);
        }
    }
}

double require_number(const Json& obj, const std::string& key, const std::string& context) {
    if (!obj.contains(key)) {
        throw ValidationError(context + "." + key + ": required field is missing");
    }
    if (!obj.at(key).is_number()) {
        throw ValidationError(context + "." + key + ": must be a number");
    }
    return obj.at(key).get<double>();
}

double number_or(const Json& obj, const std::string& key, const std::string& context,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) {
        throw ValidationError(context + "." + key + ": must be a number");
    }
    return obj.at(key).get<double>();
}

std::string require_string(const Json& obj, const std::string& key, const std::string& context) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw ValidationError(context + "." + key + ": must be a string");
    }
    return obj.at(key).get<std::string>();
}

SystemParams parse_system(const Json& node) {
    if (!node.is_object()) {
        throw ValidationError("system: must be an object");
    }
    check_keys(node, "system",
               {"omega_b", "omega_g", "v_g", "r_g", "x_g", "d_p", "d_q", "omega_set", "p_set",
                "q_set", "v_set"});
    SystemParams sp;
    sp.omega_b   = require_number(node, "omega_b", "system");
    sp.omega_g   = require_number(node, "omega_g", "system");
    sp.v_g       = require_number(node, "v_g", "system");
    sp.r_g       = require_number(node, "r_g", "system");
    sp.x_g       = require_number(node, "x_g", "system");
    sp.d_p       = require_number(node, "d_p", "system");
    sp.d_q       = require_number(node, "d_q", "system");
    sp.omega_set = require_number(node, "omega_set", "system");
    sp.p_set     = require_number(node, "p_set", "system");
    sp.q_set     = require_number(node, "q_set", "system");
    sp.v_set     = require_number(node, "v_set", "system");
    sp.validate();
    return sp;
}

std::vector<CaseSpec> parse_cases(const Json& node) {
    if (!node.is_array()) {
        throw ValidationError("cases: must be an array");
    }
    if (node.empty()) {
        throw ValidationError("cases: at least one required");
    }
    std::vector<CaseSpec> cases;
    std::set<std::string> names;
    for (size_t i = 0; i < node.size(); ++i) {
        const Json& entry = node[i];
        const std::string context = "cases[" + std::to_string(i) + "]";
        if (!entry.is_object()) {
            throw ValidationError(context + ": must be an object");
        }
        check_keys(entry, context, {"name", "xi", "ts", "a"});
        CaseSpec cs;
        cs.name = require_string(entry, "name", context);
        cs.xi = require_number(entry, "xi", context);
        cs.ts = require_number(entry, "ts", context);
        cs.a = number_or(entry, "a", context, 20.0);
        if (!names.insert(cs.name).second) {
            throw ValidationError("cases: duplicate name '" + cs.name + "'");
        }
        try {
            PerformanceSpec{cs.xi, cs.ts, cs.a}.validate();
        } catch (const ValidationError& err) {
            throw ValidationError(context + " ('" + cs.name + "'): " + err.what());
        }
        cases.push_back(cs);
    }
    return cases;
}

SimSection parse_sim(const Json& node) {
    SimSection sim;
    if (node.is_null()) return sim;
    if (!node.is_object()) {
        throw ValidationError("sim: must be an object");
    }
    check_keys(node, "sim", {"t_end", "dt", "record_every", "band", "events"});
    sim.t_end = number_or(node, "t_end", "sim", sim.t_end);
    sim.dt = number_or(node, "dt", "sim", sim.dt);
    sim.band = number_or(node, "band", "sim", sim.band);
    if (node.contains("record_every")) {
        if (!node.at("record_every").is_number_integer()) {
            throw ValidationError("sim.record_every: must be an integer");
        }
        sim.record_every = node.at("record_every").get<int>();
    }
    SimConfig{sim.t_end, sim.dt, sim.record_every}.validate();
    if (!(sim.band > 0.0 && sim.band < 1.0)) {
        throw ValidationError("sim.band: must be in (0, 1)");
    }
    if (node.contains("events")) {
        if (!node.at("events").is_array()) {
            throw ValidationError("sim.events: must be an array");
        }
        size_t i = 0;
        for (const Json& entry : node.at("events")) {
            const std::string context = "sim.events[" + std::to_string(i++) + "]";
            if (!entry.is_object()) {
                throw ValidationError(context + ": must be an object");
            }
            check_keys(entry, context, {"time", "target", "value"});
            SetpointEvent ev;
            ev.time = require_number(entry, "time", context);
            ev.target = parse_setpoint_target(require_string(entry, "target", context));
            ev.value = require_number(entry, "value", context);
            if (!(ev.time >= 0.0 && ev.time <= sim.t_end)) {
                throw ValidationError(context + ".time: must lie in [0, t_end]");
            }
            sim.events.push_back(ev);
        }
    }
    return sim;
}

OutputSection parse_output(const Json& node) {
    OutputSection out;
    if (node.is_null()) return out;
    if (!node.is_object()) {
        throw ValidationError("output: must be an object");
    }
    check_keys(node, "output", {"directory", "formats"});
    if (node.contains("directory")) {
        out.directory = require_string(node, "directory", "output");
    }
    if (node.contains("formats")) {
        if (!node.at("formats").is_array()) {
            throw ValidationError("output.formats: must be an array of strings");
        }
        out.formats.clear();
        for (const Json& fmt : node.at("formats")) {
            if (!fmt.is_string()) {
                throw ValidationError("output.formats: must be an array of strings");
            }
            const std::string name = fmt.get<std::string>();
            if (name != "csv" && name != "report") {
                throw ValidationError("output.formats: unknown format '" + name + "'");
            }
            out.formats.push_back(name);
        }
    }
    return out;
}

}  // namespace

DesignConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        const auto [line, column] = locate(text, err.byte > 0 ? err.byte - 1 : 0);
        std::ostringstream oss;
        oss << "config: JSON parse error at line " << line << ", column " << column << ": "
            << err.what();
        throw ParseError(oss.str(), line, column);
    }
    if (!root.is_object()) {
        throw ValidationError("config: top level must be an object");
    }
    check_keys(root, "the top level", {"system", "cases", "sim", "output"});
    if (!root.contains("system")) {
        throw ValidationError("system: required section is missing");
    }
    if (!root.contains("cases")) {
        throw ValidationError("cases: required section is missing");
    }

    DesignConfig config;
    config.system = parse_system(root.at("system"));
    config.cases = parse_cases(root.at("cases"));
    config.sim = parse_sim(root.contains("sim") ? root.at("sim") : Json());
    config.output = parse_output(root.contains("output") ? root.at("output") : Json());
    return config;
}

DesignConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string write_config(const DesignConfig& config) {
    Json root;
    Json& system = root["system"];
    system["omega_b"] = config.system.omega_b;
    system["omega_g"] = config.system.omega_g;
    system["v_g"] = config.system.v_g;
    system["r_g"] = config.system.r_g;
    system["x_g"] = config.system.x_g;
    system["d_p"] = config.system.d_p;
    system["d_q"] = config.system.d_q;
    system["omega_set"] = config.system.omega_set;
    system["p_set"] = config.system.p_set;
    system["q_set"] = config.system.q_set;
    system["v_set"] = config.system.v_set;

    root["cases"] = Json::array();
    for (const CaseSpec& cs : config.cases) {
        Json entry;
        entry["name"] = cs.name;
        entry["xi"] = cs.xi;
        entry["ts"] = cs.ts;
        entry["a"] = cs.a;
        root["cases"].push_back(entry);
    }

    Json& sim = root["sim"];
    sim["t_end"] = config.sim.t_end;
    sim["dt"] = config.sim.dt;
    sim["record_every"] = config.sim.record_every;
    sim["band"] = config.sim.band;
    sim["events"] = Json::array();
    for (const SetpointEvent& ev : config.sim.events) {
        Json entry;
        entry["time"] = ev.time;
        entry["target"] = to_string(ev.target);
        entry["value"] = ev.value;
        sim["events"].push_back(entry);
    }

    Json& output = root["output"];
    output["directory"] = config.output.directory;
    output["formats"] = config.output.formats;

    return root.dump(2) + "\n";
}

bool operator==(const SystemParams& lhs, const SystemParams& rhs) {
    return lhs.omega_b == rhs.omega_b && lhs.omega_g == rhs.omega_g && lhs.v_g == rhs.v_g &&
           lhs.r_g == rhs.r_g && lhs.x_g == rhs.x_g && lhs.d_p == rhs.d_p &&
           lhs.d_q == rhs.d_q && lhs.omega_set == rhs.omega_set && lhs.p_set == rhs.p_set &&
           lhs.q_set == rhs.q_set && lhs.v_set == rhs.v_set;
}

bool operator==(const CaseSpec& lhs, const CaseSpec& rhs) {
    return lhs.name == rhs.name && lhs.xi == rhs.xi && lhs.ts == rhs.ts && lhs.a == rhs.a;
}

bool operator==(const SetpointEvent& lhs, const SetpointEvent& rhs) {
    return lhs.time == rhs.time && lhs.target == rhs.target && lhs.value == rhs.value;
}

bool operator==(const SimSection& lhs, const SimSection& rhs) {
    return lhs.t_end == rhs.t_end && lhs.dt == rhs.dt && lhs.record_every == rhs.record_every &&
           lhs.band == rhs.band && lhs.events == rhs.events;
}

bool operator==(const OutputSection& lhs, const OutputSection& rhs) {
    return lhs.directory == rhs.directory && lhs.formats == rhs.formats;
}

bool operator==(const DesignConfig& lhs, const DesignConfig& rhs) {
    return lhs.system == rhs.system && lhs.cases == rhs.cases && lhs.sim == rhs.sim &&
           lhs.output == rhs.output;
}

}  // namespace gfpc
