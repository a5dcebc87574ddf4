#include "tlab/config.hpp"

#include <set>

namespace tlab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where, std::vector<std::string>& out) {
    if (!j.is_object()) {
        out.push_back(where + " must be an object");
        return;
    }
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            out.push_back(where + ": unknown key \"" + key + "\"");
}

bool num(const json& j, const char* key) {
    return j.contains(key) && j[key].is_number();
}

void validate_potential(const json& p, const std::string& where,
                        std::vector<std::string>& out) {
    check_keys(p, {"i", "j", "kind", "depth", "range", "components"}, where, out);
    if (!p.is_object()) return;
    if (!p.contains("i") || !p.contains("j") || !p["i"].is_number_integer() ||
        !p["j"].is_number_integer())
        out.push_back(where + ": pair indices i, j required");
    if (!p.contains("kind") || !p["kind"].is_string()) {
        out.push_back(where + ": kind required");
        return;
    }
    const std::string kind = p["kind"];
    const std::set<std::string> kinds = {"gaussian", "square-well",
                                         "screened-coulomb", "gaussian-sum"};
    if (!kinds.count(kind)) {
        out.push_back(where + ": unknown potential kind \"" + kind + "\"");
        return;
    }
    if (kind == "gaussian-sum") {
        if (!p.contains("components") || !p["components"].is_array() ||
            p["components"].empty()) {
            out.push_back(where + ": components required for gaussian-sum");
            return;
        }
        int ci = 0;
        for (const auto& c : p["components"]) {
            const std::string cw = where + ".components[" + std::to_string(ci++) + "]";
            check_keys(c, {"weight", "range"}, cw, out);
            if (!num(c, "weight") || !num(c, "range"))
                out.push_back(cw + ": weight and range required");
            else if (!(c["range"].get<double>() > 0.0))
                out.push_back(cw + ": range must be > 0");
        }
    } else {
        if (!num(p, "depth") || !num(p, "range"))
            out.push_back(where + ": depth and range required");
        else if (!(p["range"].get<double>() > 0.0))
            out.push_back(where + ": range must be > 0");
        if (p.contains("components"))
            out.push_back(where + ": components only valid for gaussian-sum");
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j[key].get<T>();
}

} // namespace

std::vector<std::string> validate_config(const json& j) {
    std::vector<std::string> out;
    check_keys(j, {"system", "solver", "experiment", "output"}, "config", out);
    if (!j.is_object()) return out;

    if (!j.contains("system")) {
        out.push_back("system block required");
    } else {
        const auto& s = j["system"];
        check_keys(s, {"masses", "coupling", "potentials"}, "system", out);
        if (!s.contains("masses") || !s["masses"].is_array() || s["masses"].size() < 2)
            out.push_back("system.masses required (>= 2 entries)");
        else
            for (const auto& m : s["masses"])
                if (!m.is_number() || !(m.get<double>() > 0.0))
                    out.push_back("system.masses must be > 0");
        if (s.contains("coupling") &&
            (!s["coupling"].is_number() || !(s["coupling"].get<double>() > 0.0)))
            out.push_back("system.coupling must be > 0");
        if (s.contains("potentials")) {
            if (!s["potentials"].is_array()) {
                out.push_back("system.potentials must be an array");
            } else {
                int pi = 0;
                for (const auto& p : s["potentials"])
                    validate_potential(
                        p, "system.potentials[" + std::to_string(pi++) + "]", out);
            }
        }
    }

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        check_keys(s,
                   {"r_max", "n", "basis_size", "pool", "b_min", "b_max", "seed"},
                   "solver", out);
        if (s.is_object()) {
            if (s.contains("r_max") && !(s["r_max"].is_number() && s["r_max"].get<double>() > 0.0))
                out.push_back("solver.r_max must be > 0");
            if (s.contains("n") && !(s["n"].is_number_integer() && s["n"].get<int>() >= 4))
                out.push_back("solver.n must be an integer >= 4");
            if (s.contains("seed") &&
                !(s["seed"].is_number_unsigned() ||
                  (s["seed"].is_number_integer() && s["seed"].get<long long>() >= 0)))
                out.push_back("solver.seed must be a non-negative integer");
        }
    }

    if (j.contains("experiment")) {
        const auto& e = j["experiment"];
        check_keys(e,
                   {"lambda", "tol", "lambda_schedule", "l_values", "k_values",
                    "epsilons", "q_values", "probe_r_max", "probe_n", "extra",
                    "lambda_hint", "delta_min", "delta_max", "schedule_points"},
                   "experiment", out);
        if (e.is_object()) {
            for (const char* key : {"lambda_schedule", "l_values", "k_values",
                                    "epsilons", "q_values"})
                if (e.contains(key) && !e[key].is_array())
                    out.push_back(std::string("experiment.") + key + " must be an array");
            if (e.contains("tol") && !(e["tol"].is_number() && e["tol"].get<double>() > 0.0))
                out.push_back("experiment.tol must be > 0");
        }
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, {"directory", "formats"}, "output", out);
        if (o.is_object() && o.contains("formats")) {
            if (!o["formats"].is_array())
                out.push_back("output.formats must be an array");
            else
                for (const auto& f : o["formats"])
                    if (!f.is_string() || (f != "json" && f != "csv"))
                        out.push_back("output.formats entries must be \"json\" or \"csv\"");
        }
    }
    return out;
}

ExperimentConfig load_config(const json& j) {
    const auto violations = validate_config(j);
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::invalid_argument(msg);
    }
    ExperimentConfig c;
    const auto& s = j["system"];
    c.system.masses = s["masses"].get<std::vector<double>>();
    read_if(s, "coupling", c.system.coupling);
    if (s.contains("potentials"))
        for (const auto& p : s["potentials"]) {
            const int i = p["i"], jj = p["j"];
            const std::string kind = p["kind"];
            PairPotential pot = PairPotential::gaussian(-1.0, 1.0);
            if (kind == "gaussian")
                pot = PairPotential::gaussian(p["depth"], p["range"]);
            else if (kind == "square-well")
                pot = PairPotential::square_well(p["depth"], p["range"]);
            else if (kind == "screened-coulomb")
                pot = PairPotential::screened_coulomb(p["depth"], p["range"]);
            else {
                std::vector<GaussianTerm> terms;
                for (const auto& t : p["components"])
                    terms.push_back({t["weight"], t["range"]});
                pot = PairPotential::gaussian_sum(terms);
            }
            c.system.potentials.emplace(PairKey{std::min(i, jj), std::max(i, jj)}, pot);
        }
    c.system.validate();

    if (j.contains("solver")) {
        const auto& so = j["solver"];
        read_if(so, "r_max", c.solver.r_max);
        read_if(so, "n", c.solver.n);
        read_if(so, "basis_size", c.solver.basis_size);
        read_if(so, "pool", c.solver.pool);
        read_if(so, "b_min", c.solver.b_min);
        read_if(so, "b_max", c.solver.b_max);
        if (so.contains("seed")) c.solver.seed = so["seed"].get<std::uint64_t>();
    }
    if (j.contains("experiment")) {
        const auto& e = j["experiment"];
        read_if(e, "lambda", c.experiment.lambda);
        read_if(e, "tol", c.experiment.tol);
        read_if(e, "lambda_schedule", c.experiment.lambda_schedule);
        read_if(e, "l_values", c.experiment.l_values);
        read_if(e, "k_values", c.experiment.k_values);
        read_if(e, "epsilons", c.experiment.epsilons);
        read_if(e, "q_values", c.experiment.q_values);
        read_if(e, "probe_r_max", c.experiment.probe_r_max);
        read_if(e, "probe_n", c.experiment.probe_n);
        read_if(e, "extra", c.experiment.extra);
        read_if(e, "lambda_hint", c.experiment.lambda_hint);
        if (e.contains("delta_min")) c.experiment.delta_min = e["delta_min"].get<double>();
        if (e.contains("delta_max")) c.experiment.delta_max = e["delta_max"].get<double>();
        read_if(e, "schedule_points", c.experiment.schedule_points);
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        read_if(o, "directory", c.output.directory);
        read_if(o, "formats", c.output.formats);
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["system"]["masses"] = c.system.masses;
    j["system"]["coupling"] = c.system.coupling;
    j["system"]["potentials"] = json::array();
    for (const auto& [key, pot] : c.system.potentials) {
        json p;
        p["i"] = key.i;
        p["j"] = key.j;
        switch (pot.kind()) {
            case PotentialKind::gaussian: p["kind"] = "gaussian"; break;
            case PotentialKind::square_well: p["kind"] = "square-well"; break;
            case PotentialKind::screened_coulomb: p["kind"] = "screened-coulomb"; break;
            case PotentialKind::gaussian_sum: p["kind"] = "gaussian-sum"; break;
        }
        if (pot.kind() == PotentialKind::gaussian_sum) {
            p["components"] = json::array();
            for (const auto& t : pot.terms())
                p["components"].push_back({{"weight", t.weight}, {"range", t.range}});
        } else {
            p["depth"] = pot.depth();
            p["range"] = pot.range();
        }
        j["system"]["potentials"].push_back(p);
    }
    j["solver"] = {{"r_max", c.solver.r_max},     {"n", c.solver.n},
                   {"basis_size", c.solver.basis_size}, {"pool", c.solver.pool},
                   {"b_min", c.solver.b_min},     {"b_max", c.solver.b_max}};
    if (c.solver.seed) j["solver"]["seed"] = *c.solver.seed;
    json e;
    if (c.experiment.lambda != 0.0) e["lambda"] = c.experiment.lambda;
    e["tol"] = c.experiment.tol;
    if (!c.experiment.lambda_schedule.empty())
        e["lambda_schedule"] = c.experiment.lambda_schedule;
    if (!c.experiment.l_values.empty()) e["l_values"] = c.experiment.l_values;
    if (!c.experiment.k_values.empty()) e["k_values"] = c.experiment.k_values;
    if (!c.experiment.epsilons.empty()) e["epsilons"] = c.experiment.epsilons;
    if (!c.experiment.q_values.empty()) e["q_values"] = c.experiment.q_values;
    e["probe_r_max"] = c.experiment.probe_r_max;
    e["probe_n"] = c.experiment.probe_n;
    e["extra"] = c.experiment.extra;
    if (c.experiment.lambda_hint != 0.0) e["lambda_hint"] = c.experiment.lambda_hint;
    if (c.experiment.delta_min) e["delta_min"] = *c.experiment.delta_min;
    if (c.experiment.delta_max) e["delta_max"] = *c.experiment.delta_max;
    if (c.experiment.schedule_points) e["schedule_points"] = c.experiment.schedule_points;
    j["experiment"] = e;
    j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
    return j;
}

} // namespace tlab
