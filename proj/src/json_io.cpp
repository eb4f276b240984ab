#include "cosc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cosc::io {

namespace {

void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void write(std::string& out, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted keys
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                write(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // flat numeric arrays stay on one line
            bool flat = true;
            for (const Json& e : j) flat = flat && e.is_number();
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    write(out, j[i], indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                write(out, j[i], indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            write_number(out, j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

Json pair_json(const Pair& p) { return Json::array({p[0], p[1]}); }

Pair pair_from(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError(std::string(what) + " must be a pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number_or(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw InputError(std::string("field \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

}  // namespace

std::string dump(const Json& j) {
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

ScalarSchedule schedule_from_json(const Json& j, const TimeDomain& domain) {
    if (j.is_number()) return ScalarSchedule::constant(j.get<double>(), domain);
    if (j.is_string()) return ScalarSchedule::parse(j.get<std::string>(), domain);
    if (!j.is_object()) throw InputError("schedule must be an object, a string or a number");
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "expr") return ScalarSchedule::parse(require(j, "expr").get<std::string>(), domain);
    if (kind == "samples") {
        std::vector<std::pair<double, double>> samples;
        for (const Json& row : require(j, "samples")) {
            const Pair p = pair_from(row, "sample");
            samples.emplace_back(p[0], p[1]);
        }
        const ScalarSchedule s = ScalarSchedule::from_samples(samples);
        if (!s.domain().contains(domain.start) || !s.domain().contains(domain.end)) {
            throw InputError("samples do not cover the scenario domain");
        }
        return s;
    }
    throw InputError("unknown schedule kind \"" + kind + "\"");
}

Json schedule_to_json(const ScalarSchedule& s, std::span<const double> grid) {
    if (s.closed_form()) return Json{{"kind", "expr"}, {"expr", s.text()}};
    Json rows = Json::array();
    for (double t : grid) rows.push_back(Json::array({t, s.value(t)}));
    return Json{{"kind", "samples"}, {"samples", rows}};
}

Scenario scenario_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("scenario must be a JSON object");
    Constants c;
    if (j.contains("constants")) {
        const Json& cj = j.at("constants");
        c.hbar = number_or(cj, "hbar", c.hbar);
        c.big_m = number_or(cj, "M", c.big_m);
        if (cj.contains("alpha0")) c.alpha0 = pair_from(cj.at("alpha0"), "alpha0");
        if (cj.contains("Omega")) c.big_omega = pair_from(cj.at("Omega"), "Omega");
    }
    const Pair dom = pair_from(require(j, "domain"), "domain");
    if (!(dom[1] > dom[0])) throw InputError("domain must satisfy t0 < t1");
    const TimeDomain domain{dom[0], dom[1]};
    const double d0 = number_or(j, "d0", 0.0);
    const std::string mode = j.value("mode", std::string("inverse"));
    const Json& sj = require(j, "schedules");

    auto sched = [&](const char* key, const char* fallback) {
        if (!sj.contains(key)) {
            if (!fallback) throw InputError(std::string("missing schedule \"") + key + "\"");
            return ScalarSchedule::parse(fallback, domain);
        }
        return schedule_from_json(sj.at(key), domain);
    };
    const PairOf<ScalarSchedule> m{sched("m1", "1"), sched("m2", "1")};
    const PairOf<ScalarSchedule> b{sched("b1", "0"), sched("b2", "0")};

    if (mode == "inverse") return build_inverse_scenario(c, m, b, sched("rho1", nullptr), d0);
    if (mode != "forward") throw InputError("mode must be \"inverse\" or \"forward\"");
    if (d0 != 0.0) throw InputError("forward mode supports only uncoupled systems (d0 = 0)");

    const PairOf<ScalarSchedule> w2{sched("omega1_sq", nullptr), sched("omega2_sq", nullptr)};
    const Json fj = j.value("forward", Json::object());
    const int points = fj.value("grid", 2001);
    if (points < 2) throw InputError("forward grid needs at least two points");
    Pair rho0{}, rho_dot0{0.0, 0.0};
    if (fj.contains("rho0")) {
        rho0 = pair_from(fj.at("rho0"), "rho0");
    } else {
        for (int k = 0; k < 2; ++k) {
            const double wt2 = modified_frequency_sq(domain.start, m[k], b[k], w2[k]);
            if (!(wt2 > 0.0)) throw InputError("rho0 required when the modified frequency is not positive at t0");
            rho0[k] = equilibrium_rho(m[k].value(domain.start), std::sqrt(wt2), c.big_omega[k]);
        }
    }
    if (fj.contains("rho_dot0")) rho_dot0 = pair_from(fj.at("rho_dot0"), "rho_dot0");
    const std::vector<double> grid = linspace(domain.start, domain.end, static_cast<std::size_t>(points));
    return build_forward_scenario(c, m, b, w2, rho0, rho_dot0, grid);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("scenario file is not valid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

Json to_json(const Constants& c) {
    return Json{{"hbar", c.hbar}, {"M", c.big_m}, {"alpha0", pair_json(c.alpha0)}, {"Omega", pair_json(c.big_omega)}};
}

Json scenario_to_json(const Scenario& s, std::span<const double> grid) {
    Json sched = Json::object();
    const char* names[2][5] = {{"m1", "b1", "omega1_sq", "rho1", nullptr}, {"m2", "b2", "omega2_sq", "rho2", nullptr}};
    for (int j = 0; j < 2; ++j) {
        sched[names[j][0]] = schedule_to_json(s.m[j], grid);
        sched[names[j][1]] = schedule_to_json(s.b[j], grid);
        sched[names[j][2]] = schedule_to_json(s.omega_sq[j], grid);
        sched[names[j][3]] = schedule_to_json(s.rho[j], grid);
    }
    sched["d"] = schedule_to_json(s.d, grid);
    Json warnings = Json::array();
    for (const std::string& w : s.warnings) warnings.push_back(w);
    return Json{{"constants", to_json(s.constants)},
                {"domain", Json::array({s.domain.start, s.domain.end})},
                {"mode", s.mode == ScenarioMode::InverseConstructed ? "inverse" : "forward"},
                {"d0", s.d0},
                {"schedules", sched},
                {"warnings", warnings}};
}

Json to_json(const ValidationReport& r) {
    return Json{{"mass_balance_max_residual", r.mass_balance_max_residual},
                {"coupling_ode_max_residual", r.coupling_ode_max_residual},
                {"ermakov_max_residual", r.ermakov_max_residual},
                {"g_variant_max_spread", r.g_variant_max_spread}};
}

Json to_json(const DecoupledSpectrumData& d) {
    return Json{{"omega0", pair_json(d.omega0)},
                {"omega0_sq", pair_json(d.omega0_sq)},
                {"coupling", d.coupling},
                {"phi", d.phi},
                {"omega_bar", pair_json(d.omega_bar)},
                {"omega_bar_sq", pair_json(d.omega_bar_sq)},
                {"delta_bar", d.delta_bar},
                {"flags", Json{{"degenerate", d.degenerate}, {"positive_definite", d.positive_definite}}}};
}

Json to_json(const SpectrumReport& r) {
    Json entries = Json::array();
    for (const SpectrumEntry& e : r.entries) {
        entries.push_back(Json{{"n1", e.n1},
                               {"n2", e.n2},
                               {"lambda_theory", e.lambda_theory},
                               {"lambda_matrix", e.lambda_matrix},
                               {"deviation", e.deviation}});
    }
    return Json{{"entries", entries}, {"max_deviation", r.max_deviation}, {"decoupled", to_json(r.decoupled)}};
}

Json to_json(const FockBasisSpec& b) {
    return Json{{"cutoff", b.cutoff}, {"hbar", b.hbar}, {"mass_ref", b.mass_ref}, {"omega_ref", b.omega_ref}};
}

}  // namespace cosc::io
