#pragma once

// File formats for the CLI: point CSVs (one point per row, optional
// "# dim=m" header) and JSON for instances, configs and reports. Numeric JSON
// uses nlohmann's shortest-round-trip formatting; CSV output goes through
// std::to_chars for the same property.

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "rpmem/bounds.hpp"
#include "rpmem/error.hpp"
#include "rpmem/geometry.hpp"
#include "rpmem/membership.hpp"
#include "rpmem/montecarlo.hpp"

namespace rpmem::io {

using nlohmann::json;

struct IoError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::vector<Vector> read_points_csv(std::istream& in,
                                           const std::string& name) {
    std::vector<Vector> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t dim_hint = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("dim=");
            if (pos != std::string::npos) {
                const char* b = line.data() + pos + 4;
                const char* e = line.data() + line.size();
                std::size_t v = 0;
                if (std::from_chars(b, e, v).ec != std::errc{})
                    throw IoError(name + ":" + std::to_string(lineno) +
                                  ": bad dim header");
                dim_hint = v;
            }
            continue;
        }
        Vector row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t')) ++p;
            const char* field_end = p;
            while (field_end < end && *field_end != ',') ++field_end;
            double v = 0.0;
            const char* trimmed_end = field_end;
            while (trimmed_end > p &&
                   (trimmed_end[-1] == ' ' || trimmed_end[-1] == '\t'))
                --trimmed_end;
            const auto res = std::from_chars(p, trimmed_end, v);
            if (res.ec != std::errc{} || res.ptr != trimmed_end)
                throw IoError(name + ":" + std::to_string(lineno) +
                              ": bad numeric field '" +
                              std::string(p, field_end) + "'");
            row.push_back(v);
            p = field_end < end ? field_end + 1 : end;
        }
        if (row.empty())
            throw IoError(name + ":" + std::to_string(lineno) + ": empty row");
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError(name + ":" + std::to_string(lineno) +
                          ": row width differs from first row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(name + ": no data rows");
    if (dim_hint != 0 && rows.front().size() != dim_hint)
        throw IoError(name + ": dim header disagrees with row width");
    return rows;
}

inline void write_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

inline void write_points_csv(std::ostream& out, const std::vector<Vector>& rows) {
    if (!rows.empty()) {
        out << "# dim=" << rows.front().size() << "\n";
        for (const auto& row : rows) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (j) out << ",";
                write_double(out, row[j]);
            }
            out << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// JSON: configuration and domain objects
// ---------------------------------------------------------------------------

inline json to_json(const ConstantConfig& c) {
    return json{{"C_jl", c.c_jl},
                {"C_doubling", c.c_doubling},
                {"kappa", c.kappa},
                {"k_min", c.k_min}};
}

inline ConstantConfig constant_config_from_json(const json& j) {
    ConstantConfig c;
    if (j.contains("C_jl")) c.c_jl = j.at("C_jl").get<double>();
    if (j.contains("C_doubling")) c.c_doubling = j.at("C_doubling").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("k_min")) c.k_min = j.at("k_min").get<int>();
    c.validate();
    return c;
}

inline json to_json(const SelectionInputs& in) {
    json j = json::object();
    if (in.delta) j["delta"] = *in.delta;
    if (in.tau) j["tau"] = *in.tau;
    if (in.d) j["d"] = *in.d;
    if (in.big_d) j["D"] = *in.big_d;
    if (in.mu_a) {
        j["mu_a"] = *in.mu_a;
        j["mu_a_is_lower_bound"] = in.mu_a_is_lower_bound;
    }
    if (in.lambda_x) j["lambda"] = *in.lambda_x;
    if (in.b_bound) j["B"] = *in.b_bound;
    if (in.n) j["n"] = *in.n;
    if (in.set_size) j["set_size"] = *in.set_size;
    return j;
}

inline json to_json(const KSelection& sel) {
    return json{{"k", sel.k},
                {"rule", selection_rule_name(sel.rule)},
                {"inputs", to_json(sel.inputs)},
                {"constants", to_json(sel.constants)}};
}

inline json to_json(const Decision& dec) {
    json j{{"outcome", outcome_name(dec.outcome)},
           {"k_used", dec.k_used},
           {"guarantee", dec.guarantee},
           {"vacuous", dec.vacuous}};
    if (dec.vacuous)
        j["margin"] = nullptr;  // infinite: an empty fiber separates vacuously
    else
        j["margin"] = dec.margin;
    if (dec.selection) j["selection"] = to_json(*dec.selection);
    if (dec.guarantee_optimistic) j["guarantee_optimistic"] = true;
    if (dec.exact_margin) j["exact_margin"] = dec.exact_margin->str();
    return j;
}

inline json to_json(const EmpiricalReport& rep) {
    return json{{"failures", rep.failures},
                {"trials", rep.trials},
                {"rate", rep.rate},
                {"wilson_99_upper", rep.wilson_99_upper},
                {"wilson_99_half_width", rep.wilson_99_half_width},
                {"theoretical_delta", rep.theoretical_delta},
                {"metadata",
                 json{{"k", rep.k},
                      {"rule", selection_rule_name(rep.rule)},
                      {"constants", to_json(rep.constants)},
                      {"instance_hash", rep.instance_hash},
                      {"d", rep.d}}}};
}

inline json to_json(const IfpFloatReport& rep) {
    return json{{"trials", rep.trials},
                {"lattice_points", rep.lattice_points},
                {"min_gaps", rep.min_gaps},
                {"scales", rep.scales},
                {"frac_below_1e-6", rep.frac_below_1e6},
                {"frac_below_1e-9", rep.frac_below_1e9},
                {"frac_below_1e-12", rep.frac_below_1e12},
                {"rel_gap_min", rep.rel_gap_min},
                {"rel_gap_median", rep.rel_gap_median},
                {"rel_gap_max", rep.rel_gap_max},
                {"metadata", json{{"instance_hash", rep.instance_hash}}}};
}

inline json to_json(const CalibrationResult& cal) {
    return json{{"C_hat", cal.c_hat},
                {"intercept", cal.intercept},
                {"k_grid", cal.k_grid},
                {"rates", cal.rates},
                {"points_used", cal.points_used},
                {"lower_bound_only", cal.lower_bound_only},
                {"diagnostic", cal.diagnostic}};
}

inline Vector vector_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty())
        throw IoError(std::string("instance: '") + field +
                      "' must be a nonempty array");
    Vector v;
    for (const auto& e : j) {
        if (!e.is_number())
            throw IoError(std::string("instance: '") + field +
                          "' has a non-numeric entry");
        v.push_back(e.get<double>());
    }
    return v;
}

inline std::vector<Vector> points_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty())
        throw IoError(std::string("instance: '") + field +
                      "' must be a nonempty array of points");
    std::vector<Vector> pts;
    for (const auto& e : j) pts.push_back(vector_from_json(e, field));
    return pts;
}

inline IntVector intvector_from_json(const json& j, const char* field) {
    if (!j.is_array())
        throw IoError(std::string("instance: '") + field + "' must be an array");
    IntVector v;
    for (const auto& e : j) {
        if (e.is_number_integer()) {
            v.emplace_back(e.get<long long>());
        } else if (e.is_string()) {
            v.emplace_back(BigInt(e.get<std::string>()));
        } else {
            throw IoError(std::string("instance: '") + field +
                          "' entries must be integers or decimal strings");
        }
    }
    return v;
}

inline IntegerFiber integer_fiber_from_json(const json& j) {
    IntegerFiber F;
    if (!j.contains("A") || !j.contains("b") || !j.contains("positive_row"))
        throw IoError("instance: integer instance needs 'A', 'b', 'positive_row'");
    for (const auto& row : j.at("A")) F.A.push_back(intvector_from_json(row, "A"));
    F.b = intvector_from_json(j.at("b"), "b");
    F.positive_row = j.at("positive_row").get<std::size_t>();
    if (j.contains("box")) {
        const auto& box = j.at("box");
        F.box_lower = intvector_from_json(box.at("L"), "box.L");
        F.box_upper = intvector_from_json(box.at("U"), "box.U");
    }
    F.validate();
    return F;
}

struct ParsedInstance {
    SetInstance instance;
    Vector query;  // p or b; empty for integer instances
};

// Instance JSON: {"class": ..., then class-specific fields}. The class field
// is optional when the caller already knows it (CLI subcommand).
inline ParsedInstance instance_from_json(const json& j,
                                         const std::string& expected_class) {
    if (j.contains("class") &&
        j.at("class").get<std::string>() != expected_class)
        throw IoError("instance: 'class' field disagrees with subcommand");
    if (expected_class == "finite" || expected_class == "doubling") {
        if (!j.contains("p") || !j.contains("points"))
            throw IoError("instance: needs 'p' and 'points'");
        PointSet X(points_from_json(j.at("points"), "points"));
        Vector p = vector_from_json(j.at("p"), "p");
        if (expected_class == "doubling")
            return {SetInstance{DoublingSample{std::move(X)}}, std::move(p)};
        return {SetInstance{std::move(X)}, std::move(p)};
    }
    if (expected_class == "polytope") {
        if (!j.contains("b") || !j.contains("vertices"))
            throw IoError("instance: needs 'b' and 'vertices'");
        return {SetInstance{Polytope{PointSet(
                    points_from_json(j.at("vertices"), "vertices"))}},
                vector_from_json(j.at("b"), "b")};
    }
    if (expected_class == "cone") {
        if (!j.contains("b") || !j.contains("generators"))
            throw IoError("instance: needs 'b' and 'generators'");
        return {SetInstance{Cone{PointSet(
                    points_from_json(j.at("generators"), "generators"))}},
                vector_from_json(j.at("b"), "b")};
    }
    if (expected_class == "integer")
        return {SetInstance{integer_fiber_from_json(j)}, Vector{}};
    throw IoError("instance: unknown class '" + expected_class + "'");
}

inline InstanceClass instance_class_from_string(const std::string& s) {
    if (s == "finite") return InstanceClass::Finite;
    if (s == "polytope") return InstanceClass::Polytope;
    if (s == "cone") return InstanceClass::Cone;
    if (s == "integer") return InstanceClass::IntegerFiber;
    if (s == "doubling") return InstanceClass::DoublingSample;
    if (s == "synthetic_geometric") return InstanceClass::SyntheticGeometric;
    throw IoError("unknown instance class '" + s + "'");
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (!j.contains("class")) throw IoError("experiment config: missing 'class'");
    cfg.cls = instance_class_from_string(j.at("class").get<std::string>());
    if (j.contains("m")) cfg.m = j.at("m").get<std::size_t>();
    if (j.contains("set_size")) cfg.set_size = j.at("set_size").get<std::size_t>();
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("B")) cfg.b_bound = j.at("B").get<std::size_t>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("tau_over_d")) cfg.tau_over_d = j.at("tau_over_d").get<double>();
    if (j.contains("k")) cfg.k_override = j.at("k").get<int>();
    if (j.contains("instance_seed"))
        cfg.instance_seed = j.at("instance_seed").get<std::uint64_t>();
    if (j.contains("master_seed"))
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    if (j.contains("mu_samples"))
        cfg.mu_samples = j.at("mu_samples").get<std::size_t>();
    if (j.contains("constants"))
        cfg.constants = constant_config_from_json(j.at("constants"));
    cfg.validate();
    return cfg;
}

}  // namespace rpmem::io
