#include "serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "polycap/error.hpp"

namespace polycap::cli {
namespace {

void render(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                render(it.value(), depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                render(j[i], depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

Rational rational_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw ValidationError(std::string("expected rational string field '") + key + "'");
    }
    return parse_rational(j.at(key).get<std::string>());
}

int int_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw ValidationError(std::string("expected integer field '") + key + "'");
    }
    return j.at(key).get<int>();
}

Json rational_array(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

std::vector<Rational> rational_array_from(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ValidationError(std::string("expected array field '") + key + "'");
    }
    std::vector<Rational> out;
    for (const auto& e : j.at(key)) {
        if (!e.is_string()) throw ValidationError(std::string("non-string rational in '") + key + "'");
        out.push_back(parse_rational(e.get<std::string>()));
    }
    return out;
}

Json terms_json(const ExpPoly& terms) {
    Json a = Json::array();
    for (const auto& t : terms) {
        a.push_back({{"rate", to_string(t.rate)}, {"degree", t.poly_degree}, {"coeff", to_string(t.coeff)}});
    }
    return a;
}

ExpPoly terms_from(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ValidationError(std::string("expected array field '") + key + "'");
    }
    ExpPoly out;
    for (const auto& e : j.at(key)) {
        out.push_back({rational_field(e, "rate"), int_field(e, "degree"), rational_field(e, "coeff")});
    }
    return out;
}

Json per_mode_json(const std::map<int, double>& values) {
    Json o = Json::object();
    for (const auto& [p, v] : values) o[std::to_string(p)] = v;
    return o;
}

RuleExpr rule_field(const Json& j, const char* key) {
    const Json& v = j.at(key);
    if (v.is_string()) return RuleExpr::parse(v.get<std::string>());
    if (v.is_number()) return RuleExpr::parse(format_double(v.get<double>()));
    throw ValidationError(std::string("model field '") + key + "' must be an expression string or a number");
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump(const Json& j) {
    std::string out;
    render(j, 0, out);
    return out + "\n";
}

Json to_json(const CoeffTable& t) {
    Json rows = Json::array();
    for (int p = 0; p <= t.p_max(); ++p) rows.push_back({{"p", p}, {"coeffs", rational_array(t.row(p).coeffs())}});
    return {{"m", t.dims.m}, {"n", t.dims.n}, {"shift", to_string(t.shift)}, {"rows", rows}};
}

CoeffTable coeff_table_from_json(const Json& j) {
    CoeffTable t;
    t.dims = make_dims(int_field(j, "m"), int_field(j, "n"));
    t.shift = rational_field(j, "shift");
    if (!j.contains("rows") || !j.at("rows").is_array()) throw ValidationError("expected array field 'rows'");
    for (const auto& row : j.at("rows")) {
        if (int_field(row, "p") != t.p_max() + 1) throw ValidationError("coefficient rows must be consecutive from p = 0");
        t.rows.emplace_back(rational_array_from(row, "coeffs"));
    }
    return t;
}

Json to_json(const FundSol& h) {
    Json roots = Json::array();
    for (const auto& r : h.roots) roots.push_back({{"value", to_string(r.value)}, {"multiplicity", r.multiplicity}});
    return {{"m", h.dims.m},
            {"n", h.dims.n},
            {"operator", rational_array(h.op)},
            {"roots", roots},
            {"base_degree", h.base_degree},
            {"plus_terms", terms_json(h.plus_terms)},
            {"minus_terms", terms_json(h.minus_terms)},
            {"mu4", to_string(h.mu4)},
            {"mu5", to_string(h.mu5)}};
}

FundSol fundsol_from_json(const Json& j) {
    FundSol h;
    h.dims = make_dims(int_field(j, "m"), int_field(j, "n"));
    h.op = rational_array_from(j, "operator");
    if (!j.contains("roots") || !j.at("roots").is_array()) throw ValidationError("expected array field 'roots'");
    for (const auto& r : j.at("roots")) h.roots.push_back({rational_field(r, "value"), int_field(r, "multiplicity")});
    h.base_degree = int_field(j, "base_degree");
    h.plus_terms = terms_from(j, "plus_terms");
    h.minus_terms = terms_from(j, "minus_terms");
    h.mu4 = rational_field(j, "mu4");
    h.mu5 = rational_field(j, "mu5");
    return h;
}

Json to_json(const CapacityResult& r) {
    return {{"kind", to_string(r.kind)},
            {"per_mode", per_mode_json(r.per_mode)},
            {"per_mode_error", per_mode_json(r.per_mode_error)},
            {"cap_P", r.cap_P},
            {"cap_inf", r.cap_inf},
            {"argmin_p", r.argmin_p},
            {"elements", r.elements},
            {"h_min", r.h_min},
            {"h_max", r.h_max},
            {"error_estimate", r.error_estimate}};
}

Json to_json(const std::vector<SweepPoint>& sweep) {
    Json a = Json::array();
    for (const auto& s : sweep) a.push_back({{"r_in", s.r_in}, {"r_out", s.r_out}, {"cap_inf", s.cap_inf}});
    return a;
}

Json to_json(const WienerSeries& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms) {
        terms.push_back({{"j", t.j},
                         {"cap", t.cap},
                         {"argmin_p", t.argmin_p},
                         {"per_mode", per_mode_json(t.per_mode)},
                         {"weight", t.weight},
                         {"term", t.term},
                         {"partial_sum", t.partial_sum}});
    }
    return {{"parity", s.parity == Parity::even ? "even" : "odd"},
            {"j0", s.j0},
            {"j1", s.j1},
            {"terms", terms},
            {"pure_mode_sums", per_mode_json(s.pure_mode_sums)},
            {"sum_inf_inside", s.sum_inf_inside},
            {"inf_outside", s.inf_outside},
            {"inf_outside_p", s.inf_outside_p},
            {"forms_differ", s.forms_differ}};
}

Json to_json(const Verdict& v) {
    return {{"classification", to_string(v.classification)},
            {"rationale", v.rationale},
            {"fit_kind", v.fit_kind},
            {"fitted_ratio", v.fitted_ratio},
            {"tail_bound", v.tail_bound},
            {"lower_bound", v.lower_bound}};
}

Json to_json(const Report& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"passed", r.passed()}, {"checks", checks}};
}

std::string coeffs_csv(const CoeffTable& t) {
    std::ostringstream os;
    os << "p,k,num,den\n";
    for (int p = 0; p <= t.p_max(); ++p) {
        const auto& row = t.row(p);
        for (int k = 0; k <= row.degree(); ++k) {
            os << p << ',' << k << ',' << numerator(row[k]) << ',' << denominator(row[k]) << '\n';
        }
    }
    return os.str();
}

std::string fundsol_csv(const FundSol& h) {
    std::ostringstream os;
    os << "side,rate,degree,coeff_num,coeff_den\n";
    auto emit = [&](const char* side, const ExpPoly& terms) {
        for (const auto& t : terms) {
            os << side << ',' << to_string(t.rate) << ',' << t.poly_degree << ',' << numerator(t.coeff) << ','
               << denominator(t.coeff) << '\n';
        }
    };
    emit("plus", h.plus_terms);
    emit("minus", h.minus_terms);
    return os.str();
}

std::string capacity_csv(const CapacityResult& r) {
    std::ostringstream os;
    os << "p,capacity,error_estimate\n";
    for (const auto& [p, v] : r.per_mode) {
        const auto e = r.per_mode_error.find(p);
        os << p << ',' << format_double(v) << ',' << format_double(e == r.per_mode_error.end() ? 0.0 : e->second)
           << '\n';
    }
    return os.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep) {
    std::ostringstream os;
    os << "r_in,r_out,cap_inf\n";
    for (const auto& s : sweep) {
        os << format_double(s.r_in) << ',' << format_double(s.r_out) << ',' << format_double(s.cap_inf) << '\n';
    }
    return os.str();
}

std::string wiener_csv(const WienerSeries& s) {
    std::ostringstream os;
    os << "j,cap,term,partial_sum\n";
    for (const auto& t : s.terms) {
        os << t.j << ',' << format_double(t.cap) << ',' << format_double(t.term) << ','
           << format_double(t.partial_sum) << '\n';
    }
    return os.str();
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    os << "name,passed,detail\n";
    for (const auto& c : r.checks) {
        os << csv_field(c.name) << ',' << (c.passed ? "true" : "false") << ',' << csv_field(c.detail) << '\n';
    }
    return os.str();
}

std::string report_text(const Report& r) {
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto& c : r.checks) {
        if (!c.passed) ++failed;
        os << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    os << r.checks.size() - failed << '/' << r.checks.size() << " checks passed\n";
    return os.str();
}

RadialCompactum obstacle_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("shells") || !j.at("shells").is_array()) {
        throw ValidationError("obstacle must be an object with a 'shells' array");
    }
    std::vector<Shell> shells;
    for (const auto& e : j.at("shells")) {
        if (e.is_number()) {
            const double r = e.get<double>();
            shells.push_back({r, r});
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            shells.push_back({e[0].get<double>(), e[1].get<double>()});
        } else {
            throw ValidationError("each shell must be [a, b] or a sphere radius");
        }
    }
    return RadialCompactum(std::move(shells));
}

DomainModel model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ValidationError("model must be an object with a string 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "full") return DomainModel::full();
    if (kind == "sphere") {
        const bool scale = j.contains("cap_scale");
        const bool radius = j.contains("radius");
        if (scale == radius) throw ValidationError("sphere model needs exactly one of 'cap_scale' and 'radius'");
        return scale ? DomainModel::sphere_cap_scale(rule_field(j, "cap_scale"))
                     : DomainModel::sphere_radius(rule_field(j, "radius"));
    }
    if (kind == "shell") {
        if (!j.contains("thickness")) throw ValidationError("shell model needs 'thickness'");
        return DomainModel::shell(rule_field(j, "thickness"));
    }
    if (kind == "empty-after" || kind == "empty_after") return DomainModel::empty_after(int_field(j, "J"));
    throw ValidationError("unknown model kind '" + kind + "'");
}

}  // namespace polycap::cli
