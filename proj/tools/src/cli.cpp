#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polycap/error.hpp"
#include "polycap/fundamental_solutions.hpp"
#include "polycap/symbol_calculus.hpp"
#include "polycap/verification.hpp"
#include "polycap/wiener_analyzer.hpp"
#include "serialize.hpp"

namespace polycap::cli {
namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ValidationError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_artifact(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) throw IoError("cannot write '" + cfg.out_path + "'");
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
    sub->add_option("--m", cfg.m, "Polyharmonic order m")->required();
    sub->add_option("--n", cfg.n, "Space dimension n")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out_path, "Output file (default: stdout)");
}

void add_discretization(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--kappa", cfg.disc.kappa, "Element size times the fastest mode rate (0: default for m)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--refine", cfg.disc.refine, "Extra uniform halvings of the base mesh")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-elements", cfg.disc.max_elements, "Element budget per mode");
    sub->add_flag("!--no-richardson", cfg.disc.richardson, "Report the fine-mesh energy without extrapolation");
}

void add_kind(CLI::App* sub, std::string& kind) {
    sub->add_option("--kind", kind, "Capacity kind")->check(CLI::IsMember({"phi", "dirichlet"}));
}

std::string render(const RunConfig& cfg, const Json& j, const std::string& csv) {
    return cfg.format == Format::csv ? csv : dump(j);
}

int run_coeffs(const RunConfig& cfg, const Dims& dims, std::ostream& out) {
    const CoeffTable t = cfg.kind == CapacityKind::phi ? coeff_table(dims, cfg.p_max)
                                                       : dirichlet_symbol_table(dims, cfg.p_max);
    write_artifact(cfg, render(cfg, to_json(t), coeffs_csv(t)), out);
    return exit_ok;
}

int run_fundsol(const RunConfig& cfg, const Dims& dims, std::ostream& out) {
    const FundSol h = fundsol(dims);
    write_artifact(cfg, render(cfg, to_json(h), fundsol_csv(h)), out);
    return exit_ok;
}

int run_capacity(const RunConfig& cfg, const Dims& dims, std::ostream& out) {
    const RadialCompactum K = obstacle_from_json(read_json_file(cfg.obstacle_path));
    const Annulus A = make_annulus(cfg.r_in, cfg.r_out);
    const CapacityResult r = cap_inf(dims, cfg.kind, K, A, cfg.disc);
    Json j = to_json(r);
    j["m"] = dims.m;
    j["n"] = dims.n;
    j["ambient"] = {A.r_in, A.r_out};
    Json shells = Json::array();
    for (const auto& s : K.shells()) shells.push_back({s.a, s.b});
    j["obstacle"] = shells;
    std::string csv = capacity_csv(r);
    if (cfg.sweep) {
        const auto sweep = ambient_sweep(dims, cfg.kind, K, A, cfg.sweep_steps, cfg.disc);
        j["sweep"] = to_json(sweep);
        csv = sweep_csv(sweep);
    }
    write_artifact(cfg, render(cfg, j, csv), out);
    return exit_ok;
}

int run_wiener(const RunConfig& cfg, const Dims& dims, std::ostream& out) {
    const DomainModel model = model_from_json(read_json_file(cfg.model_path));
    const WienerSeries s = wiener_terms(dims, model, cfg.j0, cfg.j_max, cfg.disc, cfg.kind);
    Json j = to_json(s);
    j["m"] = dims.m;
    j["n"] = dims.n;
    j["kind"] = to_string(cfg.kind);
    j["model"] = model.describe();
    j["verdict"] = to_json(classify(s, model));
    write_artifact(cfg, render(cfg, j, wiener_csv(s)), out);
    return exit_ok;
}

int run_verify(const RunConfig& cfg, const Dims& dims, std::ostream& out) {
    VerifyOptions opts;
    opts.disc = cfg.disc;
    const Report r = verify_suite(dims, opts);
    std::string text;
    if (cfg.format == Format::json) {
        Json j = to_json(r);
        j["m"] = dims.m;
        j["n"] = dims.n;
        text = dump(j);
    } else {
        text = cfg.format == Format::csv ? report_csv(r) : report_text(r);
    }
    write_artifact(cfg, text, out);
    return r.passed() ? exit_ok : exit_computation;
}

}  // namespace

ParseResult parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Capacities and Wiener-type series for polyharmonic operators", "polycap"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format;
    std::string kind;

    auto* coeffs = app.add_subcommand("coeffs", "Exact mode-symbol coefficients c_kp");
    add_common(coeffs, cfg, format);
    coeffs->add_option("--pmax", cfg.p_max, "Largest spherical-harmonic degree")->check(CLI::NonNegativeNumber);
    coeffs->add_option("--kind", kind, "phi (shift λ) or dirichlet (shift m - n/2); default phi")
        ->check(CLI::IsMember({"phi", "dirichlet"}));

    auto* fund = app.add_subcommand("fundsol", "Exact fundamental solution of the mode-zero operator");
    add_common(fund, cfg, format);

    auto* cap = app.add_subcommand("capacity", "Capacity of a radial compactum in an annulus");
    add_common(cap, cfg, format);
    add_discretization(cap, cfg);
    add_kind(cap, kind);
    cap->add_option("--obstacle", cfg.obstacle_path, "Obstacle JSON {\"shells\": [[a, b], ...]}")->required();
    std::vector<double> ambient;
    cap->add_option("--ambient", ambient, "Ambient annulus radii rin,rout")->required()->delimiter(',')->expected(2);
    cap->add_flag("--sweep", cfg.sweep, "Also report cap_inf for ambients widened by powers of 2");
    cap->add_option("--sweep-steps", cfg.sweep_steps, "Number of sweep ambients")->check(CLI::PositiveNumber);

    auto* wien = app.add_subcommand("wiener", "Wiener-type series over dyadic annuli and its classification");
    add_common(wien, cfg, format);
    add_discretization(wien, cfg);
    add_kind(wien, kind);
    wien->add_option("--model", cfg.model_path, "Domain model JSON")->required();
    wien->add_option("--j0", cfg.j0, "First annulus index")->check(CLI::NonNegativeNumber);
    wien->add_option("--jmax", cfg.j_max, "Last annulus index")->check(CLI::NonNegativeNumber);

    auto* ver = app.add_subcommand("verify", "Run the invariant suite for one (m, n)");
    add_common(ver, cfg, format);
    add_discretization(ver, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, exit_ok, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, exit_ok, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        return {std::nullopt, exit_usage, msg + "\nRun with --help for more information."};
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "coeffs") {
        cfg.subcommand = Subcommand::coeffs;
        cfg.kind = CapacityKind::phi;
    } else if (name == "fundsol") {
        cfg.subcommand = Subcommand::fundsol;
    } else if (name == "capacity") {
        cfg.subcommand = Subcommand::capacity;
    } else if (name == "wiener") {
        cfg.subcommand = Subcommand::wiener;
    } else {
        cfg.subcommand = Subcommand::verify;
    }
    if (!kind.empty()) cfg.kind = parse_capacity_kind(kind);
    if (ambient.size() == 2) {
        cfg.r_in = ambient[0];
        cfg.r_out = ambient[1];
    }
    if (format.empty()) {
        cfg.format = cfg.subcommand == Subcommand::verify ? Format::text : Format::json;
    } else {
        cfg.format = format == "csv" ? Format::csv : format == "text" ? Format::text : Format::json;
        if (cfg.format == Format::text && cfg.subcommand != Subcommand::verify) {
            return {std::nullopt, exit_usage, "--format text is only available for verify"};
        }
    }

    try {
        make_dims(cfg.m, cfg.n);
        if (cfg.subcommand == Subcommand::capacity) make_annulus(cfg.r_in, cfg.r_out);
        if (cfg.subcommand == Subcommand::wiener && cfg.j_max < cfg.j0) {
            throw ValidationError("--jmax must be >= --j0");
        }
    } catch (const ValidationError& e) {
        return {std::nullopt, exit_validation, e.what()};
    }
    return {cfg, exit_ok, {}};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Dims dims = make_dims(cfg.m, cfg.n);
        switch (cfg.subcommand) {
            case Subcommand::coeffs: return run_coeffs(cfg, dims, out);
            case Subcommand::fundsol: return run_fundsol(cfg, dims, out);
            case Subcommand::capacity: return run_capacity(cfg, dims, out);
            case Subcommand::wiener: return run_wiener(cfg, dims, out);
            case Subcommand::verify: return run_verify(cfg, dims, out);
        }
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "computation error: " << e.what() << '\n';
        return exit_computation;
    }
    return exit_computation;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const ParseResult parsed = parse_args(args);
    if (!parsed.config) {
        (parsed.exit_code == exit_ok ? out : err) << parsed.message << (parsed.message.ends_with('\n') ? "" : "\n");
        return parsed.exit_code;
    }
    return run(*parsed.config, out, err);
}

}  // namespace polycap::cli
