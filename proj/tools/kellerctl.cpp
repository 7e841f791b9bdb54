#include "keller/config.hpp"
#include "keller/errors.hpp"
#include "keller/json_io.hpp"
#include "keller/majorant.hpp"
#include "keller/normalize.hpp"
#include "keller/reversion.hpp"
#include "keller/selftest.hpp"
#include "keller/transform.hpp"
#include "keller/witness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

namespace fs = std::filesystem;
using namespace keller;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kVerdict = 2;

struct Run {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    RunConfig config;
    std::vector<fs::path> inputs;
    std::vector<std::string> outputs;
};

/// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
Json load(Run& run, const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return Json::parse(arg);
    std::ifstream f(arg);
    if (!f) throw ParseError("cannot open " + arg);
    run.inputs.emplace_back(arg);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ParseError(arg + ": " + e.what());
    }
}

void write_file(Run& run, const std::string& name, const std::string& text) {
    fs::create_directories(run.out_dir);
    fs::path p = fs::path(run.out_dir) / name;
    std::ofstream(p) << text;
    run.outputs.push_back(p.string());
}

int finish(Run& run, const std::string& command, Json report, int code) {
    report["config"] = run.config.to_json();
    std::string text = report.dump(2) + "\n";
    write_file(run, command + ".json", text);
    Manifest m{command, run.inputs, run.config, run.outputs, code};
    std::ofstream(fs::path(run.out_dir) / "manifest.json") << m.to_json().dump(2) << "\n";
    std::cout << text;
    return code;
}

Json certificate_json(const Certificate& c) {
    return Json{{"support_in_triangle", c.support_in_triangle},
                {"leading_is_power", c.leading_is_power},
                {"jacobian_one", c.jacobian_one}};
}

Json identities_json(const IdentityReport& r) {
    return Json{{"jacobian", r.jacobian}, {"F_q0", r.F_q0}, {"F_q1", r.F_q1},
                {"G_q0", r.G_q0},         {"G_q1", r.G_q1}, {"leading_term", r.leading_term}};
}

struct TransformInput {
    NormalizedPair N;
    Point p0, p1;
    TransformCase tag;
};

TransformInput transform_input(Run& run, const std::string& map_arg, const std::string& pair_arg,
                               const std::string& tag) {
    PolyMap M = map_from_json(load(run, map_arg));
    Json pair = load(run, pair_arg);
    return {normalize_keller(M), point_from_json(pair.at("p0")), point_from_json(pair.at("p1")), parse_case(tag)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kellerctl: Jacobian pair and Keller map toolkit"};
    app.require_subcommand(1);
    Run run;
    app.add_option("--config", run.config_path, "JSON config file");
    app.add_option("--out", run.out_dir, "Output directory");
    app.add_option("--seed", run.seed, "Random seed");

    std::string map_arg, pair_arg, constraint_arg, series_arg, majorant_arg, tag = "case1";
    std::string x0_arg = "0", xi0_arg = "1", xi1_arg = "-1";
    std::optional<int> ell, order, steps;
    int m = 2;
    std::vector<double> k0s{1}, k1s{1};
    std::function<int()> action;

    auto* normalize = app.add_subcommand("normalize", "Normalize a Keller pair");
    normalize->add_option("map", map_arg)->required();
    normalize->add_option("--ell", ell, "Force the exponent of the variable change");
    normalize->callback([&] {
        action = [&] {
            auto N = normalize_keller(map_from_json(load(run, map_arg)), ell);
            Json r{{"map", to_json(N.map)}, {"m", N.m}, {"ell", N.ell}, {"scale", to_json(N.scale)},
                   {"certificate", certificate_json(N.certificate)}};
            return finish(run, "normalize", r, N.certificate.all() ? kOk : kVerdict);
        };
    });

    auto* verify = app.add_subcommand("verify-keller", "Check that J(F, G) is a nonzero constant");
    verify->add_option("map", map_arg)->required();
    verify->callback([&] {
        action = [&] {
            PolyMap M = map_from_json(load(run, map_arg));
            auto v = is_keller(M);
            if (auto* k = std::get_if<Keller>(&v)) return finish(run, "verify-keller", {{"keller", true}, {"J", k->J.str()}}, kOk);
            const auto& n = std::get<NotKellerVerdict>(v);
            return finish(run, "verify-keller",
                          {{"keller", false}, {"J", M.jac().str()}, {"witness", n.witness.str()}}, kVerdict);
        };
    });

    auto* invert = app.add_subcommand("invert-series", "Formal reversion of a power series");
    invert->add_option("series", series_arg)->required();
    invert->add_option("--order", order);
    invert->callback([&] {
        action = [&] {
            YSeries F = series_from_json(load(run, series_arg));
            auto r = formal_inverse(F, order.value_or(run.config.trunc_order));
            Json coeffs = Json::array();
            for (const auto& c : r.coeffs) coeffs.push_back(c.str());
            return finish(run, "invert-series", {{"inverse", to_json(r.series())}, {"coeffs", coeffs}}, kOk);
        };
    });

    auto* majorant = app.add_subcommand("majorant-check", "Coefficient-wise dominance at x0");
    majorant->add_option("series", series_arg)->required();
    majorant->add_option("majorant", majorant_arg)->required();
    majorant->add_option("--x0", x0_arg);
    majorant->callback([&] {
        action = [&] {
            YSeries P = series_from_json(load(run, series_arg));
            Majorant Q = majorant_from_json(load(run, majorant_arg));
            auto v = dominates(P, Q, Scalar::parse(x0_arg));
            Json r{{"holds", v.holds}, {"checked_through", v.checked_through}, {"fail_index", nullptr},
                   {"majorant", Q.str()}};
            if (v.fail_index) r["fail_index"] = *v.fail_index;
            return finish(run, "majorant-check", r, v.holds ? kOk : kVerdict);
        };
    });

    auto* tcheck = app.add_subcommand("transform-check", "Build the coordinate transform and check its identities");
    tcheck->add_option("map", map_arg)->required();
    tcheck->add_option("pair", pair_arg)->required();
    tcheck->add_option("--case", tag);
    tcheck->add_option("--order", order);
    tcheck->callback([&] {
        action = [&] {
            auto in = transform_input(run, map_arg, pair_arg, tag);
            auto T = build_transform(in.N, in.p0, in.p1, in.tag, {run.config.seed, std::nullopt});
            auto NF = hat_normal_form(T);
            auto S = series_in_P(T, order.value_or(std::min(run.config.trunc_order, 8)));
            bool ok = T.identities.all() && S.round_trip && S.rebase_round_trip && S.derivative_identity;
            Json r{{"case", to_string(T.case_tag)},
                   {"m", T.m},
                   {"mbar", T.mbar},
                   {"beta0", T.beta0.str()},
                   {"beta1", T.beta1.str()},
                   {"beta2", T.beta2.str()},
                   {"beta3", T.beta3.str()},
                   {"u1", T.u1.str()},
                   {"identities", identities_json(T.identities)},
                   {"series", {{"round_trip", S.round_trip},
                               {"rebase_round_trip", S.rebase_round_trip},
                               {"derivative_identity", S.derivative_identity}}},
                   {"delta", T.delta},
                   {"S1", NF.S1},
                   {"eps", T.eps},
                   {"h", T.h}};
            return finish(run, "transform-check", r, ok ? kOk : kVerdict);
        };
    });

    auto* icheck = app.add_subcommand("integral-check", "Quadrature of Q along Y0 against 1/m");
    icheck->add_option("map", map_arg)->required();
    icheck->add_option("pair", pair_arg)->required();
    icheck->add_option("--case", tag);
    icheck->callback([&] {
        action = [&] {
            auto in = transform_input(run, map_arg, pair_arg, tag);
            auto T = build_transform(in.N, in.p0, in.p1, in.tag, {run.config.seed, std::nullopt});
            Y0Options yo;
            yo.tol = run.config.newton_tol;
            auto I = integral_check(T, run.config.quad_nodes, yo);
            bool ok = I.abs_error <= 10 * T.eps;
            Json r{{"case", to_string(T.case_tag)}, {"value", to_json(I.value)}, {"target", to_string(I.target)},
                   {"abs_error", I.abs_error},      {"eps", T.eps},             {"C", I.C},
                   {"nodes", I.nodes},              {"endpoint_gap", nullptr},  {"within_10_eps", ok}};
            if (I.endpoint_gap) r["endpoint_gap"] = *I.endpoint_gap;
            return finish(run, "integral-check", r, ok ? kOk : kVerdict);
        };
    });

    auto* search = app.add_subcommand("witness-search", "Multistart search for witness pairs on a slice");
    search->add_option("map", map_arg)->required();
    search->add_option("--xi0", xi0_arg);
    search->add_option("--xi1", xi1_arg);
    search->callback([&] {
        action = [&] {
            PolyMap M = map_from_json(load(run, map_arg));
            auto ws = find_witnesses(M, Scalar::parse(xi0_arg).to_complex(), Scalar::parse(xi1_arg).to_complex(),
                                     run.config.search());
            Json pairs = Json::array();
            for (const auto& w : ws) pairs.push_back(to_json(w));
            return finish(run, "witness-search", {{"count", ws.size()}, {"pairs", pairs}}, kOk);
        };
    });

    auto* cont = app.add_subcommand("continue-witness", "Iterate constrained steps monotonically");
    cont->add_option("map", map_arg)->required();
    cont->add_option("pair", pair_arg)->required();
    cont->add_option("constraint", constraint_arg)->required();
    cont->add_option("--steps", steps);
    cont->callback([&] {
        action = [&] {
            PolyMap M = map_from_json(load(run, map_arg));
            WitnessPair w = pair_from_json(M, load(run, pair_arg));
            StepConstraint c = constraint_from_json(load(run, constraint_arg));
            auto T = continue_witness(M, w, c, steps.value_or(20), run.config.step());
            write_file(run, "trajectory.csv", trajectory_csv(T));
            return finish(run, "continue-witness", to_json(T), T.monotone ? kOk : kVerdict);
        };
    });

    auto* at = app.add_subcommand("atlas", "Sample witness pairs on modulus cells");
    at->add_option("map", map_arg)->required();
    at->add_option("--k0", k0s)->delimiter(',');
    at->add_option("--k1", k1s)->delimiter(',');
    at->callback([&] {
        action = [&] {
            PolyMap M = map_from_json(load(run, map_arg));
            AtlasOptions opt;
            opt.search.newton_tol = run.config.newton_tol;
            opt.search.residual_tol = run.config.residual_tol;
            opt.search.dedupe = run.config.dedupe;
            auto A = atlas(M, k0s, k1s, opt);
            write_file(run, "atlas.csv", atlas_csv(A));
            return finish(run, "atlas", to_json(A), kOk);
        };
    });

    auto* tau = app.add_subcommand("tau-gap", "Check |x_t + y_t| < tau h^(m/(m+1))");
    tau->add_option("pair", pair_arg)->required();
    tau->add_option("--m", m);
    tau->callback([&] {
        action = [&] {
            Json j = load(run, pair_arg);
            WitnessPair w{cpoint_from_json(j.at("p0")), cpoint_from_json(j.at("p1")), 0, 0};
            auto v = tau_gap_check(w, m, run.config.tau.value_or(0.1), run.config.S0.value_or(0));
            Json derived = Json::object();
            for (const auto& [side, ok] : v.derived) derived[side] = ok;
            Json r{{"status", v.str()}, {"h", v.h}, {"threshold", v.threshold}, {"violations", v.violations},
                   {"derived", derived}};
            return finish(run, "tau-gap", r, v.status == TauGapVerdict::fails ? kVerdict : kOk);
        };
    });

    auto* step = app.add_subcommand("step", "One constrained perturbation of a witness pair");
    step->add_option("map", map_arg)->required();
    step->add_option("pair", pair_arg)->required();
    step->add_option("constraint", constraint_arg)->required();
    step->callback([&] {
        action = [&] {
            PolyMap M = map_from_json(load(run, map_arg));
            WitnessPair w = pair_from_json(M, load(run, pair_arg));
            StepConstraint c = constraint_from_json(load(run, constraint_arg));
            try {
                return finish(run, "step", to_json(witness_step(M, w, c, run.config.step())), kOk);
            } catch (const NoStepFound& e) {
                return finish(run, "step", {{"error", "NoStepFound"}, {"message", e.what()}}, kVerdict);
            }
        };
    });

    auto* self = app.add_subcommand("selftest", "Run the bundled invariant suite");
    self->callback([&] {
        action = [&] {
            Json checks = Json::array();
            bool all = true;
            for (const auto& c : run_selftest()) {
                checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
                all = all && c.ok;
            }
            return finish(run, "selftest", {{"passed", all}, {"checks", checks}}, all ? kOk : kVerdict);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kError;
    }
    try {
        if (!run.config_path.empty()) run.config.merge(load(run, run.config_path));
        run.config.merge_env();
        if (run.seed) run.config.seed = *run.seed;
        run.config.validate();
        return action();
    } catch (const NotKeller& e) {
        return finish(run, app.get_subcommands().front()->get_name(), {{"error", "NotKeller"}, {"message", e.what()}}, kVerdict);
    } catch (const std::exception& e) {
        std::cerr << "kellerctl: " << e.what() << "\n";
        return kError;
    }
}
