#include "keller/config.hpp"

#include "keller/errors.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <gmp.h>
#include <gsl/gsl_version.h>
#include <iterator>
#include <Eigen/Core>

namespace keller {

void RunConfig::validate() const {
    if (trunc_order < 1) throw PreconditionError("trunc_order must be positive");
    for (double v : {newton_tol, residual_tol, dedupe, eps, S_bound, delta1})
        if (!(v > 0)) throw PreconditionError("tolerances and bounds must be positive");
    if (quad_nodes < 1) throw PreconditionError("quad_nodes must be positive");
    if (kappas) kappas->validate();
    if (tau && !(*tau > 0)) throw PreconditionError("tau must be positive");
}

Json RunConfig::to_json() const {
    Json j{{"trunc_order", trunc_order}, {"newton_tol", newton_tol}, {"residual_tol", residual_tol},
           {"dedupe", dedupe},           {"eps", eps},               {"quad_nodes", quad_nodes},
           {"S_bound", S_bound},         {"delta1", delta1},         {"seed", seed},
           {"kappas", nullptr},          {"xi", nullptr},            {"tau", nullptr},
           {"S0", nullptr}};
    if (kappas) j["kappas"] = kappas->k;
    if (xi) j["xi"] = Json::array({keller::to_json(xi->first), keller::to_json(xi->second)});
    if (tau) j["tau"] = *tau;
    if (S0) j["S0"] = *S0;
    return j;
}

void RunConfig::merge(const Json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "trunc_order") trunc_order = v.get<int>();
        else if (key == "newton_tol") newton_tol = v.get<double>();
        else if (key == "residual_tol") residual_tol = v.get<double>();
        else if (key == "dedupe") dedupe = v.get<double>();
        else if (key == "eps") eps = v.get<double>();
        else if (key == "quad_nodes") quad_nodes = v.get<int>();
        else if (key == "S_bound") S_bound = v.get<double>();
        else if (key == "delta1") delta1 = v.get<double>();
        else if (key == "seed") seed = v.get<std::uint64_t>();
        else if (key == "kappas") kappas = v.is_null() ? std::nullopt : std::optional(kappas_from_json(v));
        else if (key == "xi") {
            if (v.is_null()) xi.reset();
            else xi = std::make_pair(complex_from_json(v.at(0)), complex_from_json(v.at(1)));
        } else if (key == "tau") tau = v.is_null() ? std::nullopt : std::optional(v.get<double>());
        else if (key == "S0") S0 = v.is_null() ? std::nullopt : std::optional(v.get<double>());
        else throw ParseError("unknown config key '" + key + "'");
    }
}

void RunConfig::merge_env() {
    static const char* keys[] = {"trunc_order", "newton_tol", "residual_tol", "dedupe", "eps", "quad_nodes",
                                 "S_bound",     "delta1",     "seed",         "kappas", "xi",  "tau",
                                 "S0"};
    Json overlay = Json::object();
    for (const char* key : keys) {
        std::string name = "KELLER_";
        for (const char* p = key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
        const char* value = std::getenv(name.c_str());
        if (!value) continue;
        try {
            overlay[key] = Json::parse(value);
        } catch (const Json::parse_error&) {
            throw ParseError(name + " is not valid JSON: " + value);
        }
    }
    merge(overlay);
}

SearchOptions RunConfig::search() const {
    SearchOptions s;
    s.newton_tol = newton_tol;
    s.residual_tol = residual_tol;
    s.dedupe = dedupe;
    return s;
}

StepOptions RunConfig::step() const {
    StepOptions s;
    s.eps = eps;
    s.S_bound = S_bound;
    s.residual_tol = residual_tol;
    s.dedupe = dedupe;
    return s;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw DomainError("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

Json Manifest::to_json() const {
    Json in = Json::array();
    for (const auto& p : inputs) {
        std::ifstream f(p, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        in.push_back({{"path", p.string()}, {"sha256", f.is_open() ? sha256_hex(bytes) : std::string()}});
    }
    Json versions{{"kellerctl", "1.0.0"},
                  {"gmp", gmp_version},
                  {"gsl", GSL_VERSION},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"compiler", __VERSION__}};
    return Json{{"command", command}, {"inputs", in},         {"config", config.to_json()},
                {"versions", versions}, {"outputs", outputs}, {"exit_code", exit_code}};
}

} // namespace keller
