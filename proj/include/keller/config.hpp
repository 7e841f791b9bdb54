#pragma once

#include "keller/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace keller {

struct RunConfig {
    int trunc_order = 16;
    double newton_tol = 1e-12;
    double residual_tol = 1e-10;
    double dedupe = 1e-8;
    double eps = 1e-3;
    int quad_nodes = 64;
    double S_bound = 10;
    double delta1 = 0.25;
    std::uint64_t seed = 0;
    std::optional<Kappas> kappas;
    std::optional<std::pair<Complex, Complex>> xi;
    std::optional<double> tau;
    std::optional<double> S0;

    /// Throws PreconditionError on a nonpositive tolerance or an invalid band.
    void validate() const;
    Json to_json() const;
    /// Overlays the keys present in j.
    void merge(const Json& j);
    /// Overlays KELLER_<FIELD> variables, e.g. KELLER_EPS=1e-4.
    void merge_env();

    SearchOptions search() const;
    StepOptions step() const;
};

/// Hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

struct Manifest {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    RunConfig config;
    std::vector<std::string> outputs;
    int exit_code = 0;
    Json to_json() const;
};

} // namespace keller
