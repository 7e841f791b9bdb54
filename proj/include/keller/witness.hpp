#pragma once

#include "keller/perturb.hpp"

#include <optional>
#include <string>
#include <vector>

namespace keller {

struct SearchOptions {
    /// Start points per axis of the complex grid.
    int grid = 8;
    double box = 3;
    int max_iter = 50;
    double newton_tol = 1e-12;
    double residual_tol = 1e-10;
    double dedupe = 1e-8;
};

/// Solutions (y0, y1) of sigma(xi0, y0) = sigma(xi1, y1) with p0 != p1, sorted.
std::vector<WitnessPair> find_witnesses(const PolyMap& M, Complex xi0, Complex xi1, const SearchOptions& opt = {});

enum class MetricKind { h, d, script_d };

std::string to_string(MetricKind k);
MetricKind parse_metric(const std::string& text);

struct MetricSpec {
    MetricKind kind = MetricKind::h;
    std::optional<Kappas> kappas;
    std::pair<Complex, Complex> xi{};
    double tau = 0.1;
    double S0 = 0;
    /// Throws PreconditionError for an invalid band or a d metric without kappas.
    void validate() const;
};

double metric(const WitnessPair& w, const MetricSpec& spec);

/// Step constraint whose objective improves the metric; h is not supported.
StepConstraint objective_constraint(const MetricSpec& spec);

struct Trajectory {
    std::vector<WitnessPair> pairs;
    std::vector<double> values;
    std::vector<std::string> ansatz;
    std::optional<std::string> stall;
    bool monotone = true;
};

Trajectory continue_witness(const PolyMap& M, const WitnessPair& start, const StepConstraint& constraint,
                            int max_steps, const StepOptions& opt = {});

struct AtlasCell {
    double k0 = 0, k1 = 0;
    std::vector<WitnessPair> samples;
    /// Largest |y1| among the samples; a lower bound on the true supremum.
    std::optional<double> gamma_est;
};

struct AtlasComparison {
    double k0 = 0, k1_lo = 0, k1_hi = 0;
    double gamma_lo = 0, gamma_hi = 0;
    bool increasing = false;
};

struct WitnessAtlas {
    std::vector<AtlasCell> cells;
    std::vector<AtlasComparison> comparisons;
};

struct AtlasOptions {
    int phases = 8;
    SearchOptions search{4, 3};
};

WitnessAtlas atlas(const PolyMap& M, const std::vector<double>& k0s, const std::vector<double>& k1s,
                   const AtlasOptions& opt = {});

struct TauGapVerdict {
    enum Status { holds, fails, not_applicable } status = not_applicable;
    double h = 0;
    double threshold = 0;
    /// Sides violating the main inequalities, "p0" or "p1".
    std::vector<std::string> violations;
    /// Secondary check per side where h = max(|x_t|, |y_t|); empty when it does not apply.
    std::vector<std::pair<std::string, bool>> derived;
    std::string str() const;
};

TauGapVerdict tau_gap_check(const WitnessPair& w, int m, double tau, double S0);

} // namespace keller
