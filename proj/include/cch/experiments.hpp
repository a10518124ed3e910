// Experiment runners: continuity estimates, capacity bounds, and the
// borderline counterexample, each emitting a CSV table plus a JSON summary
// with fitted constants and pass/fail verdicts.  Constants appearing in
// the underlying inequalities are existential, so every verdict is a
// one-sided check: a single fitted constant must bound the whole family,
// and log-log slopes are compared one-sidedly against the predicted
// exponent.

#pragma once

#include <map>
#include <string>

#include "cch/cochain.hpp"
#include "cch/flat.hpp"
#include "cch/modulus.hpp"

#include <json.hpp>

namespace cch {

struct ExperimentConfig {
    std::string name;
    int n = 2;
    int m = 1;
    int extent = 48;   // lattice cells per axis
    double h = 1.0;
    double p = 3.0;
    double q = 4.0;
    double alpha = 1.0;
    double beta = 0.0;
    int levels = 4;    // annuli levels
    int J = 12;        // truncation depth
    double tol = 1e-8;
    unsigned seed = 1;
    std::map<std::string, double> params;  // experiment-specific knobs

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> fitted;  // constants, slopes, residuals
    std::vector<std::pair<std::string, bool>> verdicts;

    bool all_pass() const;
    void add_verdict(const std::string& label, bool pass);
    void write_csv(const std::string& path) const;
    nlohmann::json summary_json() const;
};

// Filling-volume Hoelder continuity on translated/scaled cycle families.
ExperimentReport run_holder(const ExperimentConfig& cfg);

// Flat-norm Hoelder continuity on fixtures with boundary.
ExperimentReport run_flat_holder(const ExperimentConfig& cfg);

// Pointwise continuity of functions with p-integrable upper gradients,
// checked across a grid refinement h -> h/2.
ExperimentReport run_morrey(const ExperimentConfig& cfg);

// Borderline exponent: the log log 1/|x| form diverges along shrinking
// offsets while |dw| stays (n-m)-integrable.
ExperimentReport run_sharp(const ExperimentConfig& cfg);

// Zero-capacity construction: convergent test-density energy against
// linearly growing pairings with the canonical fillings.
ExperimentReport run_zerocap(const ExperimentConfig& cfg);

// Annuli admissible densities and the ell^{1-p} modulus decay.
ExperimentReport run_hausdorff_cap(const ExperimentConfig& cfg);

// Positive capacity of a single cycle via translated filling families.
ExperimentReport run_caplower(const ExperimentConfig& cfg);

// Dispatch by name ("holder", "flat-holder", "morrey", "sharp", "zerocap",
// "hausdorff-cap", "caplower").
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace cch
