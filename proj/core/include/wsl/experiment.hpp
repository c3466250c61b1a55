#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsl/geometry.hpp"

namespace wsl::runner {

enum class Kind {
    check_geometry,
    sweep_resolvent,
    scan_resonances,
    verify_resfree,
    propagate,
    verify_identities,
};

Kind kind_from_string(const std::string& s);
std::string to_string(Kind k);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Kind kind = Kind::check_geometry;
    std::string canonical_json; // reparsed + dumped, hashed into the manifest
    geom::WaveguideDomain domain;
    std::string domain_name;

    double h = 0.1;
    double L = 8.0;
    double delta = 1.0;
    int modes = 16;
    unsigned seed = 42;
    std::string out_dir = "wsl-out";

    std::vector<double> E_values;   // sweep
    std::vector<double> eps_values; // sweep
    std::optional<std::string> expect_class;

    double scan_lo = 1.1, scan_hi = 20.0; // scan
    int scan_steps = 200;
    bool scan_persistence = true;

    std::vector<double> resfree_calibrate{30.0, 60.0};
    std::vector<double> resfree_verify{45.0, 90.0};
    int resfree_samples = 20;

    double T = 50.0, cfl = 0.6, sample_dt = 0.5; // propagate
    double bump_x = 4.0, bump_y = 0.0, bump_r = 1.0;
    double chi_x0 = 4.0, chi_r_in = 4.0, chi_r_out = 8.0;
    std::optional<std::pair<double, double>> fit_window;
    std::optional<std::pair<double, double>> expect_exponent; // [lo, hi]
    bool dump_final = false; // write the final wave snapshot as CSV

    double ident_E = 2.0, ident_eps = 0.5, ident_R = 3.0; // identities
    int poincare_trials = 200;
    std::vector<double> poincare_deltas{1.0};
    double factor_min = 1.5;
};

/// Parses and validates a config document; error messages carry the JSON
/// path (and line/column for syntax errors).
ExperimentConfig parse_config(const std::string& json_text);

struct RunOutcome {
    int exit_code = 0; // 0 ok, 1 usage error, 2 numerical assertion failed
    std::string summary;
    std::vector<std::string> files;
};

RunOutcome run(const ExperimentConfig& cfg, int jobs = 1,
               const std::optional<std::string>& out_override = {});

/// Consolidates run_summary.json files found under dir into one report.
std::string report(const std::string& dir);

} // namespace wsl::runner
