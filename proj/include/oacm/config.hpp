#pragma once

#include <string>

#include "oacm/dynamics.hpp"

namespace oacm {

// Full run description; every physical constant of the implemented equations
// is settable here. Parsed from a "key = value" text document (see README
// for the schema and defaults).
struct RunConfig {
    // grid
    int n = 64;
    double L = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;
    // run
    Mode mode = Mode::Deterministic;
    Scheme scheme = Scheme::RK3;
    bool scheme_explicit = false;  // true when the document named a scheme
    double dt = 1e-3;
    double T = 1.0;
    double output_interval = 0.1;
    int members = 1;
    uint64_t seed = 0;
    // physics
    double Ro_a = 1.0, Ro_o = 1.0;
    double Re_a = std::numeric_limits<double>::infinity();
    double Re_o = std::numeric_limits<double>::infinity();
    double Pe_a = std::numeric_limits<double>::infinity();
    double Pe_o = std::numeric_limits<double>::infinity();
    double gamma = 0.0, sigma = 0.0;
    double f0 = 1.0;
    // truncation
    double R_cut = 1e6, delta = 1.0;
    int s = 2;
    // noise
    int noise_M = 0;
    double noise_amplitude = 0.05;
    double noise_decay = 2.0;
    double noise_sign = 1.0;
    bool noise_solenoidal = false;
    // material loop
    double loop_cx = std::numbers::pi, loop_cy = std::numbers::pi;
    double loop_radius = 1.0;
    int loop_K = 256;
    // initial data
    int init_kmax = 4;
    double init_amplitude = 0.1;
    // compressible model
    double sam_kappa = 1.0;
    double sam_alpha = 1.5;
    double sam_theta0 = 1.0;
    double sam_D_perturb = 0.2;
    // output / behavior
    std::string output_dir = "out";
    bool snapshots = true;
    bool strict_signs = false;
    bool abort_on_blowup = false;

    Grid grid() const { return Grid{n, L, dealias_fraction}; }
    PhysParams phys_params() const;
    TruncationConfig trunc() const { return TruncationConfig{R_cut, delta, s}; }
    StepperConfig stepper() const;
    std::string to_text() const;  // resolved document, parseable back
};

// Parse and validate; throws ConfigError whose message lists every violation
// (one per line), not just the first.
RunConfig parse_config(const std::string& text);

const char* mode_name(Mode m);
const char* scheme_name(Scheme s);

}  // namespace oacm
