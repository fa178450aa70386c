#ifndef QTF_CONFIG_HPP
#define QTF_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qtf/dynamics.hpp"
#include "qtf/equilibrium.hpp"
#include "qtf/grid.hpp"

namespace qtf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` run configuration; '#' starts a comment, every key
// has a default, unknown keys are a hard error.
struct RunConfig {
    // grid
    int nx = 32, ny = 32, nz = 0;  // nz = 0 selects the 2D slab mode
    double h = 0.03125;
    std::string bc = "box";  // box | periodic

    // potential and material constants
    double a = -1.0, b = 0.0, c = 1.0;
    double epsilon = 0.1, nu = 1.0, gamma = 1.0;

    // stepping
    double dt = 1e-3, t_end = 1.0;
    std::string stretching = "full";        // full | antisym
    std::string bulk = "f";                 // f | f_pz
    std::string splitting = "semi_implicit";  // semi_implicit | convex_split
    double projection_tol = 1e-10;
    bool project_q = false;

    // initial data
    std::string q_init = "random";  // random | zero | uniaxial
    double q_amplitude = 1.0;       // random Q scaled so max |Q| equals this
    double q_uniaxial_s = 1.0;
    std::string q_uniaxial_axis = "z";  // x | y | z
    uint64_t seed = 1;

    // outputs
    int snapshots = 10;  // snapshot count over the run
    std::string out = "out";

    // convergence thresholds (relax gate and analyze verdicts)
    double threshold_u_norm = 1e-8;
    double threshold_residual = 1e-6;
    double threshold_cauchy = 1e-8;
    double threshold_energy_gap_rel = 1e-10;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

Grid config_grid(const RunConfig& cfg);
PotentialParams config_params(const RunConfig& cfg);
StepperConfig config_stepper(const RunConfig& cfg);
Thresholds config_thresholds(const RunConfig& cfg);

// u = 0, p = 0; Q per q_init. Random Q draws i.i.d. entries uniform in
// [-0.5, 0.5] from SplitMix64(seed) in cell order, symmetrizes,
// trace-projects, then scales so the max Frobenius norm is q_amplitude.
SimState config_initial_state(const RunConfig& cfg);

}  // namespace qtf

#endif
