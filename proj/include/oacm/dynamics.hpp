#pragma once

#include <optional>

#include "oacm/model_ops.hpp"
#include "oacm/noise.hpp"

namespace oacm {

enum class Scheme { RK3, HeunStratonovich, EulerMaruyamaIto };
enum class Mode { Deterministic, SALT, LASALT, SAM };

struct StepperConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::RK3;
    TruncationConfig trunc;
    Mode mode = Mode::Deterministic;
    bool abort_on_member_blowup = false;
};

struct Ensemble {
    std::vector<StateVector> members;
    std::vector<double> frozen_at;     // NaN while a member is active
    std::vector<uint8_t> error_flag;   // set when a member was frozen by blow-up
    double t = 0.0;
    uint64_t step = 0;
    BrownianDriver driver;

    explicit Ensemble(int N = 0, const Grid& g = Grid{})
        : members(N, StateVector(g)),
          frozen_at(N, std::numeric_limits<double>::quiet_NaN()),
          error_flag(N, 0) {}

    int size() const { return static_cast<int>(members.size()); }
    bool frozen(int k) const { return !std::isnan(frozen_at[k]); }
    int frozen_count() const {
        int c = 0;
        for (int k = 0; k < size(); ++k) c += frozen(k);
        return c;
    }
    // empirical mean of the atmospheric velocity, fixed summation order
    VectorField mean_u_a() const;
    StateVector mean_state() const;
    AtmosPair mean_atmos() const;
};

// One SSP-RK3 step of the truncated deterministic system; the ocean is
// re-projected every stage. Throws BlowupError on non-finite output.
StateVector step_deterministic(const StateVector& psi, const PhysParams& params,
                               const StepperConfig& cfg);

// Drift of one SALT member: the whole bracket (transport + rotation +
// coupling-to-mean + dissipation) scaled by the cutoff; Ito variant adds the
// correction drift (also inside the cutoff factor).
StateVector salt_drift(const StateVector& psi, const VectorField& mean_u_a,
                       const PhysParams& params, const NoiseBasis& basis,
                       const StepperConfig& cfg, StochasticMode smode);

// One member step on an explicit increment vector (dW[i] ~ N(0,dt) for the
// cfg.dt step); Heun for Stratonovich, Euler-Maruyama + correction for Ito.
StateVector step_salt_member(const StateVector& psi, const VectorField& mean_u_a,
                             const PhysParams& params, const NoiseBasis& basis,
                             const StepperConfig& cfg, const std::vector<double>& dW);

// Advance the whole ensemble one step; the empirical mean feeding the
// coupling is computed once at the step boundary. Frozen members are left
// untouched; a member that blows up is frozen and flagged (or the error is
// rethrown when cfg.abort_on_member_blowup is set). With an empty basis the
// members take the deterministic RK3 path.
void step_salt_ensemble(Ensemble& ens, const PhysParams& params, const NoiseBasis& basis,
                        const StepperConfig& cfg);

// Closed expectation drift: deterministic tendency plus the expected-drift
// Ito term on the atmospheric pair.
StateVector lasalt_expectation_drift(const StateVector& psi_hat, const PhysParams& params,
                                     const NoiseBasis& basis, const StepperConfig& cfg);

// Drift of a member's atmospheric pair given the expectation state: affine
// in the member for a fixed expectation trajectory.
AtmosPair lasalt_member_drift(const AtmosPair& psi_a, const StateVector& expectation,
                              const PhysParams& params);

// One LA-SALT member step (Heun, or Euler-Maruyama + correction) using the
// expectation at the start and end of the step.
AtmosPair step_lasalt_member(const AtmosPair& psi_a, const StateVector& exp_t,
                             const StateVector& exp_next, const PhysParams& params,
                             const NoiseBasis& basis, const StepperConfig& cfg,
                             const std::vector<double>& dW);

// Advance the closed expectation system and every member; members never feed
// back into the drift. The ensemble's ocean is the expectation's ocean.
void step_lasalt(StateVector& expectation, Ensemble& ens, const PhysParams& params,
                 const NoiseBasis& basis, const StepperConfig& cfg);

AtmosPair fluctuation(const AtmosPair& member_psi_a, const AtmosPair& expectation_psi_a);

struct CompressibleState {
    VectorField u;
    ScalarField D;
    ScalarField theta;
    double kappa = 1.0;
    double alpha = 1.5;
    double Ro = 1.0;
    CoriolisField coriolis;
};

// One step of the compressible single-layer atmosphere: RK3 when the basis
// is empty, Heun otherwise; D and D*theta advance in conservation form.
// Throws PositivityError when D or theta leaves (0, inf).
CompressibleState step_sam_compressible(const CompressibleState& state, const NoiseBasis& basis,
                                        const StepperConfig& cfg,
                                        const std::vector<double>& dW = {});

// True when the H^s norm has reached the truncation radius (closed threshold).
bool detect_stop(const StateVector& psi, const TruncationConfig& cfg);

}  // namespace oacm
