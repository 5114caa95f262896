#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqg/grid.hpp"
#include "sqg/kernel.hpp"

namespace sqg {

enum class InitKind { gaussian, two_bump, expression };

/// gaussian:   amplitude * exp(-|x - center|^2 / width^2)
/// two_bump:   the gaussian above plus amplitude2 * exp(-|x - center2|^2 / width^2)
/// expression: free-form formula in x, y, r (see Expression)
struct InitSpec {
    InitKind kind = InitKind::gaussian;
    double amplitude = 1e-2;
    double width = 1.0;
    Vec2 center{0.0, 0.0};
    double amplitude2 = 0.0;
    Vec2 center2{0.0, 0.0};
    std::string expression;
};

/// Pointwise value of the initial datum on R^2.
double initial_value(const InitSpec& init, Vec2 x);

struct SolverConfig {
    double alpha = 1.0;
    int N = 256;
    double L = 40.0;
    double cfl = 0.5;
    double max_dt = 0.1;
    double t_end = 50.0;
    std::vector<double> checkpoints;  // ascending, in (0, t_end]; t_end is always last
    InitSpec init;
    bool dealias = true;
    bool linear_only = false;
};

/// Throws DomainError when the config violates an invariant (alpha outside
/// (0, 2], width > L/8, negative amplitude for gaussian data, unsorted
/// checkpoints, ...).
void validate(const SolverConfig& config);

/// count log-spaced times from t_first to t_end inclusive.
std::vector<double> log_checkpoints(double t_first, double t_end, int count);

struct InitialData {
    Field theta;
    double mass = 0.0;  // grid quadrature of theta0
};

InitialData make_initial(const SolverConfig& config);

/// Grid quadrature sum(theta) dx^2.
double grid_mass(const Field& f);

struct SolverState {
    SolverConfig config;
    Grid grid;
    double t = 0.0;
    long steps = 0;
    SpectralField theta_hat;

    /// int 2 ||(-Delta)^{alpha/4} theta||^2 dt accumulated since the last reset.
    double dissipation = 0.0;

    // Filled by refresh(): |k|^alpha, the nonlinear term at the current state
    // and max |u| (zero in linear-only mode).
    std::vector<double> symbol;
    SpectralField nonlinear;
    double max_speed = 0.0;

    // exp(-|k|^alpha h) and exp(-|k|^alpha h/2) for the last step size h.
    double cached_h = -1.0;
    std::vector<double> decay_full;
    std::vector<double> decay_half;
};

SolverState make_state(const SolverConfig& config, const Field& theta, double t);

/// Re-derives theta_hat from its physical samples and refreshes the cached
/// nonlinear term, so a run resumed from a snapshot continues bit-identically.
Field sync_physical(SolverState& state);

/// -div(theta u) with u = (-R2 theta, R1 theta), products formed in physical
/// space. With dealias on, input and output are 2/3-truncated. max_speed, if
/// given, receives max |u| over the grid.
SpectralField nonlinear_term(const SpectralField& theta_hat, bool dealias,
                             double* max_speed = nullptr);

/// cfl dx / max(|u|_inf, 1e-12), capped by max_dt and by t_next - t.
double cfl_dt(const SolverState& state, double t_next);

/// One integrating-factor RK4 step. Throws NumericalError on non-finite data.
void step(SolverState& state, double dt);

/// Steps until state.t == t_target exactly, then syncs through physical space
/// and returns the physical samples. Persist these (not inverse(theta_hat)):
/// make_state on them reproduces the state bit for bit.
Field advance_to(SolverState& state, double t_target);

/// exp(-|k|^alpha t) applied to theta0.
Field linear_evolve(const Field& theta0, double alpha, double t);

/// L2 norm of (next - prev)/(2h) + (-Delta)^{alpha/2} mid + div(mid u(mid)).
double pde_residual(const Field& prev, const Field& mid, const Field& next, double h,
                    double alpha, bool nonlinear, bool dealias = true);

}  // namespace sqg
