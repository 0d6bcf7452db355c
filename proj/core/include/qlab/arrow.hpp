#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

#include "qlab/weak.hpp"

namespace qlab {

// trajectory events; protocols live in the X-Z plane
struct EvPrepare {
    double x, z;
};
struct EvRotateY {
    double theta;
};
struct EvWeak {
    double j, s;
    double axis_theta = 0.0;
};
struct EvProject {
    double axis_theta;
    int outcome;
};

using TrajEvent = std::variant<EvPrepare, EvRotateY, EvWeak, EvProject>;

struct Trajectory {
    double x0 = 0.0, z0 = 0.0;
    std::vector<TrajEvent> events;
    double xf = 0.0, zf = 0.0;
};

struct Replay {
    double log_prob;  // ln P of the recorded outcomes
    double x, z;      // replayed final coordinates
};

Replay replay_trajectory(const Trajectory& traj);

// fills in (xf, zf) from a replay
Trajectory finalize_trajectory(Trajectory traj);

// forward and backward LOG densities; P_B is the forward probability of the
// actively reversed trajectory (coordinates negated, order reversed, record
// signs kept, rotations negated)
std::pair<double, double> forward_backward_probability(const Trajectory& traj);

double log_ratio_q(const Trajectory& traj);  // +inf sentinel on absolute irreversibility

Trajectory reverse_trajectory(const Trajectory& traj);

enum class Feedback { COF, ACOF };

struct FeedbackEnsemble {
    std::vector<double> qs;          // accepted-trajectory Q values
    double acceptance;
    std::vector<double> theta_app;   // accepted angles
    std::vector<double> records;     // accepted j
};

FeedbackEnsemble run_feedback_ensemble(Feedback protocol, long n, double s, double window,
                                       uint64_t seed, int jobs = 1);

// single weak event trajectories with the prior sampled projectively onto the
// z eigenbasis (the exact two-Gaussian model); Q = 2 s j i
std::vector<double> eigenstate_q_ensemble(double x0, double z0, long n, double s,
                                          uint64_t seed, int jobs = 1);

struct FtBin {
    double q_center;
    double log_ratio;
    double expected;  // = q_center
    double sigma;
    long n_pos, n_neg;
};

struct FtCheck {
    std::vector<FtBin> bins;
    double slope;       // weighted LSQ through the origin
    double slope_err;
};

FtCheck detailed_ft_check(const std::vector<double>& qs, double bin_width);

struct IftResult {
    double mean_exp_neg_q;
    double jackknife_err;
    double mean_q;
    bool absolute_irreversibility;  // mean e^{-Q} below 1 beyond error
};

IftResult integral_ft_and_second_law(const std::vector<double>& qs);

// ---- classical two-state stochastic thermodynamics ----

struct ClassicalChain {
    std::vector<double> energies;              // E_m
    std::vector<std::vector<double>> rates;    // H[m_to][m_from], generator columns sum to 0
    double temperature = 1.0;

    void validate() const;
    bool detailed_balance(double tol = 1e-10) const;
    std::vector<double> equilibrium() const;   // Boltzmann
};

struct Jump {
    double time;
    int from, to;
};

struct ThermoRecord {
    double dE = 0.0, W = 0.0, Q_heat = 0.0;
    double dS = 0.0, dS_r = 0.0, dS_i = 0.0;
};

struct ClassicalTrajectory {
    int m0;
    std::vector<Jump> jumps;
    int mf;
    double t_final;
};

using DriveSchedule = std::function<std::vector<double>(double t)>;  // energies at time t

std::pair<ClassicalTrajectory, ThermoRecord> classical_simulate(const ClassicalChain& chain,
                                                                const DriveSchedule& drive,
                                                                double t_final, Rng& rng);

ThermoRecord classical_entropy_production(const ClassicalTrajectory& traj,
                                          const ClassicalChain& chain);

// discrete-time driven two-state chain with exhaustive path enumeration:
// start in equilibrium at protocol step 0; each step drives the energies then
// thermalizes through a detailed-balance transition matrix
struct DiscreteChainResult {
    double total_prob;                         // sum of P_F over all paths
    std::vector<std::pair<double, double>> ft_pairs;  // (sigma, ln[P_F(sigma)/P_B(-sigma)])
    double jarzynski;                          // <e^{-beta W}> e^{+beta dF}
};

DiscreteChainResult enumerate_discrete_chain(const std::vector<std::array<double, 2>>& energy_protocol,
                                             double beta, int n_steps);

}  // namespace qlab
