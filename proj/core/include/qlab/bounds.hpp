#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qlab/weak.hpp"

namespace qlab {

struct Outcome {
    std::string label;
    std::optional<double> value;
    double probability;
};

struct DiscreteDistribution {
    std::vector<Outcome> outcomes;

    static DiscreteDistribution from_probs(const std::vector<double>& ps);
    static DiscreteDistribution from_values(const std::vector<std::pair<double, double>>& vp);
    void validate() const;  // p >= 0, sum == 1 within 1e-9
};

double variance(const DiscreteDistribution& dist);  // rejects nonnumeric outcomes
double shannon_entropy(const DiscreteDistribution& dist);             // bits
double shannon_entropy(const std::vector<double>& probs);
double renyi_entropy(const DiscreteDistribution& dist, double alpha);  // bits

double robertson_bound(double a_theta, double b_theta, const QubitState& state);
double robertson_lhs(double a_theta, double b_theta, const QubitState& state);  // dA * dB

double deutsch_bound(double a_theta, double b_theta);
double maassen_uffink_bound(double a_theta, double b_theta);

struct PovmNorms {
    double op_norm;      // largest singular value of Pi_i K^dag Pi_f K (Pi_i-sandwiched)
    double trace;        // Tr[Pi_i K^dag Pi_f K]
    double trace_bound;  // sqrt of trace
};

PovmNorms povm_norm_bound(const Matrix2c& pi_i, const Matrix2c& k, const Matrix2c& pi_f);

struct TaylorWeights {
    double p_j;  // (s/2pi)^{1/2} exp(-(s/2)(j^2+1))
    double g_j;  // (s/2) j
};

TaylorWeights taylor_weights(double j, double s);

struct WeakValue {
    std::complex<double> value;
    bool anomalous;  // |Re| > 1
};

// |i> eigenstate of i_axis with outcome i, |f> of f_axis with outcome f, A = a_axis
WeakValue weak_value(double i_axis, int i, double f_axis, int f, double a_axis);

double conditional_probability(int i, double f_axis, int f,
                               double readout_fidelity = 1.0);

// postselected record mean normalized by the projective postselection
// probability |<f|i>|^2; estimates Re A_wv
double weak_value_sampled(int i, int f, double a_axis, double f_axis, double s,
                          long shots, uint64_t seed);

struct EurBound {
    double bound;         // bits
    int argmin_i, argmin_f;
    double argmin_j;
    bool taylor_valid;    // |2 Re(g_j A_wv)| < 1 over the grid
};

EurBound eur_bound(double theta_a, double theta_f, double s, const ReadoutModel& readout);

// Maassen-Uffink style bound for the (projective z, weak-A-then-F) POVM pair,
// with bin-integrated weak elements
double tomamichel_bound(double theta_a, double theta_f, double s, const ReadoutModel& readout);

struct NoiseModel {
    double readout_fidelity = 1.0;
    double eta = 1.0;
    double t1 = 0.0;       // seconds; 0 = off
    double t_meas = 0.0;   // duration for t1 decay
};

struct EurSimResult {
    double h_i;        // bits
    double h_af;       // bits, 52 x 2 joint
    double h_af_norm;  // h_af minus the theta_a = theta_f = 0 reference
};

EurSimResult simulate_eur(double theta_rho, double theta_a, double theta_f, double s,
                          long shots, const ReadoutModel& readout, const NoiseModel& noise,
                          uint64_t seed, int jobs = 1);

struct BoundReport {
    double theta_rho, theta_a, theta_f, s;
    double h_i, h_af, h_af_norm;
    double trivial, deutsch, mu, tomamichel, weak_value_eur;
    int argmin_i, argmin_f;
    double argmin_j;
};

BoundReport bound_report(double theta_rho, double theta_a, double theta_f, double s,
                         long shots, const ReadoutModel& readout, const NoiseModel& noise,
                         uint64_t seed, int jobs = 1);

// analytic binned joint entropy of (j, f) for a pure preparation (ideal detector)
double analytic_h_af(double theta_rho, double theta_a, double theta_f, double s,
                     const ReadoutModel& readout);

}  // namespace qlab
