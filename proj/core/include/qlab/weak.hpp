#pragma once

#include <optional>
#include <vector>

#include "qlab/qubit.hpp"

namespace qlab {

// Convention used throughout: the record is scaled so eigenstate means are +-1
// and the unit-efficiency record pdf per eigenstate is N(+-1, 1/s). The Bloch
// update slope is then tanh(j*s + arctanh z0), which makes the Kraus and
// Bayesian updates agree exactly.
struct MeasurementStrength {
    double s;
    double eta = 1.0;  // quantum efficiency, widens the record to 1/(s*eta)

    MeasurementStrength(double s_, double eta_ = 1.0) : s(s_), eta(eta_) {
        if (!(s > 0)) throw std::domain_error("measurement strength must be positive");
        if (!(eta > 0) || eta > 1.0) throw std::domain_error("eta must be in (0, 1]");
    }
};

struct KrausOperator {
    double j;
    MeasurementStrength s;
    MeasurementAxis axis;
    Matrix2c matrix;
};

struct ReadoutModel {
    double v_gnd = +1.0;
    double v_ex = -1.0;
    int bins = 52;
    double j_min = -8.0;
    double j_max = +8.0;

    double bin_width() const { return (j_max - j_min) / bins; }
    double bin_center(int k) const { return j_min + (k + 0.5) * bin_width(); }
    int bin_index(double j) const;  // out-of-range clamps to edge bins
};

struct CalibrationRecord {
    double chi, kappa, nbar, eta;
    double gamma_m;   // 8 chi^2 nbar / kappa
    double stark;     // 2 chi nbar
    double inv_tau;   // 8 chi^2 nbar eta / kappa
    double S;         // 8 dt eta / tau, formulas verbatim (eta enters twice; flagged)
};

KrausOperator kraus_operator(double j, MeasurementStrength s, MeasurementAxis axis);

// Kraus state update for record j; also returns the record pdf Tr[K rho K^dag]
std::pair<QubitState, double> kraus_update(const QubitState& state, double j,
                                           MeasurementStrength s, MeasurementAxis axis);

struct WeakResult {
    double j;
    QubitState post;
};

WeakResult weak_measure(const QubitState& state, MeasurementStrength s, MeasurementAxis axis, Rng& rng);

double outcome_probability(const QubitState& state, MeasurementStrength s, MeasurementAxis axis,
                           double a, double b);

struct BayesResult {
    double z, x;
};

// z = tanh(j*s + arctanh z0); |z0| = 1 is a fixed point
BayesResult bayesian_update(double z0, double j, double s, double gamma = 0.0, double dt = 0.0);

CalibrationRecord calibration(double chi, double kappa, double nbar, double eta, double dt);
double nbar_from_inv_tau(double inv_tau, double chi, double kappa, double eta);

struct BinnedRecord {
    std::vector<double> probs;    // normalized histogram
    std::vector<long> counts;
    ReadoutModel model;
};

BinnedRecord bin_record(const std::vector<double>& samples, const ReadoutModel& model);

QubitState decay_channel(const QubitState& state, double t, double t1, double gamma_phi);

struct TomoRow {
    double j_center;
    long count;
    double pred_z, sampled_z;
    double pred_x, sampled_x;
    double sampled_y;
    bool underfilled;  // < 100 counts, flagged and not compared
};

std::vector<TomoRow> correlated_tomography(const QubitState& prep, long shots,
                                           MeasurementStrength s, MeasurementAxis axis,
                                           const ReadoutModel& model, uint64_t seed);

// two-Gaussian mixture pdf of the record for z-component `z_axis` along the axis
double record_pdf(double z_axis, double j, double s);

}  // namespace qlab
