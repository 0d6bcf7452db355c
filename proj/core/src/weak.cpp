#include "qlab/weak.hpp"

#include <cmath>

namespace qlab {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;

double gauss_cdf(double x, double mean, double inv_var) {
    return 0.5 * std::erfc(-(x - mean) * std::sqrt(inv_var / 2.0));
}
}  // namespace

int ReadoutModel::bin_index(double j) const {
    int k = static_cast<int>(std::floor((j - j_min) / bin_width()));
    if (k < 0) k = 0;
    if (k >= bins) k = bins - 1;
    return k;
}

double record_pdf(double z_axis, double j, double s) {
    const double norm = std::sqrt(s / two_pi);
    const double gp = std::exp(-s * (j - 1) * (j - 1) / 2);
    const double gm = std::exp(-s * (j + 1) * (j + 1) / 2);
    return norm * (0.5 * (1 + z_axis) * gp + 0.5 * (1 - z_axis) * gm);
}

KrausOperator kraus_operator(double j, MeasurementStrength s, MeasurementAxis axis) {
    if (!std::isfinite(j)) throw std::invalid_argument("record value must be finite");
    // K_j = (s/2pi)^{1/4} exp(-s (jI - A)^2 / 4), diagonal in the axis eigenbasis
    const double pref = std::pow(s.s / two_pi, 0.25);
    const double kp = pref * std::exp(-s.s * (j - 1) * (j - 1) / 4);
    const double km = pref * std::exp(-s.s * (j + 1) * (j + 1) / 4);
    Vector2c vp = axis.eigvec(+1), vm = axis.eigvec(-1);
    Matrix2c k = kp * (vp * vp.adjoint()) + km * (vm * vm.adjoint());
    return KrausOperator{j, s, axis, k};
}

std::pair<QubitState, double> kraus_update(const QubitState& state, double j,
                                           MeasurementStrength s, MeasurementAxis axis) {
    Matrix2c k = kraus_operator(j, s, axis).matrix;
    Matrix2c num = k * state.matrix() * k.adjoint();
    const double p = num.trace().real();
    return {QubitState(Matrix2c(num / p)), p};
}

WeakResult weak_measure(const QubitState& state, MeasurementStrength s, MeasurementAxis axis, Rng& rng) {
    // branch weights are the axis-basis populations
    Vector2c vp = axis.eigvec(+1);
    const double w_plus = (vp.adjoint() * state.matrix() * vp).value().real();
    const double mean = (rng.uniform() < w_plus) ? +1.0 : -1.0;
    // record sigma is 1/sqrt(s*eta); backaction uses s (inefficiency widens the
    // record without adding backaction)
    const double j = mean + rng.normal() / std::sqrt(s.s * s.eta);
    QubitState post = kraus_update(state, j, MeasurementStrength(s.s), axis).first;
    return WeakResult{j, post};
}

double outcome_probability(const QubitState& state, MeasurementStrength s, MeasurementAxis axis,
                           double a, double b) {
    if (a > b) throw std::invalid_argument("bad outcome range");
    Vector2c vp = axis.eigvec(+1);
    const double w_plus = (vp.adjoint() * state.matrix() * vp).value().real();
    const double inv_var = s.s * s.eta;
    auto mass = [&](double mean) {
        return gauss_cdf(b, mean, inv_var) - gauss_cdf(a, mean, inv_var);
    };
    return w_plus * mass(+1.0) + (1.0 - w_plus) * mass(-1.0);
}

BayesResult bayesian_update(double z0, double j, double s, double gamma, double dt) {
    if (std::abs(z0) > 1.0) throw std::domain_error("z0 outside [-1, 1]");
    double z;
    if (std::abs(z0) == 1.0) {
        z = z0;  // eigenstate fixed point
    } else {
        z = std::tanh(j * s + std::atanh(z0));
    }
    const double x = std::sqrt(std::max(0.0, 1.0 - z * z)) * std::exp(-gamma * dt);
    return BayesResult{z, x};
}

CalibrationRecord calibration(double chi, double kappa, double nbar, double eta, double dt) {
    if (kappa == 0.0) throw std::domain_error("kappa must be nonzero");
    CalibrationRecord r;
    r.chi = chi;
    r.kappa = kappa;
    r.nbar = nbar;
    r.eta = eta;
    r.gamma_m = 8.0 * chi * chi * nbar / kappa;
    r.stark = 2.0 * chi * nbar;
    r.inv_tau = 8.0 * chi * chi * nbar * eta / kappa;
    r.S = 8.0 * dt * eta * r.inv_tau;
    return r;
}

double nbar_from_inv_tau(double inv_tau, double chi, double kappa, double eta) {
    return inv_tau * kappa / (8.0 * chi * chi * eta);
}

BinnedRecord bin_record(const std::vector<double>& samples, const ReadoutModel& model) {
    if (samples.empty()) throw std::invalid_argument("bin_record: empty sample list");
    BinnedRecord out;
    out.model = model;
    out.counts.assign(model.bins, 0);
    for (double j : samples) out.counts[model.bin_index(j)]++;
    out.probs.resize(model.bins);
    for (int k = 0; k < model.bins; ++k)
        out.probs[k] = static_cast<double>(out.counts[k]) / samples.size();
    return out;
}

QubitState decay_channel(const QubitState& state, double t, double t1, double gamma_phi) {
    if (!(t1 > 0)) throw std::domain_error("t1 must be positive");
    const double p = 1.0 - std::exp(-t / t1);
    const double sq = std::sqrt(1.0 - p);
    Matrix2c e0, e1;
    e0 << 1, 0, 0, sq;
    e1 << 0, std::sqrt(p), 0, 0;
    Matrix2c rho = e0 * state.matrix() * e0.adjoint() + e1 * state.matrix() * e1.adjoint();
    const double deph = std::exp(-gamma_phi * t);
    rho(0, 1) *= deph;
    rho(1, 0) *= deph;
    return QubitState(rho);
}

std::vector<TomoRow> correlated_tomography(const QubitState& prep, long shots,
                                           MeasurementStrength s, MeasurementAxis axis,
                                           const ReadoutModel& model, uint64_t seed) {
    if (shots < 10000) throw std::invalid_argument("correlated_tomography: need >= 1e4 shots");
    struct Acc {
        long n = 0;
        double z = 0, x = 0, y = 0;
        long nz = 0, nx = 0, ny = 0;
    };
    std::vector<Acc> acc(model.bins);
    for (long i = 0; i < shots; ++i) {
        Rng rng = Rng::derive(seed, static_cast<uint64_t>(i));
        WeakResult wr = weak_measure(prep, s, axis, rng);
        const int k = model.bin_index(wr.j);
        acc[k].n++;
        // tomography axis cycles per shot
        const int tomo = static_cast<int>(i % 3);
        if (tomo == 0) {
            auto res = projective_measure(wr.post, MeasurementAxis{0.0}, rng);
            acc[k].z += res.outcome;
            acc[k].nz++;
        } else if (tomo == 1) {
            auto res = projective_measure(wr.post, MeasurementAxis{1.5707963267948966}, rng);
            acc[k].x += res.outcome;
            acc[k].nx++;
        } else {
            // sy has no axis in the X-Z plane; measure via rotated frame
            QubitState r = rotate_y(wr.post, 0.0);
            Bloch b = r.bloch();
            Rng& rr = rng;
            const double py = 0.5 * (1 + b.y);
            acc[k].y += (rr.uniform() < py) ? +1 : -1;
            acc[k].ny++;
        }
    }
    Bloch b0 = prep.bloch();
    const double z0 = b0.z;
    std::vector<TomoRow> rows;
    for (int k = 0; k < model.bins; ++k) {
        if (acc[k].n == 0) continue;
        TomoRow row;
        row.j_center = model.bin_center(k);
        row.count = acc[k].n;
        BayesResult pred = bayesian_update(z0, row.j_center, s.s);
        row.pred_z = pred.z;
        row.pred_x = pred.x * (b0.x >= 0 ? 1.0 : -1.0) * (std::abs(b0.x) > 1e-12 ? 1.0 : 0.0);
        row.sampled_z = acc[k].nz ? acc[k].z / acc[k].nz : 0.0;
        row.sampled_x = acc[k].nx ? acc[k].x / acc[k].nx : 0.0;
        row.sampled_y = acc[k].ny ? acc[k].y / acc[k].ny : 0.0;
        row.underfilled = acc[k].n < 100;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qlab
