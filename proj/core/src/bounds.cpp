#include "qlab/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qlab/parallel.hpp"

namespace qlab {

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double ln2 = 0.69314718055994530941723212145818;

double log2_safe(double p) { return std::log2(p); }

double gauss_mass(double a, double b, double mean, double s) {
    // integral of sqrt(s/2pi) exp(-s (j-mean)^2 / 2) over [a, b]
    const double c = std::sqrt(s / 2.0);
    return 0.5 * (std::erf(c * (b - mean)) - std::erf(c * (a - mean)));
}
}  // namespace

DiscreteDistribution DiscreteDistribution::from_probs(const std::vector<double>& ps) {
    DiscreteDistribution d;
    for (size_t k = 0; k < ps.size(); ++k)
        d.outcomes.push_back({std::to_string(k), std::nullopt, ps[k]});
    d.validate();
    return d;
}

DiscreteDistribution DiscreteDistribution::from_values(
    const std::vector<std::pair<double, double>>& vp) {
    DiscreteDistribution d;
    for (auto& [v, p] : vp) d.outcomes.push_back({std::to_string(v), v, p});
    d.validate();
    return d;
}

void DiscreteDistribution::validate() const {
    double sum = 0.0;
    for (auto& o : outcomes) {
        if (o.probability < 0) throw std::domain_error("negative probability");
        sum += o.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("probabilities do not sum to 1");
}

double variance(const DiscreteDistribution& dist) {
    double mean = 0.0;
    for (auto& o : dist.outcomes) {
        if (!o.value)
            throw std::domain_error("outcome '" + o.label + "' cannot be quantified with variance");
        mean += o.probability * *o.value;
    }
    double var = 0.0;
    for (auto& o : dist.outcomes) var += o.probability * (*o.value - mean) * (*o.value - mean);
    return var;
}

double shannon_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * log2_safe(p);
    return h;
}

double shannon_entropy(const DiscreteDistribution& dist) {
    double h = 0.0;
    for (auto& o : dist.outcomes)
        if (o.probability > 0.0) h -= o.probability * log2_safe(o.probability);
    return h;
}

double renyi_entropy(const DiscreteDistribution& dist, double alpha) {
    if (!(alpha > 0)) throw std::domain_error("Renyi order must be positive");
    if (alpha == 1.0) throw std::domain_error("Renyi order 1 is the Shannon limit");
    double sum = 0.0;
    for (auto& o : dist.outcomes)
        if (o.probability > 0.0) sum += std::pow(o.probability, alpha);
    return std::log2(sum) / (1.0 - alpha);
}

double robertson_bound(double a_theta, double b_theta, const QubitState& state) {
    Matrix2c a = pauli_axis_operator(a_theta), b = pauli_axis_operator(b_theta);
    Matrix2c comm = a * b - b * a;
    return 0.5 * std::abs((state.matrix() * comm).trace());
}

double robertson_lhs(double a_theta, double b_theta, const QubitState& state) {
    auto dev = [&](const Matrix2c& op) {
        const double m = (state.matrix() * op).trace().real();
        const double m2 = (state.matrix() * op * op).trace().real();
        return std::sqrt(std::max(0.0, m2 - m * m));
    };
    return dev(pauli_axis_operator(a_theta)) * dev(pauli_axis_operator(b_theta));
}

double deutsch_bound(double a_theta, double b_theta) {
    double best = std::numeric_limits<double>::infinity();
    for (int a : {+1, -1})
        for (int b : {+1, -1}) {
            const double ov =
                std::abs((MeasurementAxis{a_theta}.eigvec(a).adjoint() *
                          MeasurementAxis{b_theta}.eigvec(b))
                             .value());
            best = std::min(best, -2.0 * std::log2((1.0 + ov) / 2.0));
        }
    return best;
}

double maassen_uffink_bound(double a_theta, double b_theta) {
    double c = 0.0;
    for (int a : {+1, -1})
        for (int b : {+1, -1}) {
            const double ov =
                std::abs((MeasurementAxis{a_theta}.eigvec(a).adjoint() *
                          MeasurementAxis{b_theta}.eigvec(b))
                             .value());
            c = std::max(c, ov * ov);
        }
    return -std::log2(c);
}

PovmNorms povm_norm_bound(const Matrix2c& pi_i, const Matrix2c& k, const Matrix2c& pi_f) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> esi(pi_i), esf(pi_f);
    if (esi.eigenvalues().minCoeff() < -1e-12 || esf.eigenvalues().minCoeff() < -1e-12)
        throw std::domain_error("POVM elements must be PSD");
    Matrix2c m = pi_i * k.adjoint() * pi_f * k;
    Matrix2c sandwiched = m * pi_i;  // Pi K^dag Pi_f K Pi, Hermitian PSD
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(sandwiched, Eigen::EigenvaluesOnly);
    PovmNorms out;
    out.op_norm = std::max(0.0, es.eigenvalues().maxCoeff());
    out.trace = m.trace().real();
    out.trace_bound = std::sqrt(std::max(0.0, out.trace));
    return out;
}

TaylorWeights taylor_weights(double j, double s) {
    if (!(s > 0)) throw std::domain_error("s must be positive");
    TaylorWeights w;
    const double sqrt_pj = std::pow(s / two_pi, 0.25) * std::exp(-(s / 4.0) * (j * j + 1.0));
    w.p_j = sqrt_pj * sqrt_pj;
    w.g_j = 0.5 * s * j;
    return w;
}

WeakValue weak_value(double i_axis, int i, double f_axis, int f, double a_axis) {
    Vector2c iv = MeasurementAxis{i_axis}.eigvec(i);
    Vector2c fv = MeasurementAxis{f_axis}.eigvec(f);
    const std::complex<double> den = (fv.adjoint() * iv).value();
    if (std::abs(den) < 1e-14)
        throw std::domain_error("singular selection: orthogonal pre/post-selection");
    const std::complex<double> num = (fv.adjoint() * pauli_axis_operator(a_axis) * iv).value();
    WeakValue wv;
    wv.value = num / den;
    wv.anomalous = std::abs(wv.value.real()) > 1.0;
    return wv;
}

double conditional_probability(int i, double f_axis, int f, double readout_fidelity) {
    Vector2c iv = MeasurementAxis{0.0}.eigvec(i);
    Vector2c fv = MeasurementAxis{f_axis}.eigvec(f);
    const double p = std::norm((fv.adjoint() * iv).value());
    return readout_fidelity * p + (1.0 - readout_fidelity) * (1.0 - p);
}

double weak_value_sampled(int i, int f, double a_axis, double f_axis, double s,
                          long shots, uint64_t seed) {
    if (shots < 10000) throw std::invalid_argument("weak_value_sampled: need >= 1e4 shots");
    QubitState prep = QubitState::pure(MeasurementAxis{0.0}.eigvec(i));
    MeasurementStrength ms(s);
    MeasurementAxis wa{a_axis}, fa{f_axis};
    double sum = 0.0;
    long accepted = 0;
    for (long k = 0; k < shots; ++k) {
        Rng rng = Rng::derive(seed, static_cast<uint64_t>(k));
        WeakResult wr = weak_measure(prep, ms, wa, rng);
        if (projective_measure(wr.post, fa, rng).outcome == f) {
            sum += wr.j;
            accepted++;
        }
    }
    if (accepted == 0)
        throw std::runtime_error("weak_value_sampled: zero acceptances (postselection too unlikely)");
    const double p_proj = conditional_probability(i, f_axis, f);
    return (sum / shots) / p_proj;
}

EurBound eur_bound(double theta_a, double theta_f, double s, const ReadoutModel& readout) {
    constexpr double eps = 1e-12;
    EurBound out;
    out.bound = std::numeric_limits<double>::infinity();
    out.taylor_valid = true;
    const double dj = readout.bin_width();
    bool any = false;
    for (int i : {+1, -1}) {
        for (int f : {+1, -1}) {
            const double pfi = conditional_probability(i, theta_f, f);
            WeakValue wv;
            try {
                wv = weak_value(0.0, i, theta_f, f, theta_a);
            } catch (const std::domain_error&) {
                continue;  // orthogonal selection carries zero probability
            }
            for (int k = 0; k < readout.bins; ++k) {
                const double j = readout.bin_center(k);
                TaylorWeights tw = taylor_weights(j, s);
                const double mass = tw.p_j * dj * pfi;
                if (mass <= eps) continue;
                any = true;
                const double term = std::abs(2.0 * tw.g_j * wv.value.real());
                if (term >= 1.0) out.taylor_valid = false;
                const double val = -std::log2(std::max(mass, eps)) -
                                   (2.0 / ln2) * tw.g_j * wv.value.real();
                if (val < out.bound) {
                    out.bound = val;
                    out.argmin_i = i;
                    out.argmin_f = f;
                    out.argmin_j = j;
                }
            }
        }
    }
    if (!any) throw std::runtime_error("eur_bound: degenerate configuration, all outcomes have zero probability");
    return out;
}

double tomamichel_bound(double theta_a, double theta_f, double s, const ReadoutModel& readout) {
    // weak-then-strong POVM elements, bin-integrated in the weak axis eigenbasis
    MeasurementAxis wa{theta_a};
    Vector2c ap = wa.eigvec(+1), am = wa.eigvec(-1);
    double c = 0.0;
    for (int f : {+1, -1}) {
        Matrix2c pf = axis_projector(theta_f, f).matrix;
        const std::complex<double> fpp = (ap.adjoint() * pf * ap).value();
        const std::complex<double> fpm = (ap.adjoint() * pf * am).value();
        const std::complex<double> fmm = (am.adjoint() * pf * am).value();
        for (int k = 0; k < readout.bins; ++k) {
            const double lo = readout.j_min + k * readout.bin_width();
            const double hi = lo + readout.bin_width();
            const double ipp = gauss_mass(lo, hi, +1.0, s);
            const double imm = gauss_mass(lo, hi, -1.0, s);
            const double ipm = std::exp(-s / 2.0) * gauss_mass(lo, hi, 0.0, s);
            Matrix2c e_axis;
            e_axis << fpp * ipp, fpm * ipm, std::conj(fpm) * ipm, fmm * imm;
            // back to the computational basis
            Matrix2c v;
            v << ap, am;
            Matrix2c e = v * e_axis * v.adjoint();
            for (int i : {+1, -1}) {
                Matrix2c pi = axis_projector(0.0, i).matrix;
                Matrix2c sand = pi * e * pi;
                Eigen::SelfAdjointEigenSolver<Matrix2c> es(sand, Eigen::EigenvaluesOnly);
                c = std::max(c, es.eigenvalues().maxCoeff());
            }
        }
    }
    return -std::log2(std::max(c, 1e-300));
}

namespace {

struct EurBlockAcc {
    long n_i_plus = 0;
    std::vector<long> joint;  // bins * 2
};

EurSimResult simulate_eur_raw(double theta_rho, double theta_a, double theta_f, double s,
                              long shots, const ReadoutModel& readout, const NoiseModel& noise,
                              uint64_t seed, int jobs) {
    if (shots < 100000) throw std::invalid_argument("simulate_eur: need >= 1e5 shots");
    QubitState prep = QubitState::from_bloch(std::sin(theta_rho), 0.0, std::cos(theta_rho));
    MeasurementStrength ms(s, noise.eta);
    MeasurementAxis wa{theta_a}, fa{theta_f}, za{0.0};
    auto blocks = run_blocks<EurBlockAcc>(shots, jobs, [&](long lo, long hi, int) {
        EurBlockAcc acc;
        acc.joint.assign(readout.bins * 2, 0);
        for (long k = lo; k < hi; ++k) {
            Rng rng = Rng::derive(seed, static_cast<uint64_t>(k));
            // strong measurement of the initial basis
            int zi = projective_measure(prep, za, rng).outcome;
            if (noise.readout_fidelity < 1.0 && rng.uniform() > noise.readout_fidelity) zi = -zi;
            if (zi == +1) acc.n_i_plus++;
            // weak A then strong F on a fresh preparation
            WeakResult wr = weak_measure(prep, ms, wa, rng);
            QubitState post = wr.post;
            if (noise.t1 > 0.0) post = decay_channel(post, noise.t_meas, noise.t1, 0.0);
            int fo = projective_measure(post, fa, rng).outcome;
            if (noise.readout_fidelity < 1.0 && rng.uniform() > noise.readout_fidelity) fo = -fo;
            acc.joint[readout.bin_index(wr.j) * 2 + (fo == +1 ? 0 : 1)]++;
        }
        return acc;
    });
    long n_plus = 0;
    std::vector<long> joint(readout.bins * 2, 0);
    for (auto& b : blocks) {
        n_plus += b.n_i_plus;
        for (size_t k = 0; k < joint.size(); ++k) joint[k] += b.joint[k];
    }
    EurSimResult r;
    const double p_plus = static_cast<double>(n_plus) / shots;
    r.h_i = shannon_entropy(std::vector<double>{p_plus, 1.0 - p_plus});
    std::vector<double> jp(joint.size());
    for (size_t k = 0; k < joint.size(); ++k) jp[k] = static_cast<double>(joint[k]) / shots;
    r.h_af = shannon_entropy(jp);
    r.h_af_norm = 0.0;
    return r;
}

}  // namespace

EurSimResult simulate_eur(double theta_rho, double theta_a, double theta_f, double s,
                          long shots, const ReadoutModel& readout, const NoiseModel& noise,
                          uint64_t seed, int jobs) {
    EurSimResult r = simulate_eur_raw(theta_rho, theta_a, theta_f, s, shots, readout, noise, seed, jobs);
    EurSimResult ref = simulate_eur_raw(theta_rho, 0.0, 0.0, s, shots, readout, noise,
                                        seed ^ 0x5eedf00dULL, jobs);
    r.h_af_norm = r.h_af - ref.h_af;
    return r;
}

BoundReport bound_report(double theta_rho, double theta_a, double theta_f, double s,
                         long shots, const ReadoutModel& readout, const NoiseModel& noise,
                         uint64_t seed, int jobs) {
    BoundReport b;
    b.theta_rho = theta_rho;
    b.theta_a = theta_a;
    b.theta_f = theta_f;
    b.s = s;
    EurSimResult sim = simulate_eur(theta_rho, theta_a, theta_f, s, shots, readout, noise, seed, jobs);
    b.h_i = sim.h_i;
    b.h_af = sim.h_af;
    b.h_af_norm = sim.h_af_norm;
    b.trivial = 0.0;
    b.deutsch = deutsch_bound(0.0, theta_a);
    b.mu = maassen_uffink_bound(0.0, theta_a);
    b.tomamichel = tomamichel_bound(theta_a, theta_f, s, readout);
    EurBound eb = eur_bound(theta_a, theta_f, s, readout);
    b.weak_value_eur = eb.bound;
    b.argmin_i = eb.argmin_i;
    b.argmin_f = eb.argmin_f;
    b.argmin_j = eb.argmin_j;
    return b;
}

double analytic_h_af(double theta_rho, double theta_a, double theta_f, double s,
                     const ReadoutModel& readout) {
    // pure preparation, ideal detector: p(bin, f) from the Kraus amplitudes
    MeasurementAxis wa{theta_a};
    Vector2c psi;
    psi << std::cos(theta_rho / 2), std::sin(theta_rho / 2);
    const std::complex<double> a1 = (wa.eigvec(+1).adjoint() * psi).value();
    const std::complex<double> a2 = (wa.eigvec(-1).adjoint() * psi).value();
    double h = 0.0;
    for (int f : {+1, -1}) {
        Vector2c fv = MeasurementAxis{theta_f}.eigvec(f);
        const std::complex<double> c1 = (fv.adjoint() * wa.eigvec(+1)).value() * a1;
        const std::complex<double> c2 = (fv.adjoint() * wa.eigvec(-1)).value() * a2;
        for (int k = 0; k < readout.bins; ++k) {
            const double lo = readout.j_min + k * readout.bin_width();
            const double hi = lo + readout.bin_width();
            const double p = std::norm(c1) * gauss_mass(lo, hi, +1.0, s) +
                             std::norm(c2) * gauss_mass(lo, hi, -1.0, s) +
                             2.0 * (c1 * std::conj(c2)).real() * std::exp(-s / 2.0) *
                                 gauss_mass(lo, hi, 0.0, s);
            if (p > 1e-300) h -= p * std::log2(p);
        }
    }
    return h;
}

}  // namespace qlab
