#include "qlab/cqed.hpp"

#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {
constexpr double hbar = 1.054571817e-34;  // J s

// basis index: q * (n_max+1) + n, qubit q in {0 ground, 1 excited}
Eigen::MatrixXd jc_base(const JCParams& p) {
    const int nf = p.n_max + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * nf, 2 * nf);
    for (int q = 0; q < 2; ++q)
        for (int n = 0; n < nf; ++n) {
            const int k = q * nf + n;
            h(k, k) = p.omega_c * (n + 0.5) + 0.5 * p.omega_q * (q ? +1.0 : -1.0);
        }
    return h;
}
}  // namespace

void JCParams::validate() const {
    if (n_max < 2) throw std::domain_error("jc: n_max must be >= 2");
    if (g < 0) throw std::domain_error("jc: coupling must be >= 0");
}

Eigen::MatrixXd jc_hamiltonian_rwa(const JCParams& p) {
    p.validate();
    const int nf = p.n_max + 1;
    Eigen::MatrixXd h = jc_base(p);
    // g (a sigma+ + a† sigma-): |g,n> <-> |e,n-1> with amplitude g sqrt(n)
    for (int n = 1; n < nf; ++n) {
        const int kg = 0 * nf + n, ke = 1 * nf + (n - 1);
        h(ke, kg) = h(kg, ke) = p.g * std::sqrt(static_cast<double>(n));
    }
    return h;
}

Eigen::MatrixXd jc_hamiltonian_full(const JCParams& p) {
    p.validate();
    const int nf = p.n_max + 1;
    Eigen::MatrixXd h = jc_hamiltonian_rwa(p);
    // counter-rotating g (a sigma- + a† sigma+): couples |g,n> <-> |e,n+1>
    for (int n = 0; n + 1 < nf; ++n) {
        const int kg = 0 * nf + n, ke = 1 * nf + (n + 1);
        h(ke, kg) = h(kg, ke) = p.g * std::sqrt(static_cast<double>(n + 1));
    }
    return h;
}

std::vector<JCLevel> jc_spectrum(const JCParams& p) {
    if (p.n_max > 50) throw std::domain_error("jc: truncation capped at 50 excitations");
    Eigen::MatrixXd h = jc_hamiltonian_rwa(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const int nf = p.n_max + 1;
    std::vector<JCLevel> out;
    out.reserve(2 * nf);
    for (int k = 0; k < 2 * nf; ++k) {
        // label by dominant basis state's total excitation; RWA conserves it
        int best = 0;
        double w = 0.0;
        for (int b = 0; b < 2 * nf; ++b) {
            const double a = es.eigenvectors()(b, k) * es.eigenvectors()(b, k);
            if (a > w) {
                w = a;
                best = b;
            }
        }
        const int q = best / nf, n = best % nf;
        out.push_back(JCLevel{es.eigenvalues()(k), n + q});
    }
    return out;  // SelfAdjointEigenSolver already sorts ascending
}

DispersiveParams dispersive_params(double g, double delta) {
    if (delta == 0.0) throw std::domain_error("dispersive limit invalid at zero detuning");
    return {g * g / delta, delta * delta / (4.0 * g * g)};
}

TransmonSpectrum transmon_spectrum(const TransmonParams& p) {
    if (p.e_j <= 0 || p.e_c <= 0) throw std::domain_error("transmon energies must be positive");
    TransmonSpectrum s;
    s.f01 = std::sqrt(8.0 * p.e_j * p.e_c) - p.e_c;
    s.alpha = -p.e_c;
    s.f12 = s.f01 + s.alpha;
    s.transmon_limit_warning = p.e_j / p.e_c < 20.0;
    return s;
}

TransmonParams transmon_invert(double f01, double f12) {
    const double e_c = f01 - f12;
    if (e_c <= 0) throw std::domain_error("transmon_invert: needs f12 < f01");
    const double e_j = (f01 + e_c) * (f01 + e_c) / (8.0 * e_c);
    return {e_j, e_c};
}

LcMode lc_mode(double l, double c) {
    if (l <= 0 || c <= 0) throw std::domain_error("lc_mode: inductance and capacitance must be positive");
    LcMode m;
    m.omega = 1.0 / std::sqrt(l * c);
    m.z = std::sqrt(l / c);
    m.phi_zpf = std::sqrt(hbar * m.z / 2.0);
    m.q_zpf = std::sqrt(hbar / (2.0 * m.z));
    return m;
}

}  // namespace qlab
