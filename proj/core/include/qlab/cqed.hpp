#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qlab {

struct JCParams {
    double omega_c;  // rad/s
    double omega_q;  // rad/s
    double g;        // rad/s
    int n_max = 5;   // excitation truncation

    void validate() const;
};

struct JCLevel {
    double frequency;  // rad/s
    int excitation;    // total excitation number of the block
};

// dense RWA Hamiltonian on qubit x Fock(<= n_max)
Eigen::MatrixXd jc_hamiltonian_rwa(const JCParams& p);

// non-RWA (full Rabi coupling) builder, for comparison only
Eigen::MatrixXd jc_hamiltonian_full(const JCParams& p);

// sorted eigenfrequencies with excitation labels
std::vector<JCLevel> jc_spectrum(const JCParams& p);

struct DispersiveParams {
    double chi;     // g^2 / delta
    double n_crit;  // delta^2 / (4 g^2)
};

DispersiveParams dispersive_params(double g, double delta);

struct TransmonParams {
    double e_j;  // GHz (h = 1)
    double e_c;  // GHz
};

struct TransmonSpectrum {
    double f01;
    double f12;
    double alpha;
    bool transmon_limit_warning;  // e_j/e_c below 20
};

TransmonSpectrum transmon_spectrum(const TransmonParams& p);

// recovers (e_j, e_c) from (f01, f12)
TransmonParams transmon_invert(double f01, double f12);

struct LcMode {
    double omega;    // rad/s
    double z;        // ohm
    double phi_zpf;  // Wb
    double q_zpf;    // C
};

LcMode lc_mode(double l, double c);

}  // namespace qlab
