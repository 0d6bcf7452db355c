#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qlab {

// reduced flux quantum hbar/2e, Wb
constexpr double phi0_reduced = 3.2910598631e-16;

struct JosephsonState {
    double i;  // A
    double v;  // V
    double l;  // H
};

// I = I0 sin(delta), V = phi0 * delta_dot, L = phi0 / (I0 cos delta)
JosephsonState josephson(double delta, double delta_dot, double i0);

// printed-form WKB exponent; dimensionally loose, see the log variant for
// barriers where the probability underflows
double wkb_log_tunneling(double e, double phi, double fermi);
double wkb_tunneling(double e, double phi, double fermi);

enum class SimmonsVariant { printed, corrected };

// x in nm, phi in eV
double simmons_resistance(double x, double phi, SimmonsVariant variant);

// gap in Hz (the energy given as a frequency), returns A
double ambegaokar_baratoff(double r_n, double gap);

struct OxidationParams {
    double d;       // diffusion constant, nm^2/s
    double a;       // interatomic spacing, nm
    double x_max;   // Mott length scale, nm
    double t_span;  // s
    double x_seed = 0.1;  // nm; the rate is singular at zero thickness
};

// growth rate dX/dt = (D/a) exp(x_max / X)
double cabrera_mott_rate(const OxidationParams& p, double x);

// thickness curve (t, X) integrated adaptively up to t_span
std::vector<std::pair<double, double>> cabrera_mott(const OxidationParams& p, int n_samples = 200);

// inverse-logarithmic closed form c0 / (c1 - ln t), valid for X << x_max
double cabrera_mott_closed_form(double t, double c0, double c1);

// Mott capacitor potential, printed form: 2 e n0 X / eps_r
double mott_potential(double n0, double x, double eps_r);

// two-junction stack: R_top = r_top_base * growth^n in parallel with r_side;
// single_junction = same-sign evaporation, R_top alone
double multilayer_resistance(int n_layers, double r_side, double r_top_base, double growth_factor,
                             bool single_junction = false);

struct TlsFit {
    double sigma;    // TLS / (GHz um^2)
    double g_max;    // GHz
    double residual_rms;
    int n;
};

// model count above splitting g: N(g) = area * freq_span * sigma * sqrt(1/g^2 - 1/g_max^2)
double tls_model_count(double g, double sigma, double g_max, double area, double freq_span);

// splittings in MHz, area in um^2, freq_span in GHz
TlsFit tls_density_fit(const std::vector<double>& splittings, double area, double freq_span);

struct LossContribution {
    std::string label;
    double p;          // participation, [0,1]
    double tan_delta;  // >= 0
};

// (1/Q - sum p_i tan_delta_i) / unknown_p
double loss_budget(double q_total, const std::vector<LossContribution>& contributions,
                   double unknown_p);

}  // namespace qlab
