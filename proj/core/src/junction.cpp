#include "qlab/junction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {
constexpr double e_charge = 1.602176634e-19;   // C
constexpr double h_planck = 6.62607015e-34;    // J s
constexpr double hbar = 1.054571817e-34;       // J s
constexpr double h_ev = 4.135667696e-15;       // eV s
constexpr double m_electron = 9.1093837015e-31;  // kg
constexpr double pi = 3.14159265358979323846;
}  // namespace

JosephsonState josephson(double delta, double delta_dot, double i0) {
    if (i0 <= 0) throw std::domain_error("critical current must be positive");
    const double c = std::cos(delta);
    if (std::abs(c) < 1e-12)
        throw std::runtime_error("josephson inductance singular at delta = pi/2 + k pi");
    return {i0 * std::sin(delta), phi0_reduced * delta_dot, phi0_reduced / (i0 * c)};
}

double wkb_log_tunneling(double e, double phi, double fermi) {
    const double barrier = phi + fermi - e;
    if (barrier <= 0) throw std::domain_error("wkb: classically allowed, no barrier");
    return -(4.0 * pi / h_ev) * std::sqrt(barrier);
}

double wkb_tunneling(double e, double phi, double fermi) {
    return std::exp(wkb_log_tunneling(e, phi, fermi));
}

double simmons_resistance(double x, double phi, SimmonsVariant variant) {
    if (x <= 0 || phi <= 0) throw std::domain_error("simmons: thickness and barrier must be positive");
    // K in 1/nm, thickness kept in nm
    const double k = std::sqrt(2.0 * m_electron * phi * e_charge) / hbar * 1e-9;
    const double r0 = h_planck / (2.0 * e_charge * e_charge);
    const double pre = 16.0 * pi * r0 * x * x;
    const double kx2 = 2.0 * k * x;
    if (variant == SimmonsVariant::printed) return pre / ((1.0 + kx2) * std::exp(kx2));
    return pre * std::exp(kx2) / (1.0 + kx2);
}

double ambegaokar_baratoff(double r_n, double gap) {
    if (r_n <= 0) throw std::domain_error("normal resistance must be positive");
    return (pi / 2.0) * (h_planck * gap / e_charge) / r_n;
}

double cabrera_mott_rate(const OxidationParams& p, double x) {
    if (x <= 0) throw std::domain_error("oxide thickness must be positive");
    return (p.d / p.a) * std::exp(p.x_max / x);
}

std::vector<std::pair<double, double>> cabrera_mott(const OxidationParams& p, int n_samples) {
    if (p.x_seed <= 0) throw std::domain_error("oxidation seed thickness must be positive");
    if (p.d <= 0 || p.a <= 0 || p.x_max <= 0 || p.t_span <= 0)
        throw std::domain_error("oxidation parameters must be positive");
    // integrate t(X) = integral of (a/D) exp(-x_max/X) dX, which is bounded and
    // smooth, then walk the curve; avoids the blow-up of dX/dt near the seed
    const double inv_rate_cap = p.a / p.d;
    std::vector<std::pair<double, double>> curve;
    curve.push_back({0.0, p.x_seed});
    double x = p.x_seed, t = 0.0;
    auto inv_rate = [&](double xx) { return inv_rate_cap * std::exp(-p.x_max / xx); };
    // adaptive step: bound the change of the integrand per step
    while (t < p.t_span) {
        double dx = std::max(x, p.x_max) * 1e-3;
        // Simpson over [x, x+dx]
        double dt;
        for (;;) {
            dt = dx / 6.0 * (inv_rate(x) + 4.0 * inv_rate(x + 0.5 * dx) + inv_rate(x + dx));
            if (t + dt <= p.t_span || dx < 1e-12) break;
            dx *= 0.5;
        }
        if (dx < 1e-12) break;
        x += dx;
        t += dt;
        curve.push_back({t, x});
    }
    if (curve.back().first < p.t_span) curve.push_back({p.t_span, x});
    // resample to n_samples points, linear in t
    std::vector<std::pair<double, double>> out;
    out.reserve(n_samples);
    size_t idx = 0;
    for (int k = 0; k < n_samples; ++k) {
        const double tk = p.t_span * k / (n_samples - 1);
        while (idx + 1 < curve.size() && curve[idx + 1].first < tk) ++idx;
        const auto& lo = curve[idx];
        const auto& hi = curve[std::min(idx + 1, curve.size() - 1)];
        double xk = lo.second;
        if (hi.first > lo.first)
            xk += (hi.second - lo.second) * (tk - lo.first) / (hi.first - lo.first);
        out.push_back({tk, xk});
    }
    return out;
}

double cabrera_mott_closed_form(double t, double c0, double c1) {
    if (t <= 0) throw std::domain_error("closed form needs t > 0");
    const double denom = c1 - std::log(t);
    if (denom <= 0) throw std::domain_error("closed form outside its validity range");
    return c0 / denom;
}

double mott_potential(double n0, double x, double eps_r) {
    if (n0 < 0 || x < 0 || eps_r <= 0) throw std::domain_error("mott_potential: bad inputs");
    return 2.0 * e_charge * n0 * x / eps_r;
}

double multilayer_resistance(int n_layers, double r_side, double r_top_base, double growth_factor,
                             bool single_junction) {
    if (n_layers < 1) throw std::domain_error("need at least one layer");
    if (r_side <= 0 || r_top_base <= 0 || growth_factor <= 0)
        throw std::domain_error("resistances and growth factor must be positive");
    const double r_top = r_top_base * std::pow(growth_factor, n_layers);
    if (single_junction) return r_top;
    return r_top * r_side / (r_top + r_side);
}

double tls_model_count(double g, double sigma, double g_max, double area, double freq_span) {
    if (g <= 0 || g > g_max) throw std::domain_error("tls model needs 0 < g <= g_max");
    return area * freq_span * sigma * std::sqrt(1.0 / (g * g) - 1.0 / (g_max * g_max));
}

TlsFit tls_density_fit(const std::vector<double>& splittings, double area, double freq_span) {
    if (splittings.size() < 3) throw std::invalid_argument("tls fit needs at least 3 splittings");
    std::vector<double> g(splittings);
    std::sort(g.begin(), g.end());
    for (auto& v : g) v *= 1e-3;  // MHz -> GHz
    if (g.front() <= 0) throw std::domain_error("splittings must be positive");
    if (g.back() - g.front() < 1e-12 * g.back())
        throw std::runtime_error("tls fit degenerate: all splittings equal");
    const int n = static_cast<int>(g.size());
    // cumulative count of TLS with splitting >= g_k, Poisson-weighted linear
    // LSQ in sigma on a g_max grid
    TlsFit best{0, 0, 1e300, n};
    for (int kg = 1; kg <= 200; ++kg) {
        const double g_max = g.back() * (1.0 + 0.05 * kg);
        double swyf = 0, swff = 0;
        for (int k = 0; k < n; ++k) {
            const double y = n - k;  // count at or above g[k]
            const double f = area * freq_span * std::sqrt(1.0 / (g[k] * g[k]) - 1.0 / (g_max * g_max));
            const double w = 1.0 / std::max(y, 1.0);  // Poisson variance
            swyf += w * y * f;
            swff += w * f * f;
        }
        const double sigma = swyf / swff;
        double sse = 0;
        for (int k = 0; k < n; ++k) {
            const double y = n - k;
            const double f = area * freq_span * std::sqrt(1.0 / (g[k] * g[k]) - 1.0 / (g_max * g_max));
            const double r = y - sigma * f;
            sse += r * r / std::max(y, 1.0);
        }
        if (sse < best.residual_rms) best = TlsFit{sigma, g_max, sse, n};
    }
    best.residual_rms = std::sqrt(best.residual_rms / n);
    return best;
}

double loss_budget(double q_total, const std::vector<LossContribution>& contributions,
                   double unknown_p) {
    if (q_total <= 0 || unknown_p <= 0) throw std::domain_error("loss_budget: bad inputs");
    double known = 0;
    for (const auto& c : contributions) {
        if (c.p < 0 || c.p > 1 || c.tan_delta < 0)
            throw std::domain_error("loss contribution out of range: " + c.label);
        known += c.p * c.tan_delta;
    }
    const double residual = 1.0 / q_total - known;
    if (residual < 0) throw std::runtime_error("loss budget inconsistent: known losses exceed 1/Q");
    return residual / unknown_p;
}

}  // namespace qlab
