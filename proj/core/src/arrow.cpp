#include "qlab/arrow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "qlab/parallel.hpp"

namespace qlab {

namespace {

struct Coords {
    double x, z;
};

Coords to_axis_frame(Coords c, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    return {ct * c.x - st * c.z, ct * c.z + st * c.x};
}

Coords from_axis_frame(Coords c, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    return {st * c.z + ct * c.x, ct * c.z - st * c.x};
}

}  // namespace

Replay replay_trajectory(const Trajectory& traj) {
    Coords c{traj.x0, traj.z0};
    double logp = 0.0;
    for (const auto& ev : traj.events) {
        if (const auto* p = std::get_if<EvPrepare>(&ev)) {
            c = {p->x, p->z};
        } else if (const auto* r = std::get_if<EvRotateY>(&ev)) {
            const double ct = std::cos(r->theta), st = std::sin(r->theta);
            c = {c.x * ct + c.z * st, c.z * ct - c.x * st};
        } else if (const auto* w = std::get_if<EvWeak>(&ev)) {
            Coords a = to_axis_frame(c, w->axis_theta);
            logp += std::log(record_pdf(a.z, w->j, w->s));
            const double ch = std::cosh(w->s * w->j), sh = std::sinh(w->s * w->j);
            const double d = ch + a.z * sh;
            a = {a.x / d, (a.z * ch + sh) / d};
            c = from_axis_frame(a, w->axis_theta);
        } else if (const auto* pr = std::get_if<EvProject>(&ev)) {
            Coords a = to_axis_frame(c, pr->axis_theta);
            const double p = 0.5 * (1.0 + pr->outcome * a.z);
            logp += (p > 0.0) ? std::log(p) : -std::numeric_limits<double>::infinity();
            a = {0.0, static_cast<double>(pr->outcome)};
            c = from_axis_frame(a, pr->axis_theta);
        }
    }
    return Replay{logp, c.x, c.z};
}

Trajectory finalize_trajectory(Trajectory traj) {
    Replay r = replay_trajectory(traj);
    traj.xf = r.x;
    traj.zf = r.z;
    return traj;
}

Trajectory reverse_trajectory(const Trajectory& traj) {
    Trajectory rev;
    rev.x0 = -traj.xf;
    rev.z0 = -traj.zf;
    rev.xf = -traj.x0;
    rev.zf = -traj.z0;
    rev.events.reserve(traj.events.size());
    for (auto it = traj.events.rbegin(); it != traj.events.rend(); ++it) {
        if (const auto* p = std::get_if<EvPrepare>(&*it)) {
            rev.events.push_back(EvPrepare{-p->x, -p->z});
        } else if (const auto* r = std::get_if<EvRotateY>(&*it)) {
            rev.events.push_back(EvRotateY{-r->theta});
        } else if (const auto* w = std::get_if<EvWeak>(&*it)) {
            rev.events.push_back(*w);  // record sign kept
        } else if (const auto* pr = std::get_if<EvProject>(&*it)) {
            rev.events.push_back(EvProject{pr->axis_theta, -pr->outcome});
        }
    }
    return rev;
}

std::pair<double, double> forward_backward_probability(const Trajectory& traj) {
    Replay fwd = replay_trajectory(traj);
    if (std::abs(fwd.x - traj.xf) > 1e-10 || std::abs(fwd.z - traj.zf) > 1e-10)
        throw std::invalid_argument("trajectory is not replayable: recorded final state mismatch");
    Replay bwd = replay_trajectory(reverse_trajectory(traj));
    return {fwd.log_prob, bwd.log_prob};
}

double log_ratio_q(const Trajectory& traj) {
    auto [lf, lb] = forward_backward_probability(traj);
    if (std::isinf(lb) && lb < 0) return std::numeric_limits<double>::infinity();
    return lf - lb;
}

FeedbackEnsemble run_feedback_ensemble(Feedback protocol, long n, double s, double window,
                                       uint64_t seed, int jobs) {
    if (n < 10000) throw std::invalid_argument("run_feedback_ensemble: need >= 1e4 shots");
    struct Block {
        std::vector<double> qs, angles, records;
        long total = 0;
    };
    const double quarter_pi = 0.78539816339744830962;
    auto blocks = run_blocks<Block>(n, jobs, [&](long lo, long hi, int) {
        Block b;
        for (long k = lo; k < hi; ++k) {
            Rng rng = Rng::derive(seed, static_cast<uint64_t>(k));
            const double theta_app = rng.uniform(-quarter_pi, quarter_pi);
            b.total++;
            if (protocol == Feedback::COF) {
                // measure from |+x>, then the corrective rotation
                const double mean = (rng.uniform() < 0.5) ? +1.0 : -1.0;
                const double j = mean + rng.normal() / std::sqrt(s);
                const double z1 = std::tanh(s * j), x1 = 1.0 / std::cosh(s * j);
                if (std::abs(theta_app - std::atan2(z1, x1)) > window) continue;
                Trajectory t;
                t.x0 = 1.0;
                t.z0 = 0.0;
                t.events = {EvWeak{j, s}, EvRotateY{theta_app}};
                t = finalize_trajectory(t);
                b.qs.push_back(log_ratio_q(t));
                b.angles.push_back(theta_app);
                b.records.push_back(j);
            } else {
                // rotation first, then the measurement that "prescribes" it
                const double zr = -std::sin(theta_app);
                const double mean = (rng.uniform() < 0.5 * (1.0 + zr)) ? +1.0 : -1.0;
                const double j = mean + rng.normal() / std::sqrt(s);
                // angle the record would have prescribed on |+x>
                const double zi = std::tanh(s * j), xi = 1.0 / std::cosh(s * j);
                if (std::abs(theta_app - std::atan2(zi, xi)) > window) continue;
                Trajectory t;
                t.x0 = 1.0;
                t.z0 = 0.0;
                t.events = {EvRotateY{theta_app}, EvWeak{j, s}};
                t = finalize_trajectory(t);
                b.qs.push_back(log_ratio_q(t));
                b.angles.push_back(theta_app);
                b.records.push_back(j);
            }
        }
        return b;
    });
    FeedbackEnsemble out;
    long total = 0;
    for (auto& b : blocks) {
        total += b.total;
        out.qs.insert(out.qs.end(), b.qs.begin(), b.qs.end());
        out.theta_app.insert(out.theta_app.end(), b.angles.begin(), b.angles.end());
        out.records.insert(out.records.end(), b.records.begin(), b.records.end());
    }
    if (out.qs.empty()) throw std::runtime_error("run_feedback_ensemble: zero acceptances");
    out.acceptance = static_cast<double>(out.qs.size()) / total;
    return out;
}

std::vector<double> eigenstate_q_ensemble(double x0, double z0, long n, double s,
                                          uint64_t seed, int jobs) {
    if (x0 * x0 + z0 * z0 > 1.0 + 1e-12) throw std::domain_error("prior outside Bloch disc");
    auto blocks = run_blocks<std::vector<double>>(n, jobs, [&](long lo, long hi, int) {
        std::vector<double> qs;
        qs.reserve(hi - lo);
        for (long k = lo; k < hi; ++k) {
            Rng rng = Rng::derive(seed, static_cast<uint64_t>(k));
            const double i = (rng.uniform() < 0.5 * (1.0 + z0)) ? +1.0 : -1.0;
            const double j = i + rng.normal() / std::sqrt(s);
            Trajectory t;
            t.x0 = 0.0;
            t.z0 = i;
            t.events = {EvWeak{j, s}};
            t = finalize_trajectory(t);
            qs.push_back(log_ratio_q(t));
        }
        return qs;
    });
    std::vector<double> out;
    out.reserve(n);
    for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

FtCheck detailed_ft_check(const std::vector<double>& qs, double bin_width) {
    if (qs.size() < 100000) throw std::invalid_argument("detailed_ft_check: need >= 1e5 samples");
    double qmax = 0.0;
    for (double q : qs) qmax = std::max(qmax, std::abs(q));
    const int nbins = static_cast<int>(std::ceil(qmax / bin_width)) + 1;
    std::vector<long> pos(nbins, 0), neg(nbins, 0);
    for (double q : qs) {
        const int k = static_cast<int>(std::floor(std::abs(q) / bin_width));
        if (k >= nbins) continue;
        if (q > 0)
            pos[k]++;
        else if (q < 0)
            neg[k]++;
    }
    FtCheck out;
    double swqq = 0.0, swql = 0.0;
    for (int k = 0; k < nbins; ++k) {
        if (pos[k] < 20 || neg[k] < 20) continue;
        FtBin b;
        b.q_center = (k + 0.5) * bin_width;
        b.n_pos = pos[k];
        b.n_neg = neg[k];
        b.log_ratio = std::log(static_cast<double>(pos[k]) / neg[k]);
        b.expected = b.q_center;
        b.sigma = std::sqrt(1.0 / pos[k] + 1.0 / neg[k]);
        out.bins.push_back(b);
        const double w = 1.0 / (b.sigma * b.sigma);
        swqq += w * b.q_center * b.q_center;
        swql += w * b.q_center * b.log_ratio;
    }
    if (out.bins.size() < 3)
        throw std::runtime_error("detailed_ft_check: insufficient statistics (fewer than 3 valid bins)");
    out.slope = swql / swqq;
    out.slope_err = 1.0 / std::sqrt(swqq);
    return out;
}

IftResult integral_ft_and_second_law(const std::vector<double>& qs) {
    if (qs.empty()) throw std::invalid_argument("integral_ft: empty ensemble");
    // compensated sums
    double sum = 0.0, comp = 0.0, qsum = 0.0, qcomp = 0.0;
    for (double q : qs) {
        double y = std::exp(-q) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        y = q - qcomp;
        t = qsum + y;
        qcomp = (t - qsum) - y;
        qsum = t;
    }
    IftResult r;
    r.mean_exp_neg_q = sum / qs.size();
    r.mean_q = qsum / qs.size();
    // jackknife over 50 blocks
    const int nb = std::min<size_t>(50, qs.size());
    std::vector<double> bm(nb, 0.0);
    std::vector<long> bn(nb, 0);
    for (size_t k = 0; k < qs.size(); ++k) {
        const int b = static_cast<int>(k * nb / qs.size());
        bm[b] += std::exp(-qs[k]);
        bn[b]++;
    }
    double err = 0.0;
    for (int b = 0; b < nb; ++b) {
        const double d = bm[b] / bn[b] - r.mean_exp_neg_q;
        err += d * d;
    }
    r.jackknife_err = std::sqrt(err / (nb * (nb - 1.0)));
    r.absolute_irreversibility = r.mean_exp_neg_q + 3.0 * r.jackknife_err < 1.0;
    return r;
}

// ---- classical ----

void ClassicalChain::validate() const {
    const size_t n = energies.size();
    if (rates.size() != n) throw std::domain_error("rate matrix size mismatch");
    for (size_t col = 0; col < n; ++col) {
        double sum = 0.0;
        for (size_t row = 0; row < n; ++row) {
            if (rates[row].size() != n) throw std::domain_error("rate matrix size mismatch");
            if (row != col && rates[row][col] < 0) throw std::domain_error("negative rate");
            sum += rates[row][col];
        }
        if (std::abs(sum) > 1e-10) throw std::domain_error("generator columns must sum to 0");
    }
}

std::vector<double> ClassicalChain::equilibrium() const {
    std::vector<double> p(energies.size());
    double zsum = 0.0;
    for (size_t m = 0; m < energies.size(); ++m) {
        p[m] = std::exp(-energies[m] / temperature);
        zsum += p[m];
    }
    for (auto& v : p) v /= zsum;
    return p;
}

bool ClassicalChain::detailed_balance(double tol) const {
    auto p = equilibrium();
    for (size_t a = 0; a < energies.size(); ++a)
        for (size_t b = 0; b < a; ++b)
            if (std::abs(rates[a][b] * p[b] - rates[b][a] * p[a]) > tol) return false;
    return true;
}

std::pair<ClassicalTrajectory, ThermoRecord> classical_simulate(const ClassicalChain& chain,
                                                                const DriveSchedule& drive,
                                                                double t_final, Rng& rng) {
    chain.validate();
    ClassicalTrajectory traj;
    traj.t_final = t_final;
    // start from the (undriven) equilibrium
    auto peq = chain.equilibrium();
    double u = rng.uniform(), acc = 0.0;
    int m = 0;
    for (size_t k = 0; k < peq.size(); ++k) {
        acc += peq[k];
        if (u < acc) {
            m = static_cast<int>(k);
            break;
        }
    }
    traj.m0 = m;
    ThermoRecord rec;
    double t = 0.0;
    const double e_start = drive(0.0)[traj.m0];
    while (true) {
        double rate = 0.0;
        for (size_t to = 0; to < chain.energies.size(); ++to)
            if (static_cast<int>(to) != m) rate += chain.rates[to][m];
        double dt = (rate > 0) ? -std::log(1.0 - rng.uniform()) / rate
                               : std::numeric_limits<double>::infinity();
        if (t + dt >= t_final) {
            rec.W += drive(t_final)[m] - drive(t)[m];
            break;
        }
        rec.W += drive(t + dt)[m] - drive(t)[m];
        t += dt;
        // pick the jump target
        double pick = rng.uniform() * rate, run = 0.0;
        int to = m;
        for (size_t cand = 0; cand < chain.energies.size(); ++cand) {
            if (static_cast<int>(cand) == m) continue;
            run += chain.rates[cand][m];
            if (pick < run) {
                to = static_cast<int>(cand);
                break;
            }
        }
        auto e = drive(t);
        rec.Q_heat += e[to] - e[m];
        traj.jumps.push_back(Jump{t, m, to});
        m = to;
    }
    traj.mf = m;
    rec.dE = drive(t_final)[traj.mf] - e_start;
    return {traj, rec};
}

ThermoRecord classical_entropy_production(const ClassicalTrajectory& traj,
                                          const ClassicalChain& chain) {
    chain.validate();
    if (!chain.detailed_balance())
        throw std::runtime_error("classical_entropy_production: chain violates detailed balance");
    auto p = chain.equilibrium();
    ThermoRecord rec;
    for (const auto& jmp : traj.jumps) rec.Q_heat += chain.energies[jmp.to] - chain.energies[jmp.from];
    rec.dE = chain.energies[traj.mf] - chain.energies[traj.m0];
    rec.W = rec.dE - rec.Q_heat;
    rec.dS = std::log(p[traj.m0]) - std::log(p[traj.mf]);
    rec.dS_r = rec.Q_heat / chain.temperature;
    rec.dS_i = rec.dS - rec.dS_r;
    // cross-check against the path-probability ratio (no-jump factors cancel)
    double log_ratio = std::log(p[traj.m0]) - std::log(p[traj.mf]);
    for (const auto& jmp : traj.jumps)
        log_ratio += std::log(chain.rates[jmp.to][jmp.from] / chain.rates[jmp.from][jmp.to]);
    if (std::abs(log_ratio - rec.dS_i) > 1e-10)
        throw std::runtime_error("entropy bookkeeping violated ln(PF/PB) = dS_i");
    return rec;
}

DiscreteChainResult enumerate_discrete_chain(const std::vector<std::array<double, 2>>& energy_protocol,
                                             double beta, int n_steps) {
    if (static_cast<int>(energy_protocol.size()) != n_steps + 1)
        throw std::invalid_argument("protocol must list n_steps+1 energy pairs");
    if (n_steps > 20) throw std::invalid_argument("path enumeration limited to 20 steps");
    auto boltzmann = [&](const std::array<double, 2>& e) {
        const double w0 = std::exp(-beta * e[0]), w1 = std::exp(-beta * e[1]);
        return std::array<double, 2>{w0 / (w0 + w1), w1 / (w0 + w1)};
    };
    // detailed-balance single-step matrix at fixed energies: T[from][to]
    auto transition = [&](const std::array<double, 2>& e) {
        auto p = boltzmann(e);
        std::array<std::array<double, 2>, 2> t{};
        const double c = 0.8;
        t[0][1] = c * p[1];
        t[1][0] = c * p[0];
        t[0][0] = 1.0 - t[0][1];
        t[1][1] = 1.0 - t[1][0];
        return t;
    };
    auto p_init = boltzmann(energy_protocol.front());
    auto p_fin = boltzmann(energy_protocol.back());
    const double z0 = std::exp(-beta * energy_protocol.front()[0]) +
                      std::exp(-beta * energy_protocol.front()[1]);
    const double zn = std::exp(-beta * energy_protocol.back()[0]) +
                      std::exp(-beta * energy_protocol.back()[1]);
    const double dF = -(std::log(zn) - std::log(z0)) / beta;

    std::vector<std::array<std::array<double, 2>, 2>> mats;
    for (int k = 1; k <= n_steps; ++k) mats.push_back(transition(energy_protocol[k]));

    DiscreteChainResult out;
    out.total_prob = 0.0;
    double jz = 0.0;
    // sigma (rounded to 1e-9) -> (forward mass, backward-process mass); the
    // backward process runs the reversed protocol, so P_F(sigma)/P_B(-sigma)
    // is exactly e^sigma path by path
    std::map<long long, std::pair<double, double>> hist;
    const long npaths = 1L << (n_steps + 1);
    for (long path = 0; path < npaths; ++path) {
        std::vector<int> m(n_steps + 1);
        for (int k = 0; k <= n_steps; ++k) m[k] = (path >> k) & 1;
        double pf = p_init[m[0]], pb = p_fin[m[n_steps]];
        double w = 0.0;
        for (int k = 1; k <= n_steps; ++k) {
            w += energy_protocol[k][m[k - 1]] - energy_protocol[k - 1][m[k - 1]];
            pf *= mats[k - 1][m[k - 1]][m[k]];
            pb *= mats[k - 1][m[k]][m[k - 1]];
        }
        out.total_prob += pf;
        jz += pf * std::exp(-beta * w);
        if (pf > 0.0 && pb > 0.0) {
            const double sigma = std::log(pf / pb);
            auto& entry = hist[llround(sigma * 1e9)];
            entry.first += pf;
            entry.second += pb;
        }
    }
    out.jarzynski = jz * std::exp(beta * dF);
    for (auto& [key, masses] : hist)
        out.ft_pairs.push_back({key * 1e-9, std::log(masses.first / masses.second)});
    return out;
}

}  // namespace qlab
