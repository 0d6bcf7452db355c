#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlab/arrow.hpp"
#include "qlab/bounds.hpp"
#include "qlab/cqed.hpp"
#include "qlab/junction.hpp"
#include "qlab/pulse.hpp"
#include "qlab/weak.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

struct Common {
    uint64_t seed = 0;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    bool dry_run = false;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "RNG seed (QTHESIS_SEED overrides)");
    cmd->add_option("--jobs", c.jobs, "worker count");
    cmd->add_flag("--dry-run", c.dry_run, "validate config without compute");
    cmd->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch front-end for the weak-measurement thesis models"};
    app.require_subcommand(1);

    Common c;

    // eur-bound
    auto* eur_bound_cmd = app.add_subcommand("eur-bound", "single BoundReport row");
    double theta_a = 0, theta_f = 0, theta_rho = 0, s = 0.2;
    long shots = 100000;
    eur_bound_cmd->add_option("--theta-a", theta_a)->required();
    eur_bound_cmd->add_option("--theta-f", theta_f)->required();
    eur_bound_cmd->add_option("--s", s)->required();
    eur_bound_cmd->add_option("--theta-rho", theta_rho);
    eur_bound_cmd->add_option("--shots", shots);
    add_common(eur_bound_cmd, c);

    // eur-sim
    auto* eur_sim_cmd = app.add_subcommand("eur-sim", "simulated entropies at one grid point");
    double es_rho = 0, es_a = 0, es_f = 0, es_s = 0.2, es_fid = 1.0;
    long es_shots = 100000;
    eur_sim_cmd->add_option("--theta-rho", es_rho);
    eur_sim_cmd->add_option("--theta-a", es_a)->required();
    eur_sim_cmd->add_option("--theta-f", es_f)->required();
    eur_sim_cmd->add_option("--s", es_s);
    eur_sim_cmd->add_option("--shots", es_shots);
    eur_sim_cmd->add_option("--readout-fidelity", es_fid);
    add_common(eur_sim_cmd, c);

    // traj-ensemble
    auto* traj_cmd = app.add_subcommand("traj-ensemble", "Q ensemble CSV");
    std::string tj_protocol = "eigen";
    long tj_shots = 1000000;
    double tj_s = 0.375, tj_window = 0.15707963267948966, tj_x0 = 0.70710678118654752,
           tj_z0 = 0.70710678118654752;
    traj_cmd->add_option("--protocol", tj_protocol, "eigen|cof|acof");
    traj_cmd->add_option("--shots", tj_shots);
    traj_cmd->add_option("--s", tj_s);
    traj_cmd->add_option("--window", tj_window);
    traj_cmd->add_option("--x0", tj_x0);
    traj_cmd->add_option("--z0", tj_z0);
    add_common(traj_cmd, c);

    // ft-check
    auto* ft_cmd = app.add_subcommand("ft-check", "fluctuation theorem checks");
    std::string ft_protocol = "eigen";
    long ft_shots = 1000000;
    double ft_s = 0.375, ft_window = 0.15707963267948966, ft_bin = 0.25, ft_z0 = 0.0;
    ft_cmd->add_option("--protocol", ft_protocol, "eigen|cof|acof");
    ft_cmd->add_option("--shots", ft_shots);
    ft_cmd->add_option("--s", ft_s);
    ft_cmd->add_option("--window", ft_window);
    ft_cmd->add_option("--bin-width", ft_bin);
    ft_cmd->add_option("--z0", ft_z0);
    add_common(ft_cmd, c);

    // jc-spectrum
    auto* jc_cmd = app.add_subcommand("jc-spectrum", "detuning sweep CSV");
    double jc_wc = 2 * M_PI * 5.8e9, jc_g = 2 * M_PI * 70e6;
    double jc_dmin = 0, jc_dmax = 0;
    int jc_points = 1, jc_nmax = 5;
    jc_cmd->add_option("--omega-c", jc_wc, "rad/s");
    jc_cmd->add_option("--g", jc_g, "rad/s");
    jc_cmd->add_option("--delta-min", jc_dmin, "rad/s");
    jc_cmd->add_option("--delta-max", jc_dmax, "rad/s");
    jc_cmd->add_option("--points", jc_points);
    jc_cmd->add_option("--n-max", jc_nmax);
    add_common(jc_cmd, c);

    // transmon
    auto* tr_cmd = app.add_subcommand("transmon", "transmon spectrum from EJ, EC");
    double tr_ej = 20, tr_ec = 0.2;
    tr_cmd->add_option("--ej", tr_ej)->required();
    tr_cmd->add_option("--ec", tr_ec)->required();
    add_common(tr_cmd, c);

    // pulse-compile
    auto* pc_cmd = app.add_subcommand("pulse-compile", "compile a Rabi sequence");
    std::string pc_config;
    std::string pc_format = "bin";
    pc_cmd->add_option("config", pc_config, "JSON config path")->required();
    pc_cmd->add_option("--format", pc_format, "bin|csv");
    add_common(pc_cmd, c);

    // jj-model
    auto* jj_cmd = app.add_subcommand("jj-model", "junction model evaluations");
    std::string jj_model = "josephson";
    double jj_delta = 0, jj_delta_dot = 0, jj_i0 = 1e-8;
    double jj_rn = 32480, jj_gap = 50e9;
    double jj_x = 1.5, jj_phi = 2.0;
    std::string jj_variant = "corrected";
    double jj_d = 1e-15, jj_a = 0.4, jj_xmax = 40.0, jj_tspan = 1800;
    int jj_layers = 10;
    double jj_rside = 10000, jj_rtop = 1000, jj_growth = 2.0;
    jj_cmd->add_option("--model", jj_model, "josephson|simmons|ab|cabrera|multilayer");
    jj_cmd->add_option("--delta", jj_delta);
    jj_cmd->add_option("--delta-dot", jj_delta_dot);
    jj_cmd->add_option("--i0", jj_i0);
    jj_cmd->add_option("--rn", jj_rn);
    jj_cmd->add_option("--gap", jj_gap);
    jj_cmd->add_option("--x", jj_x);
    jj_cmd->add_option("--phi", jj_phi);
    jj_cmd->add_option("--variant", jj_variant, "printed|corrected");
    jj_cmd->add_option("--d", jj_d);
    jj_cmd->add_option("--a", jj_a);
    jj_cmd->add_option("--x-max", jj_xmax);
    jj_cmd->add_option("--t-span", jj_tspan);
    jj_cmd->add_option("--layers", jj_layers);
    jj_cmd->add_option("--r-side", jj_rside);
    jj_cmd->add_option("--r-top", jj_rtop);
    jj_cmd->add_option("--growth", jj_growth);
    add_common(jj_cmd, c);

    // tls-fit
    auto* tls_cmd = app.add_subcommand("tls-fit", "TLS density fit from splittings CSV");
    std::string tls_in;
    double tls_area = 200, tls_span = 1.0;
    tls_cmd->add_option("--in", tls_in, "CSV with one splitting (MHz) per line")->required();
    tls_cmd->add_option("--area", tls_area, "um^2");
    tls_cmd->add_option("--span", tls_span, "GHz");
    add_common(tls_cmd, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("QTHESIS_SEED")) c.seed = std::strtoull(env, nullptr, 10);
    if (c.jobs < 1) c.jobs = 1;

    const auto t_start = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        std::ostringstream out;
        if (eur_bound_cmd->parsed()) {
            if (!c.dry_run) {
                auto r = qlab::bound_report(theta_rho, theta_a, theta_f, s, shots,
                                            qlab::ReadoutModel{}, qlab::NoiseModel{}, c.seed, c.jobs);
                out << "theta_rho,theta_a,theta_f,s,h_i,h_af,h_af_norm,trivial,deutsch,mu,"
                       "tomamichel,weak_value_eur,argmin_i,argmin_f,argmin_j\n";
                out << fmt17(r.theta_rho) << ',' << fmt17(r.theta_a) << ',' << fmt17(r.theta_f)
                    << ',' << fmt17(r.s) << ',' << fmt17(r.h_i) << ',' << fmt17(r.h_af) << ','
                    << fmt17(r.h_af_norm) << ',' << fmt17(r.trivial) << ',' << fmt17(r.deutsch)
                    << ',' << fmt17(r.mu) << ',' << fmt17(r.tomamichel) << ','
                    << fmt17(r.weak_value_eur) << ',' << r.argmin_i << ',' << r.argmin_f << ','
                    << fmt17(r.argmin_j) << '\n';
            }
        } else if (eur_sim_cmd->parsed()) {
            if (es_shots < 1) throw std::domain_error("shots must be positive");
            if (!c.dry_run) {
                qlab::NoiseModel noise;
                noise.readout_fidelity = es_fid;
                auto r = qlab::simulate_eur(es_rho, es_a, es_f, es_s, es_shots, qlab::ReadoutModel{},
                                            noise, c.seed, c.jobs);
                out << "h_i,h_af,h_af_norm\n"
                    << fmt17(r.h_i) << ',' << fmt17(r.h_af) << ',' << fmt17(r.h_af_norm) << '\n';
            }
        } else if (traj_cmd->parsed() || ft_cmd->parsed()) {
            const bool is_ft = ft_cmd->parsed();
            const std::string protocol = is_ft ? ft_protocol : tj_protocol;
            const long n = is_ft ? ft_shots : tj_shots;
            const double ss = is_ft ? ft_s : tj_s;
            const double window = is_ft ? ft_window : tj_window;
            if (protocol != "eigen" && protocol != "cof" && protocol != "acof")
                throw std::domain_error("protocol must be eigen, cof, or acof");
            if (!c.dry_run) {
                std::vector<double> qs;
                if (protocol == "eigen") {
                    const double z0 = is_ft ? ft_z0 : tj_z0;
                    const double x0 = is_ft ? 0.0 : tj_x0;
                    qs = qlab::eigenstate_q_ensemble(x0, z0, n, ss, c.seed, c.jobs);
                } else {
                    auto ens = qlab::run_feedback_ensemble(
                        protocol == "cof" ? qlab::Feedback::COF : qlab::Feedback::ACOF, n, ss,
                        window, c.seed, c.jobs);
                    qs = ens.qs;
                }
                if (is_ft) {
                    auto ift = qlab::integral_ft_and_second_law(qs);
                    out << "slope,slope_err,mean_exp_neg_q,jackknife_err,mean_q,"
                           "absolute_irreversibility\n";
                    try {
                        auto ft = qlab::detailed_ft_check(qs, ft_bin);
                        out << fmt17(ft.slope) << ',' << fmt17(ft.slope_err) << ',';
                    } catch (const std::exception&) {
                        out << "nan,nan,";  // e.g. one-sided or sparse Q distributions
                    }
                    out << fmt17(ift.mean_exp_neg_q) << ',' << fmt17(ift.jackknife_err) << ','
                        << fmt17(ift.mean_q) << ',' << (ift.absolute_irreversibility ? 1 : 0)
                        << '\n';
                } else {
                    out << "q\n";
                    for (double q : qs) out << fmt17(q) << '\n';
                }
            }
        } else if (jc_cmd->parsed()) {
            if (jc_points < 1) throw std::domain_error("points must be >= 1");
            if (!c.dry_run) {
                out << "delta,level_index,frequency\n";
                for (int k = 0; k < jc_points; ++k) {
                    const double d =
                        jc_points == 1 ? jc_dmin
                                       : jc_dmin + (jc_dmax - jc_dmin) * k / (jc_points - 1);
                    qlab::JCParams p{jc_wc, jc_wc + d, jc_g, jc_nmax};
                    auto levels = qlab::jc_spectrum(p);
                    for (size_t i = 0; i < levels.size(); ++i)
                        out << fmt17(d) << ',' << i << ',' << fmt17(levels[i].frequency) << '\n';
                }
            }
        } else if (tr_cmd->parsed()) {
            if (!c.dry_run) {
                auto sp = qlab::transmon_spectrum({tr_ej, tr_ec});
                if (sp.transmon_limit_warning)
                    std::cerr << "warning: EJ/EC below 20, outside the transmon limit\n";
                out << "f01,f12,alpha\n"
                    << fmt17(sp.f01) << ',' << fmt17(sp.f12) << ',' << fmt17(sp.alpha) << '\n';
            }
        } else if (pc_cmd->parsed()) {
            std::ifstream f(pc_config);
            if (!f) throw std::domain_error("cannot read config " + pc_config);
            std::stringstream buf;
            buf << f.rdbuf();
            auto cfg = qlab::rabi_config_from_json(buf.str());
            if (pc_format != "bin" && pc_format != "csv")
                throw std::domain_error("format must be bin or csv");
            if (!c.dry_run) {
                auto cl = qlab::compile_rabi(cfg);
                const std::string path = c.out.empty() ? "sequence" : c.out;
                if (pc_format == "bin")
                    qlab::export_sequence_bin(cl, path);
                else
                    qlab::export_sequence_csv(cl, path);
            }
            c.out.clear();  // artifact already written
        } else if (jj_cmd->parsed()) {
            if (!c.dry_run) {
                if (jj_model == "josephson") {
                    auto r = qlab::josephson(jj_delta, jj_delta_dot, jj_i0);
                    out << "i,v,l\n" << fmt17(r.i) << ',' << fmt17(r.v) << ',' << fmt17(r.l) << '\n';
                } else if (jj_model == "simmons") {
                    const auto variant = jj_variant == "printed" ? qlab::SimmonsVariant::printed
                                                                 : qlab::SimmonsVariant::corrected;
                    out << "x,phi,resistance\n"
                        << fmt17(jj_x) << ',' << fmt17(jj_phi) << ','
                        << fmt17(qlab::simmons_resistance(jj_x, jj_phi, variant)) << '\n';
                } else if (jj_model == "ab") {
                    out << "rn,gap,ic\n"
                        << fmt17(jj_rn) << ',' << fmt17(jj_gap) << ','
                        << fmt17(qlab::ambegaokar_baratoff(jj_rn, jj_gap)) << '\n';
                } else if (jj_model == "cabrera") {
                    auto curve = qlab::cabrera_mott({jj_d, jj_a, jj_xmax, jj_tspan});
                    out << "t,x\n";
                    for (auto& [t, x] : curve) out << fmt17(t) << ',' << fmt17(x) << '\n';
                } else if (jj_model == "multilayer") {
                    out << "layers,resistance\n"
                        << jj_layers << ','
                        << fmt17(qlab::multilayer_resistance(jj_layers, jj_rside, jj_rtop, jj_growth))
                        << '\n';
                } else {
                    throw std::domain_error("unknown jj model " + jj_model);
                }
            }
        } else if (tls_cmd->parsed()) {
            std::ifstream f(tls_in);
            if (!f) throw std::domain_error("cannot read " + tls_in);
            std::vector<double> g;
            std::string line;
            while (std::getline(f, line))
                if (!line.empty()) g.push_back(std::stod(line));
            if (!c.dry_run) {
                auto fit = qlab::tls_density_fit(g, tls_area, tls_span);
                nlohmann::json j = {{"sigma", fit.sigma},
                                    {"g_max", fit.g_max},
                                    {"residual_rms", fit.residual_rms},
                                    {"n", fit.n}};
                out << j.dump(2) << '\n';
            }
        }
        write_text(c.out, out.str());
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        rc = 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        rc = 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        rc = 1;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    nlohmann::json manifest = {{"version", kVersion}, {"seed", c.seed}, {"timing_s", elapsed}};
    std::cerr << manifest.dump() << '\n';
    return rc;
}
