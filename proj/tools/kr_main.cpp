// kr: quantum kicked rotor laboratory.
// Subcommands run simulations and analyses; every run writes its data
// artifacts atomically and a manifest.json last. Exit codes: 0 success,
// 2 validation/usage error, 3 runtime error.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kr/anderson.hpp"
#include "kr/classical.hpp"
#include "kr/engine.hpp"
#include "kr/errors.hpp"
#include "kr/fitting.hpp"
#include "kr/io.hpp"
#include "kr/params.hpp"
#include "kr/scaling.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "kr 0.1.0";

struct Ctx {
    std::filesystem::path out = ".";
    int threads = 1;
    uint64_t seed = 20250819;
    std::string command;
    json config;
    std::vector<std::string> artifacts;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void emit(const std::string& name, const kr::Csv& csv) {
        kr::write_csv(out / name, csv);
        artifacts.push_back(name);
    }
    void emit(const std::string& name, const json& j) {
        kr::write_file_atomic(out / name, j.dump(2) + "\n");
        artifacts.push_back(name);
    }
    // manifest.json is always the last artifact and carries the wall time,
    // so byte-compare checks exclude it.
    void finish() {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json m;
        m["command"] = command;
        m["config"] = config;
        m["seed"] = seed;
        m["threads"] = threads;
        m["version"] = kVersion;
        m["wall_time_s"] = wall;
        m["artifacts"] = artifacts;
        kr::write_file_atomic(out / "manifest.json", m.dump(2) + "\n");
    }
};

json shape_fit_json(const kr::ShapeFit& f) {
    return json{{"alpha", f.alpha}, {"scale", f.s}, {"cross_entropy", f.cross_entropy}};
}

void run_classical(Ctx& ctx, double K, int steps, int traj) {
    ctx.command = "classical";
    ctx.config = {{"K", K}, {"steps", steps}, {"traj", traj}};
    const kr::DiffusionEstimate d = kr::classical_diffusion(K, traj, steps, ctx.seed);
    kr::Csv csv;
    csv.header = {"step", "mean_L2 [action^2]"};
    for (std::size_t i = 0; i < d.mean_L2.size(); ++i)
        csv.rows.push_back({static_cast<double>(i + 1), d.mean_L2[i]});
    ctx.emit("classical_msd.csv", csv);
    ctx.emit("summary.json", json{{"D", d.D},
                                  {"stderr_D", d.stderr_D},
                                  {"D_quasilinear", K * K / 4.0},
                                  {"regime_warning", d.regime_warning}});
}

struct EvolveArtifacts {
    kr::EnsembleResult res;
    kr::SimParams p;
};

EvolveArtifacts run_evolve_core(Ctx& ctx, kr::SimParams p, int members,
                                std::vector<long> dist_times) {
    p.seed = ctx.seed;
    kr::SampleSpec sampling;
    sampling.times = kr::sample_times(p.n_kicks);
    if (dist_times.empty()) dist_times = {p.n_kicks};
    sampling.dist_times = std::move(dist_times);
    kr::EnsembleSpec spec;
    spec.n_members = members;
    EvolveArtifacts ea;
    ea.res = kr::run_ensemble(p, spec, sampling, ctx.threads);
    ea.p = p;
    return ea;
}

void emit_series(Ctx& ctx, const std::string& name, const kr::EnsembleResult& r) {
    kr::Csv csv;
    csv.header = {"t [kicks]", "p2 [p^2]", "pi0 [prob]"};
    for (std::size_t i = 0; i < r.times.size(); ++i)
        csv.rows.push_back({static_cast<double>(r.times[i]), r.p2[i], r.pi0[i]});
    ctx.emit(name, csv);
}

void emit_dist(Ctx& ctx, const std::string& name, const kr::EnsembleResult& r, std::size_t which) {
    kr::Csv csv;
    csv.header = {"p [kbar]", "Pi [prob]"};
    for (std::size_t i = 0; i < r.dist_p.size(); ++i)
        csv.rows.push_back({r.dist_p[i], r.dists[which][i]});
    ctx.emit(name, csv);
}

void run_evolve(Ctx& ctx, const kr::SimParams& p, int members) {
    ctx.command = "evolve";
    ctx.config = json::parse(kr::to_json(p, kr::EnsembleSpec{members}));
    EvolveArtifacts ea = run_evolve_core(ctx, p, members, {});
    emit_series(ctx, "series.csv", ea.res);
    emit_dist(ctx, "dist.csv", ea.res, ea.res.dists.size() - 1);
    const kr::ShapeFit fit = kr::fit_distribution_shape(ea.res.dist_p, ea.res.dists.back());
    json s = shape_fit_json(fit);
    s["beta_last"] = kr::last_decade_beta(
        std::vector<double>(ea.res.times.begin(), ea.res.times.end()), ea.res.p2);
    s["norm_drift"] = ea.res.norm_drift;
    s["N"] = ea.res.N;
    ctx.emit("summary.json", s);
}

void run_anderson_map(Ctx& ctx, double K, double kbar, double omega, double beta, int sites,
                      int r_max, int oracle_M) {
    ctx.command = "anderson-map";
    ctx.config = {{"K", K},     {"kbar", kbar},   {"omega", omega},      {"beta_qm", beta},
                  {"sites", sites}, {"r_max", r_max}, {"oracle_M", oracle_M}};
    const int half = sites / 2;
    kr::LatticeBox box{{{-half, half}}};
    const std::vector<double> onsite = kr::pseudo_disorder(omega, kbar, beta, {}, box);
    kr::Csv oc;
    oc.header = {"m [site]", "E [hopping units]"};
    for (int m = -half; m <= half; ++m)
        oc.rows.push_back({static_cast<double>(m), onsite[static_cast<std::size_t>(m + half)]});
    ctx.emit("onsite.csv", oc);

    const kr::HoppingTable ht = kr::hopping_coefficients(K / kbar, 0.0, 1, r_max);
    kr::Csv hc;
    hc.header = {"r [sites]", "t_r [energy]"};
    for (int r = 0; r <= r_max; ++r) hc.rows.push_back({static_cast<double>(r), ht.t[static_cast<std::size_t>(r)]});
    ctx.emit("hopping.csv", hc);

    json rep;
    rep["fgp_applicable"] = (K / kbar) < M_PI;
    if (oracle_M > 0) {
        const kr::FloquetReport fr = kr::floquet_oracle(K, kbar, beta, oracle_M);
        rep["unimodularity"] = fr.unimodularity;
        rep["median_residual"] = fr.median_residual;
        rep["median_residual_printed_sign"] = fr.median_residual_printed;
        rep["chosen_sign"] = fr.chosen_sign;
        rep["n_interior"] = fr.n_interior;
        rep["n_total"] = fr.n_total;
        rep["t0_abs"] = fr.t0_abs;
    }
    ctx.emit("oracle.json", rep);
}

void run_phase_diagram(Ctx& ctx, double k_min, double k_max, double k_step, double e_min,
                       double e_max, double e_step, long t, int members, int M, double kbar) {
    ctx.command = "phase-diagram";
    ctx.config = {{"k_min", k_min}, {"k_max", k_max}, {"k_step", k_step},
                  {"eps_min", e_min}, {"eps_max", e_max}, {"eps_step", e_step},
                  {"t", t},          {"members", members}, {"M", M}, {"kbar", kbar}};
    std::vector<double> Ks, es;
    for (double k = k_min; k <= k_max + 1e-9; k += k_step) Ks.push_back(k);
    for (double e = e_min; e <= e_max + 1e-9; e += e_step) es.push_back(e);
    std::vector<double> beta(Ks.size() * es.size());
    kr::SampleSpec sampling;
    sampling.times = kr::sample_times(t);
    const std::vector<double> tt(sampling.times.begin(), sampling.times.end());
    for (std::size_t ik = 0; ik < Ks.size(); ++ik)
        for (std::size_t ie = 0; ie < es.size(); ++ie) {
            kr::SimParams p;
            p.K = Ks[ik];
            p.kbar = kbar;
            p.epsilon = es[ie];
            p.omegas = kr::default_omegas3();
            p.n_kicks = t;
            p.basis_half_width = M;
            p.seed = ctx.seed + 1000 * ik + ie;
            kr::EnsembleResult r = kr::run_ensemble(p, kr::EnsembleSpec{members}, sampling, ctx.threads);
            beta[ik * es.size() + ie] = kr::last_decade_beta(tt, r.p2);
        }
    const kr::PhaseMap pm = kr::phase_diagram(Ks, es, beta);
    kr::Csv bm;
    bm.header = {"K [kick]", "epsilon [1]", "beta [1]"};
    for (std::size_t ik = 0; ik < Ks.size(); ++ik)
        for (std::size_t ie = 0; ie < es.size(); ++ie)
            bm.rows.push_back({Ks[ik], es[ie], beta[ik * es.size() + ie]});
    ctx.emit("beta_map.csv", bm);
    kr::Csv bd;
    bd.header = {"K_c [kick]", "epsilon [1]"};
    for (auto [kc, e] : pm.boundary) bd.rows.push_back({kc, e});
    ctx.emit("boundary.csv", bd);
}

void run_scaling(Ctx& ctx, double eps, double k_min, double k_max, double k_step, long t,
                 int members, int M, int bootstrap) {
    ctx.command = "scaling";
    ctx.config = {{"epsilon", eps}, {"k_min", k_min}, {"k_max", k_max}, {"k_step", k_step},
                  {"t", t},         {"members", members}, {"M", M},    {"bootstrap", bootstrap}};
    kr::FtsCurveSet cs;
    for (double k = k_min; k <= k_max + 1e-9; k += k_step) cs.K.push_back(k);
    kr::SampleSpec sampling;
    sampling.times = kr::sample_times(t);
    cs.times.assign(sampling.times.begin(), sampling.times.end());
    for (std::size_t ik = 0; ik < cs.K.size(); ++ik) {
        kr::SimParams p;
        p.K = cs.K[ik];
        p.epsilon = eps;
        p.omegas = kr::default_omegas3();
        p.n_kicks = t;
        p.basis_half_width = M;
        p.seed = ctx.seed + 101 * ik;
        kr::EnsembleResult r = kr::run_ensemble(p, kr::EnsembleSpec{members}, sampling, ctx.threads);
        cs.p2.push_back(std::move(r.member_p2));
    }
    kr::FtsOptions opt;
    opt.n_bootstrap = bootstrap;
    opt.seed = ctx.seed;
    const kr::FtsResult fr = kr::finite_time_scaling(cs, opt);

    kr::Csv lc;
    lc.header = {"K [kick]", "t [kicks]", "p2 [p^2]"};
    for (std::size_t ik = 0; ik < cs.K.size(); ++ik) {
        std::vector<double> mean(cs.times.size(), 0.0);
        for (const auto& m : cs.p2[ik])
            for (std::size_t i = 0; i < m.size(); ++i) mean[i] += m[i] / static_cast<double>(cs.p2[ik].size());
        for (std::size_t i = 0; i < cs.times.size(); ++i)
            lc.rows.push_back({cs.K[ik], cs.times[i], mean[i]});
    }
    ctx.emit("lambda_curves.csv", lc);

    kr::Csv lx;
    lx.header = {"K [kick]", "beta [1]", "branch [-1 loc +1 dif]", "ln_xi [1]"};
    for (std::size_t ik = 0; ik < cs.K.size(); ++ik)
        lx.rows.push_back({cs.K[ik], fr.beta[ik], static_cast<double>(fr.branch[ik]), fr.ln_xi[ik]});
    ctx.emit("lnxi.csv", lx);

    ctx.emit("summary.json", json{{"nu", fr.nu},
                                  {"nu_err", fr.nu_err},
                                  {"nu_loc", fr.nu_loc},
                                  {"nu_dif", fr.nu_dif},
                                  {"K_c", fr.k_c},
                                  {"K_c_crossing", fr.k_c_crossing},
                                  {"slope_loc", fr.slope_loc},
                                  {"slope_dif", fr.slope_dif},
                                  {"fit_cost", fr.fit_cost},
                                  {"bootstrap_used", fr.bootstrap_used}});
}

void run_collapse(Ctx& ctx, double K, double eps, std::vector<long> times, long t_max, int members,
                  int M) {
    ctx.command = "collapse";
    ctx.config = {{"K", K}, {"epsilon", eps}, {"times", times}, {"members", members}, {"M", M}};
    kr::SimParams p;
    p.K = K;
    p.epsilon = eps;
    p.omegas = kr::default_omegas3();
    p.n_kicks = t_max;
    p.basis_half_width = M;
    kr::SimParams q = p;
    q.seed = ctx.seed;
    kr::SampleSpec sampling;
    sampling.times = kr::sample_times(t_max);
    sampling.dist_times = times;
    q.seed = ctx.seed;
    kr::EnsembleResult r = kr::run_ensemble(q, kr::EnsembleSpec{members}, sampling, ctx.threads);

    std::vector<kr::MomentumDist> snaps;
    for (std::size_t i = 0; i < times.size(); ++i)
        snaps.push_back({static_cast<double>(times[i]), r.dist_p, r.dists[i]});
    const double l1 = kr::critical_collapse(snaps);

    kr::Csv sh;
    sh.header = {"t [kicks]", "x [p t^-1/3]", "f [prob/x]"};
    const double dp = q.kbar;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const double g = std::cbrt(snaps[i].t);
        for (std::size_t j = 0; j < r.dist_p.size(); ++j)
            sh.rows.push_back({snaps[i].t, r.dist_p[j] / g, r.dists[i][j] / dp * g});
    }
    ctx.emit("shapes.csv", sh);
    ctx.emit("summary.json", json{{"max_pairwise_L1", l1}});
}

void run_two_d_law(Ctx& ctx, double K, std::vector<double> epsilons, long t, int members, int M) {
    ctx.command = "two-d-law";
    ctx.config = {{"K", K}, {"epsilons", epsilons}, {"t", t}, {"members", members}, {"M", M}};
    kr::SampleSpec sampling;
    sampling.times = kr::sample_times(t);
    const std::vector<double> tt(sampling.times.begin(), sampling.times.end());
    std::vector<std::vector<double>> curves;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        kr::SimParams p;
        p.K = K;
        p.epsilon = epsilons[i];
        p.omegas = {kr::default_omegas3()[0]};  // d = 2: one extra frequency
        p.n_kicks = t;
        p.basis_half_width = M;
        p.seed = ctx.seed + 17 * i;
        kr::EnsembleResult r = kr::run_ensemble(p, kr::EnsembleSpec{members}, sampling, ctx.threads);
        curves.push_back(std::move(r.p2));
    }
    // Desk-scale times leave the largest-epsilon curves still creeping; report
    // the fit anyway and carry the per-curve slopes so the reader can judge.
    const kr::TwoDLawResult res = kr::two_d_localization_law(epsilons, tt, curves, false);
    kr::Csv sc;
    sc.header = {"epsilon [1]", "p2_sat [p^2]", "beta_last [1]"};
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        sc.rows.push_back({epsilons[i], res.p2_sat[i], res.beta_last[i]});
    ctx.emit("saturation.csv", sc);
    ctx.emit("summary.json", json{{"slope", res.slope},
                                  {"intercept", res.intercept},
                                  {"r2", res.r2},
                                  {"predicted_slope", kr::two_d_predicted_slope(K, 2.89)}});
}

void run_reproduce(Ctx& ctx, const std::string& fig) {
    const uint64_t seed = ctx.seed;
    if (fig == "fig3") {
        kr::SimParams p;
        p.K = 7.2;
        p.n_kicks = 200;
        p.basis_half_width = 1024;
        run_evolve(ctx, p, 300);
    } else if (fig == "fig4") {
        ctx.command = "reproduce fig4";
        struct Regime { double K, eps; int M; };
        const std::vector<Regime> regimes = {{4.0, 0.35, 512}, {6.3, 0.55, 768}, {9.0, 0.8, 1024}};
        kr::Csv series, dists;
        series.header = {"K [kick]", "epsilon [1]", "t [kicks]", "p2 [p^2]"};
        dists.header = {"K [kick]", "epsilon [1]", "p [kbar]", "Pi [prob]"};
        json fits = json::array();
        for (const auto& rg : regimes) {
            kr::SimParams p;
            p.K = rg.K;
            p.epsilon = rg.eps;
            p.omegas = kr::default_omegas3();
            p.n_kicks = 1000;
            p.basis_half_width = rg.M;
            ctx.seed = seed + static_cast<uint64_t>(rg.K * 100);
            EvolveArtifacts ea = run_evolve_core(ctx, p, 300, {});
            for (std::size_t i = 0; i < ea.res.times.size(); ++i)
                series.rows.push_back({rg.K, rg.eps, static_cast<double>(ea.res.times[i]), ea.res.p2[i]});
            for (std::size_t i = 0; i < ea.res.dist_p.size(); ++i)
                dists.rows.push_back({rg.K, rg.eps, ea.res.dist_p[i], ea.res.dists.back()[i]});
            const kr::ShapeFit fit = kr::fit_distribution_shape(ea.res.dist_p, ea.res.dists.back());
            json f = shape_fit_json(fit);
            f["K"] = rg.K;
            f["epsilon"] = rg.eps;
            f["beta_last"] = kr::last_decade_beta(
                std::vector<double>(ea.res.times.begin(), ea.res.times.end()), ea.res.p2);
            fits.push_back(f);
        }
        ctx.seed = seed;
        ctx.config = {{"figure", fig}, {"members", 300}, {"t", 1000}};
        ctx.emit("regimes_series.csv", series);
        ctx.emit("regimes_dist.csv", dists);
        ctx.emit("fits.json", fits);
    } else if (fig == "fig5-small") {
        run_anderson_map(ctx, 2.0, 2.89, 1.3, 0.1, 512, 12, 48);
        kr::Csv tm;
        tm.header = {"W [energy]", "xi [sites]", "stderr_xi [sites]"};
        for (double w : {0.5, 1.0, 2.0}) {
            const kr::XiEstimate xe = kr::transfer_matrix_xi(w, 1.0, 0.0, 2'000'000, ctx.seed + 7);
            tm.rows.push_back({w, xe.xi, xe.stderr_xi});
        }
        ctx.command = "reproduce fig5-small";
        ctx.config["figure"] = fig;
        ctx.emit("tm_xi.csv", tm);
    } else if (fig == "fig6") {
        run_phase_diagram(ctx, 3.5, 7.0, 0.5, 0.1, 0.9, 0.2, 300, 60, 512, 2.89);
        ctx.command = "reproduce fig6";
        ctx.config["figure"] = fig;
        ctx.config["reduction"] = "t=300, 60 members, coarse grid";
    } else if (fig == "fig7") {
        run_scaling(ctx, 0.8, 3.1, 5.5, 0.24, 1000, 120, 768, 0);
        ctx.command = "reproduce fig7";
        ctx.config["figure"] = fig;
        ctx.config["reduction"] = "t=1e3, 120 members, no bootstrap";
    } else if (fig == "fig8") {
        run_two_d_law(ctx, 5.34, {0.0, 0.2, 0.4, 0.6}, 1000, 200, 1024);
        ctx.command = "reproduce fig8";
        ctx.config["figure"] = fig;
        ctx.config["reduction"] = "t=1e3, 200 members";
    } else {
        throw kr::OutOfRange("figure", "fig3|fig4|fig5-small|fig6|fig7|fig8");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum kicked rotor laboratory"};
    app.require_subcommand(1);

    Ctx ctx;
    if (const char* env = std::getenv("KR_OUT_DIR")) ctx.out = env;
    app.add_option("--threads", ctx.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", ctx.seed, "ensemble seed");
    app.add_option("--out", ctx.out, "output directory (default: KR_OUT_DIR or .)");

    // classical
    auto* c_cmd = app.add_subcommand("classical", "standard map diffusion");
    double c_K = 10.0;
    int c_steps = 2000, c_traj = 20000;
    c_cmd->add_option("--K", c_K, "kick strength")->required();
    c_cmd->add_option("--steps", c_steps, "kick count");
    c_cmd->add_option("--traj", c_traj, "trajectories");

    // evolve
    auto* e_cmd = app.add_subcommand("evolve", "quantum ensemble evolution");
    std::string e_config;
    kr::SimParams e_p;
    e_p.K = 5.0;
    e_p.n_kicks = 1000;
    int e_members = 100;
    bool e_quasi = false;
    e_cmd->add_option("--config", e_config, "JSON parameter file");
    e_cmd->add_option("--K", e_p.K, "kick strength");
    e_cmd->add_option("--kbar", e_p.kbar, "effective Planck constant");
    e_cmd->add_option("--epsilon", e_p.epsilon, "modulation amplitude");
    e_cmd->add_flag("--quasiperiodic", e_quasi, "use the standard d=3 frequency pair");
    e_cmd->add_option("--kicks", e_p.n_kicks, "number of kicks");
    e_cmd->add_option("--M", e_p.basis_half_width, "momentum half-width");
    e_cmd->add_option("--members", e_members, "ensemble members");

    // anderson-map
    auto* a_cmd = app.add_subcommand("anderson-map", "lattice-model image of the rotor");
    double a_K = 2.0, a_kbar = 2.89, a_omega = 1.3, a_beta = 0.1;
    int a_sites = 512, a_rmax = 12, a_oracle = 64;
    a_cmd->add_option("--K", a_K, "kick strength")->required();
    a_cmd->add_option("--kbar", a_kbar, "effective Planck constant");
    a_cmd->add_option("--omega", a_omega, "eigenphase");
    a_cmd->add_option("--beta", a_beta, "quasimomentum");
    a_cmd->add_option("--sites", a_sites, "onsite chain length");
    a_cmd->add_option("--r-max", a_rmax, "maximum hopping range");
    a_cmd->add_option("--oracle-M", a_oracle, "oracle half-width (0 skips)");

    // phase-diagram
    auto* p_cmd = app.add_subcommand("phase-diagram", "transport exponent over (K, epsilon)");
    double p_kmin = 3.5, p_kmax = 7.0, p_kstep = 0.5, p_emin = 0.1, p_emax = 0.9, p_estep = 0.2;
    long p_t = 300;
    int p_members = 60, p_M = 512;
    double p_kbar = 2.89;
    p_cmd->add_option("--k-min", p_kmin, "");
    p_cmd->add_option("--k-max", p_kmax, "");
    p_cmd->add_option("--k-step", p_kstep, "");
    p_cmd->add_option("--eps-min", p_emin, "");
    p_cmd->add_option("--eps-max", p_emax, "");
    p_cmd->add_option("--eps-step", p_estep, "");
    p_cmd->add_option("--t", p_t, "kicks");
    p_cmd->add_option("--members", p_members, "ensemble members");
    p_cmd->add_option("--M", p_M, "momentum half-width");
    p_cmd->add_option("--kbar", p_kbar, "effective Planck constant");

    // scaling
    auto* s_cmd = app.add_subcommand("scaling", "finite-time scaling along a K path");
    double s_eps = 0.8, s_kmin = 3.1, s_kmax = 5.5, s_kstep = 0.24;
    long s_t = 1000;
    int s_members = 120, s_M = 768, s_boot = 0;
    s_cmd->add_option("--epsilon", s_eps, "modulation amplitude of the path");
    s_cmd->add_option("--k-min", s_kmin, "");
    s_cmd->add_option("--k-max", s_kmax, "");
    s_cmd->add_option("--k-step", s_kstep, "");
    s_cmd->add_option("--t", s_t, "kicks");
    s_cmd->add_option("--members", s_members, "ensemble members");
    s_cmd->add_option("--M", s_M, "momentum half-width");
    s_cmd->add_option("--bootstrap", s_boot, "member resamples for the error bar");

    // collapse
    auto* o_cmd = app.add_subcommand("collapse", "rescaled distribution collapse");
    double o_K = 6.3, o_eps = 0.55;
    std::vector<long> o_times = {300, 1000};
    int o_members = 200, o_M = 768;
    o_cmd->add_option("--K", o_K, "kick strength");
    o_cmd->add_option("--epsilon", o_eps, "modulation amplitude");
    o_cmd->add_option("--times", o_times, "snapshot kicks")->delimiter(',');
    o_cmd->add_option("--members", o_members, "ensemble members");
    o_cmd->add_option("--M", o_M, "momentum half-width");

    // reproduce
    auto* r_cmd = app.add_subcommand("reproduce", "canned desk-scale figure recipes");
    std::string r_fig;
    r_cmd->add_option("figure", r_fig, "fig3|fig4|fig5-small|fig6|fig7|fig8")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_cmd)) {
            run_classical(ctx, c_K, c_steps, c_traj);
        } else if (app.got_subcommand(e_cmd)) {
            kr::EnsembleSpec dummy;
            if (!e_config.empty()) {
                std::ifstream in(e_config);
                if (!in) throw kr::OutOfRange("config", "readable file");
                std::stringstream ss;
                ss << in.rdbuf();
                kr::from_json(ss.str(), e_p, dummy);
                for (const char* f : {"--K", "--kbar", "--epsilon", "--kicks", "--M"})
                    if (e_cmd->count(f))
                        throw kr::OutOfRange("config", std::string("exclusive with ") + f);
            }
            if (e_quasi) e_p.omegas = kr::default_omegas3();
            run_evolve(ctx, e_p, e_members);
        } else if (app.got_subcommand(a_cmd)) {
            run_anderson_map(ctx, a_K, a_kbar, a_omega, a_beta, a_sites, a_rmax, a_oracle);
        } else if (app.got_subcommand(p_cmd)) {
            run_phase_diagram(ctx, p_kmin, p_kmax, p_kstep, p_emin, p_emax, p_estep, p_t,
                              p_members, p_M, p_kbar);
        } else if (app.got_subcommand(s_cmd)) {
            run_scaling(ctx, s_eps, s_kmin, s_kmax, s_kstep, s_t, s_members, s_M, s_boot);
        } else if (app.got_subcommand(o_cmd)) {
            long t_max = 0;
            for (long t : o_times) t_max = std::max(t_max, t);
            run_collapse(ctx, o_K, o_eps, o_times, t_max, o_members, o_M);
        } else if (app.got_subcommand(r_cmd)) {
            run_reproduce(ctx, r_fig);
        }
        ctx.finish();
    } catch (const kr::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
