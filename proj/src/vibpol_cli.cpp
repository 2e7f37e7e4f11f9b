// Command line front end: one subcommand per experiment family.
//
//   dispersion    harmonic polariton bands across the BZ (stencil study)
//   scp           temperature-renormalized bands from self-consistent phonons
//   md-spectrum   exact classical MD spectral function at probe wavevectors
//   vdmft         matter-chain self-consistency loop (spectra + self-energy)
//   polariton     coupled cavity-matter spectra from a converged self-energy
//   rabi-scan     Rabi splitting vs coupling strength at fixed tuning
//
// Every run writes CSV data, a gnuplot quick-look script and a JSON manifest
// (resolved config, seed, timings, file checksums) into --outdir.
// Exit codes: 0 success, 1 configuration error, 2 convergence failure.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vibpol/vibpol.hpp"

namespace fs = std::filesystem;
using namespace vibpol;

namespace {

constexpr const char* kVersion = "1.0.0";

// Built-in defaults: the 440 meV / 215 meV chain at 300 K used throughout.
constexpr const char* kDefaultConfig =
    "a_angstrom = 3.0\n"
    "omega_m_mev = 440.0\n"
    "Omega_m_mev = 215.0\n"
    "g_over_omega_m3 = 4.3\n"
    "temperature_K = 300.0\n";

struct CommonArgs {
    std::string config_path;
    std::string outdir;
    long long seed = -1;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonArgs& c) {
    sub->add_option("-c,--config", c.config_path, "configuration file (INI)");
    sub->add_option("-o,--outdir", c.outdir, "output directory (default from config)");
    sub->add_option("--seed", c.seed, "override md.seed");
    sub->add_option("--threads", c.threads, "worker threads (also VIBPOL_THREADS)");
}

AppConfig load_config(const CommonArgs& c) {
    AppConfig cfg = c.config_path.empty() ? parse_config_text(kDefaultConfig)
                                          : parse_config(c.config_path);
    if (c.seed >= 0) {
        cfg.md.seed = static_cast<std::uint64_t>(c.seed);
        cfg.vdmft.md.seed = cfg.md.seed;
        cfg.resolved["md.seed"] = std::to_string(c.seed);
    }
    int threads = c.threads;
    if (threads == 0) {
        if (const char* env = std::getenv("VIBPOL_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) {
        cfg.threads = threads;
        cfg.vdmft.threads = threads;
        cfg.resolved["threads"] = std::to_string(threads);
    }
    if (!c.outdir.empty()) {
        cfg.outdir = c.outdir;
        cfg.resolved["output.dir"] = c.outdir;
    }
    fs::create_directories(cfg.outdir);
    return cfg;
}

std::string opath(const AppConfig& cfg, const std::string& name) {
    return (fs::path(cfg.outdir) / name).string();
}

class StageClock {
  public:
    void start() { t0_ = std::chrono::steady_clock::now(); }
    double stop() { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

  private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::vector<double> parse_eta_list(const std::string& s) {
    std::vector<double> out;
    auto colon = std::count(s.begin(), s.end(), ':');
    if (colon == 2) {
        double a, b, step;
        char c1, c2;
        std::istringstream in(s);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw ConfigError("cannot parse eta range '" + s + "' (want start:stop:step)");
        for (double x = a; x <= b + 0.5 * step; x += step) out.push_back(x);
        return out;
    }
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("empty eta list '" + s + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

std::vector<double> default_omega_grid(const AppConfig& cfg) {
    double wmax = cfg.vdmft.omega_max > 0 ? cfg.vdmft.omega_max : 3.0 * cfg.model.omega_m;
    return make_omega_grid(cfg.vdmft.n_omega, wmax);
}

ModelParams matter_copy(const ModelParams& p) {
    ModelParams m = p;
    m.eta = 0.0;       // the self-consistency runs on the bare matter chain
    m.omega_0 = p.omega_m;
    return m;
}

// Self-energy on file <-> SelfEnergy round trip for --sigma reuse.
SelfEnergy load_sigma_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sigma file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty sigma file '" + path + "'");
    SelfEnergy sig;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double w, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &w, &re, &im) != 3)
            throw ConfigError("sigma file '" + path + "' line " + std::to_string(lineno) +
                              ": expected omega_meV,re,im");
        sig.omega_grid.push_back(mev_to_ha(w));
        sig.values.emplace_back(re, im);
    }
    if (sig.omega_grid.empty()) throw ConfigError("sigma file '" + path + "' has no rows");
    return sig;
}

// Matter self-energy provider shared by polariton and rabi-scan: either load
// a previous run's sigma.csv or run the self-consistency loop here.
struct SigmaSource {
    SelfEnergy sigma;
    bool from_file = false;
    bool converged = true;
    int n_iterations = 0;
    double seconds = 0.0;
};

SigmaSource obtain_sigma(const AppConfig& cfg, const std::string& sigma_path,
                         const std::vector<double>& omega_grid) {
    SigmaSource src;
    if (!sigma_path.empty()) {
        src.sigma = load_sigma_csv(sigma_path);
        src.from_file = true;
        if (src.sigma.omega_grid.size() != omega_grid.size() ||
            std::abs(src.sigma.omega_grid.back() - omega_grid.back()) > 1e-12)
            throw ConfigError("sigma file grid does not match vdmft.n_omega/omega_max");
        return src;
    }
    StageClock clock;
    clock.start();
    VdmftResult res = vdmft_loop(matter_copy(cfg.model), cfg.vdmft);
    src.seconds = clock.stop();
    src.sigma = res.sigma;
    src.converged = res.converged;
    src.n_iterations = res.n_iterations;
    return src;
}

nlohmann::json peaks_json(const std::vector<Peak>& peaks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pk : peaks)
        arr.push_back({{"omega_mev", ha_to_mev(pk.position)},
                       {"fwhm_mev", ha_to_mev(pk.fwhm)},
                       {"height", pk.height},
                       {"fitted", pk.fitted}});
    return arr;
}

// ---------------------------------------------------------------------------

int run_dispersion(const CommonArgs& common, const std::string& orders_arg, int nk) {
    AppConfig cfg = load_config(common);
    std::vector<int> orders = orders_arg.empty() ? std::vector<int>{cfg.model.stencil_order}
                                                 : parse_int_list(orders_arg);
    RunManifest man("dispersion", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);
    StageClock clock;
    clock.start();

    KGrid display = display_path_bz(nk, cfg.model.a);
    std::vector<std::string> csvs;
    for (int o : orders) {
        ModelParams p = cfg.model;
        p.stencil_order = o;
        p.validate();
        PhononBasis basis = phonon_basis(p, display);
        std::vector<ScpBand> rows;
        rows.reserve(display.size());
        for (std::size_t ik = 0; ik < display.size(); ++ik) {
            ScpBand b;
            b.k = display.points[ik];
            b.freqs = {basis.freqs[ik][0], basis.freqs[ik][1]};
            b.light_fraction = {basis.light_fraction[ik][0], basis.light_fraction[ik][1]};
            rows.push_back(std::move(b));
        }
        std::string name = orders.size() == 1 ? "dispersion.csv"
                                              : "dispersion_o" + std::to_string(o) + ".csv";
        write_dispersion_csv(opath(cfg, name), rows);
        csvs.push_back(name);
    }
    man.add_timing("solve", clock.stop());

    write_dispersion_plot(opath(cfg, "dispersion.gp"), csvs.front());
    for (const auto& name : csvs) man.add_output(opath(cfg, name));
    man.add_output(opath(cfg, "dispersion.gp"));
    man.write(opath(cfg, "manifest.json"));
    return 0;
}

int run_scp(const CommonArgs& common, int nk) {
    AppConfig cfg = load_config(common);
    RunManifest man("scp", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);
    StageClock clock;
    clock.start();

    const bool coupled = cfg.model.eta != 0.0;
    KGrid grid = uniform_bz_grid(cfg.model.n_sites, cfg.model.a);
    ScpResult res = scp_solve(cfg.model, grid, 1e-10, 0.5, 500, coupled);
    KGrid display = display_path_bz(nk, cfg.model.a);
    auto bands = scp_dispersion(cfg.model, res, display);
    man.add_timing("solve", clock.stop());

    write_dispersion_csv(opath(cfg, "dispersion.csv"), bands);
    write_dispersion_plot(opath(cfg, "dispersion.gp"), "dispersion.csv");

    auto& conv = man.convergence();
    conv["converged"] = res.converged;
    conv["n_iterations"] = res.residuals.size();
    conv["final_residual"] = res.residuals.empty() ? 0.0 : res.residuals.back();
    conv["mean_square_disp_bohr2"] = res.mean_square_disp;
    conv["static_shift_ha2"] = res.static_shift;
    conv["omega_gamma_mev"] = ha_to_mev(res.freq(0, coupled ? 1 : 0));
    man.add_output(opath(cfg, "dispersion.csv"));
    man.add_output(opath(cfg, "dispersion.gp"));
    man.write(opath(cfg, "manifest.json"));
    return 0;
}

int run_md_spectrum(const CommonArgs& common, const std::string& probes_arg, bool dump_traj) {
    AppConfig cfg = load_config(common);
    RunManifest man("md-spectrum", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);

    std::vector<int> probes = probes_arg.empty() ? std::vector<int>{0, cfg.model.n_sites / 2}
                                                 : parse_int_list(probes_arg);
    const auto omega_grid = default_omega_grid(cfg);
    const double delta = cfg.vdmft.delta;
    const std::size_t n = static_cast<std::size_t>(cfg.model.n_sites);

    StageClock clock;
    clock.start();
    CorrelationEstimate est;
    std::vector<TrajectoryStats> stats;
    const bool coupled = cfg.model.eta != 0.0;
    if (coupled) {
        CoupledChain sys(cfg.model);
        check_dt(cfg.md.dt, sys.omega_max());  // photon chain is stiff: needs small md.dt_fs
        est = run_correlation_ensemble(sys, cfg.md, cfg.model.kBT(), n, {0, n}, probes,
                                       cfg.model.a, cfg.threads, &stats);
    } else {
        MatterChain sys(cfg.model);
        est = run_correlation_ensemble(sys, cfg.md, cfg.model.kBT(), n, {0}, probes,
                                       cfg.model.a, cfg.threads, &stats);
    }
    man.add_timing("md", clock.stop());

    clock.start();
    MatrixGF gf = gf_from_correlation(est, omega_grid, delta, cfg.md.window, cfg.md.tau_damp);
    SpectrumResult sp = spectral_function(gf, SpectrumMethod::md);
    man.add_timing("analysis", clock.stop());

    write_spectrum_csv(opath(cfg, "spectrum.csv"), sp);
    write_spectrum_plot(opath(cfg, "spectrum.gp"), "spectrum.csv", sp.kgrid.points);

    if (dump_traj) {
        // one extra trajectory (seed stream after the ensemble) dumped verbatim
        std::size_t ndof = coupled ? 2 * n : n;
        TrajectoryWriter tw(opath(cfg, "trajectory.bin"), ndof, cfg.md.stride, cfg.md.dt);
        auto rec = [&](std::size_t, const std::vector<double>& u, const std::vector<double>& v) {
            tw.add_frame(u, v);
        };
        if (coupled)
            run_trajectory(CoupledChain(cfg.model), cfg.md, cfg.model.kBT(),
                           static_cast<std::uint32_t>(cfg.md.n_traj), rec);
        else
            run_trajectory(MatterChain(cfg.model), cfg.md, cfg.model.kBT(),
                           static_cast<std::uint32_t>(cfg.md.n_traj), rec);
        tw.finish();
        man.add_output(opath(cfg, "trajectory.bin"));
    }

    auto& conv = man.convergence();
    int warn = 0;
    for (const auto& st : stats) warn += st.drift_warning ? 1 : 0;
    conv["n_traj"] = est.n_traj;
    conv["drift_warnings"] = warn;
    for (std::size_t ik = 0; ik < sp.kgrid.points.size(); ++ik) {
        nlohmann::json probe;
        probe["k_invbohr"] = sp.kgrid.points[ik];
        probe["peaks"] = peaks_json(sp.peaks[ik]);
        probe["first_moment_matter"] = spectral_first_moment(sp, ik, sp.nc - 1);
        conv["probes"].push_back(probe);
    }
    man.add_output(opath(cfg, "spectrum.csv"));
    man.add_output(opath(cfg, "spectrum.gp"));
    man.write(opath(cfg, "manifest.json"));
    return 0;
}

int run_vdmft(const CommonArgs& common, const std::string& probes_arg) {
    AppConfig cfg = load_config(common);
    RunManifest man("vdmft", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);

    VdmftOptions opt = cfg.vdmft;
    if (!probes_arg.empty()) opt.probe_k = parse_int_list(probes_arg);
    ModelParams matter = matter_copy(cfg.model);

    StageClock clock;
    clock.start();
    VdmftResult res = vdmft_loop(matter, opt);
    man.add_timing("loop", clock.stop());

    clock.start();
    // spectra on the non-negative half of the BZ (the bands are even in k)
    const auto omega_grid = res.sigma.omega_grid;
    KGrid half;
    half.kind = GridKind::display_path;
    for (int m = 0; m <= matter.n_sites / 2; ++m) {
        half.points.push_back(2.0 * pi * m / (matter.n_sites * matter.a));
        half.weights.push_back(0.0);
    }
    MatrixGF gf = lattice_gf_matter(matter, half, res.sigma, omega_grid, opt.delta);
    SpectrumResult sp = spectral_function(gf, SpectrumMethod::vdmft);
    man.add_timing("analysis", clock.stop());

    write_spectrum_csv(opath(cfg, "spectrum.csv"), sp);
    write_spectrum_plot(opath(cfg, "spectrum.gp"), "spectrum.csv",
                        {half.points.front(), half.points.back()});
    write_localfn_csv(opath(cfg, "sigma.csv"), res.sigma.omega_grid, res.sigma.values,
                      "sigma_ha2");

    auto& conv = man.convergence();
    conv["converged"] = res.converged;
    conv["n_iterations"] = res.n_iterations;
    conv["scp_static_shift_ha2"] = res.scp_static_shift;
    conv["sigma_noise_floor_ha2"] = res.sigma.noise_floor;
    for (const auto& lg : res.log)
        conv["iterations"].push_back({{"iteration", lg.iteration},
                                      {"dist_A", lg.dist_A},
                                      {"max_dsigma_ha2", lg.max_dsigma},
                                      {"bath_recon_error", lg.bath_recon_error},
                                      {"sigma_noise_floor_ha2", lg.sigma_noise_floor},
                                      {"sigma_clipped_ha2", lg.sigma_clipped},
                                      {"drift_warnings", lg.drift_warnings},
                                      {"impurity_seconds", lg.impurity_seconds}});
    std::vector<int> probes = opt.probe_k.empty() ? std::vector<int>{0, matter.n_sites / 2}
                                                  : opt.probe_k;
    for (int m : probes) {
        if (m < 0 || m > matter.n_sites / 2) continue;
        nlohmann::json probe;
        probe["k_index"] = m;
        probe["peaks"] = peaks_json(sp.peaks[static_cast<std::size_t>(m)]);
        conv["probes"].push_back(probe);
    }
    man.add_output(opath(cfg, "spectrum.csv"));
    man.add_output(opath(cfg, "spectrum.gp"));
    man.add_output(opath(cfg, "sigma.csv"));
    man.write(opath(cfg, "manifest.json"));
    return res.converged ? 0 : 2;
}

int run_polariton(const CommonArgs& common, double eta_arg, const std::string& tuning,
                  const std::string& sigma_path, int nk, bool full_bz) {
    AppConfig cfg = load_config(common);
    RunManifest man("polariton", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);

    const auto omega_grid = default_omega_grid(cfg);
    const double delta = cfg.vdmft.delta;
    ModelParams matter = matter_copy(cfg.model);

    SigmaSource src = obtain_sigma(cfg, sigma_path, omega_grid);
    if (src.seconds > 0) man.add_timing("vdmft", src.seconds);

    // cavity tuning target, measured from this run's own solvers
    double target = 0.0;
    if (tuning == "bare") {
        target = matter.omega_m;
    } else if (tuning == "scp") {
        ScpResult s = scp_solve(matter, uniform_bz_grid(matter.n_sites, matter.a));
        target = std::sqrt(matter.omega_m * matter.omega_m + s.static_shift);
    } else if (tuning == "vdmft") {
        std::vector<double> A(omega_grid.size());
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
            cplx z(omega_grid[iw], delta);
            A[iw] = -(1.0 / pi) *
                    (1.0 / (z * z - matter.omega_m * matter.omega_m - src.sigma.values[iw])).imag();
        }
        auto peaks = find_peaks(omega_grid, A);
        if (peaks.empty()) throw ConvergenceError("polariton: no matter peak at Gamma");
        std::size_t best = 0;
        for (std::size_t i = 1; i < peaks.size(); ++i)
            if (peaks[i].height > peaks[best].height) best = i;
        target = peaks[best].position;
    } else {
        throw ConfigError("polariton: unknown tuning '" + tuning + "'");
    }

    ModelParams p = cfg.model;
    p.eta = eta_arg >= 0 ? eta_arg : cfg.model.eta;
    p.omega_0 = target;
    p.validate();

    StageClock clock;
    clock.start();
    KGrid display = full_bz ? display_path_bz(nk, p.a)
                            : display_path_gamma(nk, p.omega_0 / p.c);
    MatrixGF gf = assemble_polariton_gf(p, src.sigma, display, omega_grid, delta);
    SpectrumResult sp = spectral_function(gf, SpectrumMethod::vdmft);
    man.add_timing("assembly", clock.stop());

    write_spectrum_csv(opath(cfg, "spectrum.csv"), sp);
    write_spectrum_plot(opath(cfg, "spectrum.gp"), "spectrum.csv",
                        {display.points.front(), display.points.back()});

    auto& conv = man.convergence();
    conv["sigma_from_file"] = src.from_file;
    if (!src.from_file) {
        conv["vdmft_converged"] = src.converged;
        conv["vdmft_iterations"] = src.n_iterations;
    }
    conv["eta"] = p.eta;
    conv["tuning"] = tuning;
    conv["omega_0_mev"] = ha_to_mev(p.omega_0);
    conv["gamma_peaks"] = peaks_json(sp.peaks.front());
    man.add_output(opath(cfg, "spectrum.csv"));
    man.add_output(opath(cfg, "spectrum.gp"));
    man.write(opath(cfg, "manifest.json"));
    return src.converged ? 0 : 2;
}

int run_rabi_scan(const CommonArgs& common, const std::string& etas_arg,
                  const std::string& tuning_arg, const std::string& sigma_path) {
    AppConfig cfg = load_config(common);
    RunManifest man("rabi-scan", cfg.md.seed, cfg.threads);
    man.set_config(cfg.resolved);

    std::vector<double> etas = parse_eta_list(etas_arg);
    std::vector<std::string> tunings;
    if (tuning_arg == "all") tunings = {"bare", "scp", "vdmft"};
    else tunings = {tuning_arg};

    const auto omega_grid = default_omega_grid(cfg);
    ModelParams matter = matter_copy(cfg.model);
    SigmaSource src = obtain_sigma(cfg, sigma_path, omega_grid);
    if (src.seconds > 0) man.add_timing("vdmft", src.seconds);

    StageClock clock;
    clock.start();
    std::vector<RabiScan> scans;
    for (const auto& t : tunings)
        scans.push_back(rabi_scan(matter, src.sigma, etas, t, omega_grid, cfg.vdmft.delta));
    man.add_timing("scan", clock.stop());

    write_rabi_csv(opath(cfg, "rabi.csv"), scans);
    write_rabi_plot(opath(cfg, "rabi.gp"), "rabi.csv", tunings);

    auto& conv = man.convergence();
    conv["sigma_from_file"] = src.from_file;
    if (!src.from_file) {
        conv["vdmft_converged"] = src.converged;
        conv["vdmft_iterations"] = src.n_iterations;
    }
    for (const auto& scan : scans)
        conv["tunings"].push_back(
            {{"tuning", scan.tuning}, {"omega_0_mev", ha_to_mev(scan.omega_target)}});
    man.add_output(opath(cfg, "rabi.csv"));
    man.add_output(opath(cfg, "rabi.gp"));
    man.write(opath(cfg, "manifest.json"));
    return src.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anharmonic vibrational polaritons on the coupled cavity-matter chain"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs common;
    std::string orders, probes, etas = "0.0:0.1:0.01", tuning = "vdmft", sigma_path;
    int nk = 401, nk_pol = 161;
    bool dump_traj = false, full_bz = false;
    double eta_arg = -1.0;

    auto* disp = app.add_subcommand("dispersion", "harmonic bands across the BZ");
    add_common(disp, common);
    disp->add_option("--stencil-orders", orders, "comma list, e.g. 2,4,6,8");
    disp->add_option("--nk", nk, "display wavevector count");

    auto* scp = app.add_subcommand("scp", "self-consistent phonon bands");
    add_common(scp, common);
    scp->add_option("--nk", nk, "display wavevector count");

    auto* mds = app.add_subcommand("md-spectrum", "classical MD spectral function");
    add_common(mds, common);
    mds->add_option("--probes", probes, "comma list of k indices m (k = 2 pi m / N a)");
    mds->add_flag("--dump-traj", dump_traj, "also write one binary trajectory");

    auto* vd = app.add_subcommand("vdmft", "matter-chain self-consistency loop");
    add_common(vd, common);
    vd->add_option("--probes", probes, "comma list of k indices for convergence probes");

    auto* pol = app.add_subcommand("polariton", "coupled spectra from a self-energy");
    add_common(pol, common);
    pol->add_option("--eta", eta_arg, "coupling strength (default: config eta)");
    pol->add_option("--tuning", tuning, "bare | scp | vdmft");
    pol->add_option("--sigma", sigma_path, "reuse sigma.csv from a previous vdmft run");
    pol->add_option("--nk", nk_pol, "display wavevector count");
    pol->add_flag("--full-bz", full_bz, "display path across the full BZ, not near Gamma");

    auto* rabi = app.add_subcommand("rabi-scan", "Rabi splitting vs eta");
    add_common(rabi, common);
    rabi->add_option("--etas", etas, "start:stop:step or comma list");
    rabi->add_option("--tuning", tuning, "bare | scp | vdmft | all");
    rabi->add_option("--sigma", sigma_path, "reuse sigma.csv from a previous vdmft run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (disp->parsed()) return run_dispersion(common, orders, nk);
        if (scp->parsed()) return run_scp(common, nk);
        if (mds->parsed()) return run_md_spectrum(common, probes, dump_traj);
        if (vd->parsed()) return run_vdmft(common, probes);
        if (pol->parsed()) return run_polariton(common, eta_arg, tuning, sigma_path, nk_pol, full_bz);
        if (rabi->parsed()) return run_rabi_scan(common, etas, tuning, sigma_path);
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const InstabilityError& e) {
        std::cerr << "instability: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
