// Preview the three acceptance Rabi scans at half-production statistics, plus
// the undamped (mixing = 1) loop convergence record.
#include <vibpol/vibpol.hpp>
#include <cstdio>

using namespace vibpol;

int main() {
    ModelParams base = default_chain_params();

    VdmftOptions vo;
    vo.md.n_prod = 1 << 15;
    vo.md.n_traj = 128;
    vo.mixing = 1.0;
    VdmftResult vr = vdmft_loop(base, vo);
    std::printf("# vdmft: %d iters, converged=%d, dist:", vr.n_iterations,
                (int)vr.converged);
    for (const auto& l : vr.log) std::printf(" %.4f", l.dist_A);
    std::printf("\n");

    const std::vector<double>& w = vr.sigma.omega_grid;
    const double delta = vo.delta;

    std::vector<double> etas;
    for (int i = 1; i <= 10; ++i) etas.push_back(0.01 * i);

    for (const char* t : {"bare", "vdmft", "scp"}) {
        RabiScan sc = rabi_scan(base, vr.sigma, etas, t, w, delta);
        std::printf("\n## tuning %s  omega_target %.1f meV\n", t,
                    ha_to_mev(sc.omega_target));
        std::printf("eta    harm    scp     vdmft (meV)\n");
        for (std::size_t i = 0; i < etas.size(); ++i)
            std::printf("%.2f  %6.1f  %6.1f  %6.1f\n", etas[i],
                        ha_to_mev(sc.harmonic[i]), ha_to_mev(sc.scp[i]),
                        ha_to_mev(sc.vdmft[i]));
    }

    // peak dump for the rows where ripple pairing is a risk
    KGrid g;
    g.kind = GridKind::display_path;
    g.points = {0.0};
    g.weights = {0.0};
    std::vector<double> Am(w.size());
    double d0 = base.omega_m * base.omega_m;
    for (std::size_t i = 0; i < w.size(); ++i) {
        cplx z(w[i], delta);
        Am[i] = -(1.0 / pi) * (1.0 / (z * z - d0 - vr.sigma.values[i])).imag();
    }
    auto mp = find_peaks(w, Am);
    std::size_t best = 0;
    for (std::size_t i = 1; i < mp.size(); ++i)
        if (mp[i].height > mp[best].height) best = i;
    double wline = mp[best].position;
    std::printf("\n# matter line %.1f meV fwhm %.1f\n", ha_to_mev(wline),
                ha_to_mev(mp[best].fwhm));
    for (double eta : {0.01, 0.02, 0.06}) {
        ModelParams p = base;
        p.eta = eta;
        p.omega_0 = wline;
        p.validate();
        MatrixGF gf = assemble_polariton_gf(p, vr.sigma, g, w, delta);
        std::vector<double> A(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            A[i] = -(1.0 / pi) * (gf(0, i, 0, 0).imag() + gf(0, i, 1, 1).imag());
        FindPeaksOptions opt;
        opt.prominence_frac = 0.01;
        auto pk = find_peaks(w, A, opt);
        std::printf("vdmft-tuned eta %.2f peaks:", eta);
        for (const auto& q : pk)
            std::printf(" (%.1f h=%.3g f=%.1f wt=%.3g)", ha_to_mev(q.position),
                        q.height, ha_to_mev(q.fwhm), q.height * q.fwhm);
        std::printf("\n");
    }
    return 0;
}
