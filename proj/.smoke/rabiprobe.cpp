// Probe: why does the vdmft-tuned Rabi scan report splittings that shrink
// with eta, and the bare-tuned scan report none at all?  Dump every peak of
// the Gamma-point polariton trace at two prominence floors.
#include <vibpol/vibpol.hpp>
#include <cstdio>

using namespace vibpol;

int main() {
    ModelParams base = default_chain_params();

    VdmftOptions vo;
    vo.md.n_prod = 1 << 14;
    vo.md.n_traj = 32;
    vo.mixing = 1.0;
    VdmftResult vr = vdmft_loop(base, vo);
    std::printf("# cheap vdmft: %d iters, converged=%d\n", vr.n_iterations,
                (int)vr.converged);
    for (const auto& l : vr.log) std::printf("#   dist_A %.4f\n", l.dist_A);

    const std::vector<double>& w = vr.sigma.omega_grid;
    const double delta = vo.delta;

    // matter line position from the probe trace
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
    std::printf("# matter line %.1f meV fwhm %.1f\n", ha_to_mev(wline),
                ha_to_mev(mp[best].fwhm));

    KGrid g;
    g.kind = GridKind::display_path;
    g.points = {0.0};
    g.weights = {0.0};

    struct Tune { const char* name; double w0; };
    ScpResult scp = scp_solve(base, uniform_bz_grid(base.n_sites, base.a));
    Tune tunes[] = {
        {"bare", base.omega_m},
        {"vdmft", wline},
        {"scp", std::sqrt(base.omega_m * base.omega_m + scp.static_shift)},
    };

    for (const Tune& t : tunes) {
        std::printf("\n## tuning %s  omega_0 %.1f meV\n", t.name, ha_to_mev(t.w0));
        for (double eta : {0.02, 0.06, 0.08, 0.10}) {
            ModelParams p = base;
            p.eta = eta;
            p.omega_0 = t.w0;
            p.validate();
            MatrixGF gf = assemble_polariton_gf(p, vr.sigma, g, w, delta);
            std::vector<double> A(w.size());
            for (std::size_t i = 0; i < w.size(); ++i)
                A[i] = -(1.0 / pi) * (gf(0, i, 0, 0).imag() + gf(0, i, 1, 1).imag());
            for (double prom : {0.05, 0.01}) {
                FindPeaksOptions opt;
                opt.prominence_frac = prom;
                auto pk = find_peaks(w, A, opt);
                double split = rabi_splitting_vdmft(w, A, opt);
                std::printf("eta %.2f prom %.2f split %6.1f meV  peaks:", eta,
                            prom, ha_to_mev(split));
                for (const auto& q : pk)
                    std::printf(" (%.1f h=%.3g f=%.1f)", ha_to_mev(q.position),
                                q.height, ha_to_mev(q.fwhm));
                std::printf("\n");
            }
        }
    }
    return 0;
}
