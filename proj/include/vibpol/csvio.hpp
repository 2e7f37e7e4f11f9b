#pragma once

// Output plumbing: deterministic CSV writers for the pinned schemas, a JSON
// run manifest (resolved config, seed, timings, file checksums), gnuplot
// quick-look scripts, and a little-endian binary trajectory dump.
//
// CSV columns are frozen interfaces:
//   dispersion.csv  k_invbohr, band, omega_meV, light_fraction
//   spectrum.csv    k_invbohr, omega_meV, A_trace, A_cavity, A_matter
//   rabi.csv        eta, tuning, rabi_harm_meV, rabi_scp_meV, rabi_vdmft_meV
// Spectral densities are reported per meV so that integrating the A columns
// against omega_meV is unit-consistent.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "scp.hpp"
#include "spectra.hpp"
#include "units.hpp"

namespace vibpol {

// ---------------------------------------------------------------------------
// checksums

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_file(const std::string& path, std::uint64_t* bytes_out = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for checksum");
    std::uint64_t h = 14695981039346656037ull, total = 0;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
        total += static_cast<std::uint64_t>(in.gcount());
    }
    if (bytes_out) *bytes_out = total;
    return h;
}

// ---------------------------------------------------------------------------
// CSV primitives

namespace detail {

// %.10g is enough to round-trip the physics while keeping files readable and
// bit-stable across runs with the same seed.
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// schema writers

inline void write_dispersion_csv(const std::string& path,
                                 const std::vector<ScpBand>& bands) {
    auto out = detail::open_out(path);
    out << "k_invbohr,band,omega_meV,light_fraction\n";
    for (const auto& row : bands)
        for (std::size_t b = 0; b < row.freqs.size(); ++b)
            out << detail::fmt_num(row.k) << ',' << b << ','
                << detail::fmt_num(ha_to_mev(row.freqs[b])) << ','
                << detail::fmt_num(row.light_fraction[b]) << '\n';
}

inline void write_spectrum_csv(const std::string& path, const SpectrumResult& sp) {
    auto out = detail::open_out(path);
    out << "k_invbohr,omega_meV,A_trace,A_cavity,A_matter\n";
    const std::size_t nw = sp.omega_grid.size();
    for (std::size_t ik = 0; ik < sp.kgrid.points.size(); ++ik) {
        for (std::size_t iw = 0; iw < nw; ++iw) {
            // densities converted from per-Hartree to per-meV
            double tr = sp.A[ik * nw + iw] / hartree_in_mev;
            double cav = 0.0, mat = 0.0;
            if (sp.nc == 2) {
                cav = sp.A_coord[(ik * nw + iw) * 2 + 0] / hartree_in_mev;
                mat = sp.A_coord[(ik * nw + iw) * 2 + 1] / hartree_in_mev;
            } else {
                mat = sp.A_coord[ik * nw + iw] / hartree_in_mev;
            }
            out << detail::fmt_num(sp.kgrid.points[ik]) << ','
                << detail::fmt_num(ha_to_mev(sp.omega_grid[iw])) << ','
                << detail::fmt_num(tr) << ',' << detail::fmt_num(cav) << ','
                << detail::fmt_num(mat) << '\n';
        }
    }
}

inline void write_rabi_csv(const std::string& path, const std::vector<RabiScan>& scans) {
    auto out = detail::open_out(path);
    out << "eta,tuning,rabi_harm_meV,rabi_scp_meV,rabi_vdmft_meV\n";
    for (const auto& scan : scans)
        for (std::size_t i = 0; i < scan.etas.size(); ++i)
            out << detail::fmt_num(scan.etas[i]) << ',' << scan.tuning << ','
                << detail::fmt_num(ha_to_mev(scan.harmonic[i])) << ','
                << detail::fmt_num(ha_to_mev(scan.scp[i])) << ','
                << detail::fmt_num(ha_to_mev(scan.vdmft[i])) << '\n';
}

// generic (omega, complex value) dump used for self-energies / hybridizations
inline void write_localfn_csv(const std::string& path, const std::vector<double>& omega,
                              const std::vector<cplx>& values,
                              const std::string& value_name) {
    if (omega.size() != values.size())
        throw ConfigError("write_localfn_csv: grid/value size mismatch");
    auto out = detail::open_out(path);
    out << "omega_meV,re_" << value_name << ",im_" << value_name << "\n";
    for (std::size_t i = 0; i < omega.size(); ++i)
        out << detail::fmt_num(ha_to_mev(omega[i])) << ','
            << detail::fmt_num(values[i].real()) << ','
            << detail::fmt_num(values[i].imag()) << '\n';
}

// ---------------------------------------------------------------------------
// run manifest

class RunManifest {
  public:
    RunManifest(const std::string& command, std::uint64_t seed, int threads) {
        j_["tool"] = "vibpol";
        j_["format_version"] = 1;
        j_["command"] = command;
        j_["seed"] = seed;
        j_["threads"] = threads;
        j_["outputs"] = nlohmann::json::array();
        j_["timings_s"] = nlohmann::json::object();
        j_["convergence"] = nlohmann::json::object();
    }

    void set_config(const std::map<std::string, std::string>& resolved) {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [k, v] : resolved) c[k] = v;
        j_["config"] = c;
    }

    void add_timing(const std::string& stage, double seconds) {
        j_["timings_s"][stage] = seconds;
    }

    void add_output(const std::string& path) {
        std::uint64_t bytes = 0;
        std::uint64_t h = fnv1a64_file(path, &bytes);
        char hex[19];
        std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(h));
        j_["outputs"].push_back({{"path", path}, {"bytes", bytes}, {"fnv1a64", hex}});
    }

    nlohmann::json& convergence() { return j_["convergence"]; }
    nlohmann::json& json() { return j_; }

    void write(const std::string& path) const {
        auto out = detail::open_out(path);
        out << j_.dump(2) << '\n';
    }

  private:
    nlohmann::json j_;
};

// ---------------------------------------------------------------------------
// gnuplot quick-look scripts

inline void write_dispersion_plot(const std::string& path, const std::string& csv) {
    auto out = detail::open_out(path);
    out << "# gnuplot quick look: polariton bands\n"
        << "set datafile separator ','\n"
        << "set xlabel 'k (1/bohr)'\n"
        << "set ylabel 'omega (meV)'\n"
        << "set key top left\n"
        << "plot '" << csv << "' using ($2==0?$1:1/0):3 with points pt 7 ps 0.4 title 'lower', \\\n"
        << "     '" << csv << "' using ($2==1?$1:1/0):3 with points pt 7 ps 0.4 title 'upper'\n"
        << "pause -1\n";
}

inline void write_spectrum_plot(const std::string& path, const std::string& csv,
                                const std::vector<double>& k_slices) {
    auto out = detail::open_out(path);
    out << "# gnuplot quick look: spectral function cuts at fixed k\n"
        << "set datafile separator ','\n"
        << "set xlabel 'omega (meV)'\n"
        << "set ylabel 'A (1/meV)'\n"
        << "set key top right\n"
        << "plot ";
    for (std::size_t i = 0; i < k_slices.size(); ++i) {
        if (i) out << ", \\\n     ";
        out << "'" << csv << "' using (abs($1-(" << detail::fmt_num(k_slices[i])
            << "))<1e-12?$2:1/0):3 with lines title 'k=" << detail::fmt_num(k_slices[i])
            << "'";
    }
    out << "\npause -1\n";
}

inline void write_rabi_plot(const std::string& path, const std::string& csv,
                            const std::vector<std::string>& tunings) {
    auto out = detail::open_out(path);
    out << "# gnuplot quick look: Rabi splitting vs coupling strength\n"
        << "set datafile separator ','\n"
        << "set xlabel 'eta'\n"
        << "set ylabel 'Rabi splitting (meV)'\n"
        << "set key top left\n"
        << "plot ";
    bool first = true;
    for (const auto& t : tunings) {
        for (int col = 3; col <= 5; ++col) {
            static const char* names[] = {"harm", "scp", "vdmft"};
            if (!first) out << ", \\\n     ";
            first = false;
            out << "'" << csv << "' using (strcol(2) eq '" << t << "' ? $1 : 1/0):" << col
                << " with linespoints title '" << t << " " << names[col - 3] << "'";
        }
    }
    out << "\npause -1\n";
}

// ---------------------------------------------------------------------------
// binary trajectory dump
//
// Layout (all integers and floats little-endian):
//   bytes 0..7    magic "VIBPOLTR"
//   u32           format version (1)
//   u32           ndof
//   u32           sampling stride (frames are stride*dt apart)
//   u32           reserved (0)
//   f64           integrator time step dt (a.u.)
//   u64           frame count
//   frames        ndof f64 positions, then ndof f64 velocities, per frame

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64(std::ostream& out, double v) {
    std::uint64_t u;
    static_assert(sizeof u == sizeof v);
    std::memcpy(&u, &v, sizeof u);
    put_u64(out, u);
}

inline std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline double get_f64(std::istream& in) {
    std::uint64_t u = get_u64(in);
    double v;
    std::memcpy(&v, &u, sizeof v);
    return v;
}

}  // namespace detail

class TrajectoryWriter {
  public:
    TrajectoryWriter(const std::string& path, std::size_t ndof, int stride, double dt)
        : out_(detail::open_out(path)), ndof_(ndof) {
        out_.write("VIBPOLTR", 8);
        detail::put_u32(out_, 1);
        detail::put_u32(out_, static_cast<std::uint32_t>(ndof));
        detail::put_u32(out_, static_cast<std::uint32_t>(stride));
        detail::put_u32(out_, 0);
        detail::put_f64(out_, dt);
        count_pos_ = out_.tellp();
        detail::put_u64(out_, 0);  // frame count, patched in finish()
    }

    void add_frame(const std::vector<double>& u, const std::vector<double>& v) {
        if (u.size() != ndof_ || v.size() != ndof_)
            throw ConfigError("trajectory frame size mismatch");
        for (double x : u) detail::put_f64(out_, x);
        for (double x : v) detail::put_f64(out_, x);
        ++n_frames_;
    }

    void finish() {
        out_.seekp(count_pos_);
        detail::put_u64(out_, n_frames_);
        out_.flush();
    }

  private:
    std::ofstream out_;
    std::size_t ndof_;
    std::ofstream::pos_type count_pos_;
    std::uint64_t n_frames_ = 0;
};

struct TrajectoryData {
    std::size_t ndof = 0;
    int stride = 1;
    double dt = 0;
    // frame-major: u[frame*ndof + i], v likewise
    std::vector<double> u, v;
    std::uint64_t n_frames = 0;
};

inline TrajectoryData read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "VIBPOLTR")
        throw ConfigError("'" + path + "' is not a trajectory dump");
    std::uint32_t version = detail::get_u32(in);
    if (version != 1)
        throw ConfigError("unsupported trajectory format version " + std::to_string(version));
    TrajectoryData d;
    d.ndof = detail::get_u32(in);
    d.stride = static_cast<int>(detail::get_u32(in));
    detail::get_u32(in);  // reserved
    d.dt = detail::get_f64(in);
    d.n_frames = detail::get_u64(in);
    d.u.resize(d.n_frames * d.ndof);
    d.v.resize(d.n_frames * d.ndof);
    for (std::uint64_t f = 0; f < d.n_frames; ++f) {
        for (std::size_t i = 0; i < d.ndof; ++i) d.u[f * d.ndof + i] = detail::get_f64(in);
        for (std::size_t i = 0; i < d.ndof; ++i) d.v[f * d.ndof + i] = detail::get_f64(in);
    }
    if (!in) throw ConfigError("truncated trajectory dump '" + path + "'");
    return d;
}

}  // namespace vibpol
