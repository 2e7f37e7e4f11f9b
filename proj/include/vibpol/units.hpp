#pragma once

// Unit system: atomic units internally (hbar = 1, mass-weighted coordinates).
// Inputs/outputs use meV, Angstrom, Kelvin, fs; conversions live here and
// nowhere else.

namespace vibpol {

inline constexpr double hartree_in_mev = 27211.386;
inline constexpr double bohr_in_angstrom = 0.529177;
inline constexpr double kB_ha_per_K = 3.1668115e-6;
inline constexpr double au_time_in_fs = 0.0241888;
inline constexpr double speed_of_light_au = 137.035999;
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double mev_to_ha(double mev) { return mev / hartree_in_mev; }
inline constexpr double ha_to_mev(double ha) { return ha * hartree_in_mev; }
inline constexpr double angstrom_to_bohr(double aa) { return aa / bohr_in_angstrom; }
inline constexpr double bohr_to_angstrom(double b) { return b * bohr_in_angstrom; }
inline constexpr double fs_to_au(double fs) { return fs / au_time_in_fs; }
inline constexpr double au_to_fs(double t) { return t * au_time_in_fs; }
inline constexpr double kelvin_to_kBT_ha(double T) { return kB_ha_per_K * T; }

}  // namespace vibpol
