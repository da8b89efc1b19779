#pragma once

// Global numerical tolerances. Operations take these as defaulted arguments
// so individual tests can tighten or relax them.
namespace qwork::tol {

inline constexpr double hermitian = 1e-12;       // |A - A†| max entry
inline constexpr double unitary = 1e-12;         // |U†U - 1| max entry
inline constexpr double trace_one = 1e-12;       // |Tr rho - 1|
inline constexpr double eig_floor = -1e-12;      // smallest admissible eigenvalue
inline constexpr double reconstruction = 1e-10;  // spectral round trip
inline constexpr double imag_residue = 1e-10;    // imaginary part of a real trace
inline constexpr double prob_sum = 1e-10;        // |sum P - 1|
inline constexpr double norm_drift = 1e-10;      // wavefunction norm over long runs

// Relative |psi|^2 threshold below which Bohmian fields are masked.
// Spectral-derivative noise divided by rho caps how small this can be while
// keeping the Hamilton-Jacobi residual below 1e-6 and the quantum force
// (third-derivative route) below 1e-6 at the mask edge.
inline constexpr double node_guard = 1e-5;

}  // namespace qwork::tol
