// Analytic matrix elements of V' = (A - a_osc) beta^2 + B beta^3 cos 3gamma +
// C beta^4 in the oscillator bases, and assembly of H = H_osc + V' as a band
// matrix.
#pragma once

#include "gcm/banded_matrix.hpp"
#include "gcm/basis.hpp"
#include "gcm/model.hpp"

namespace gcm {

/// Radial factor <bra| beta^power |ket>, power in {2, 3, 4}. Powers 2 and 4
/// couple equal m with |dn| <= 1, 2; power 3 couples m to m + 1 (in either
/// order) with n_upper - n_lower in {0, -1, -2, -3}. Everything else is 0.
/// The 5D elements follow from the 2D ones with m -> mu + 1/2.
double radial_element(int power, BasisState bra, BasisState ket, const BasisSpec& spec);

/// <m_bra| cos 3gamma |m_ket>; nonzero only for |m_bra - m_ket| = 1.
double angular_element(QuantScheme scheme, int m_bra, int m_ket);

/// H = H_osc + V' in the basis enumerate_basis(spec). Throws
/// std::invalid_argument for a non-positive a_osc.
BandedSymmetricMatrix assemble(const ModelParams& params, const BasisSpec& spec);

/// Fixed-m block of H with radial quanta n = 0 .. n_count - 1; spec.dimension
/// is ignored. For B = 0 the angular quantum number is conserved and these
/// blocks are the whole Hamiltonian.
BandedSymmetricMatrix assemble_m_block(const ModelParams& params, const BasisSpec& spec,
                                       int m_ang, std::size_t n_count);

/// Trace of assemble(params, spec), from diagonal elements only.
double hamiltonian_trace(const ModelParams& params, const BasisSpec& spec);

struct AoscOptimization {
  double a_osc = 0.0;        // c_shift * trace_argmin
  double trace_argmin = 0.0;
  double trace_min = 0.0;
  int evaluations = 0;
};

inline constexpr double kDefaultCShift = 0.6;

/// Golden-section search of the trace minimum over log a_osc in
/// [1e-6, 1e6] * (|A| + |C|), scaled by c_shift in (0, 1]. Throws
/// std::runtime_error when the minimum sits on the bracket edge.
AoscOptimization optimize_a_osc(const ModelParams& params, const BasisSpec& spec_template,
                                double c_shift = kDefaultCShift, double rel_tol = 1e-4);

}  // namespace gcm
