#pragma once

#include <functional>
#include <string>

#include "spinsurf/dirac.hpp"
#include "spinsurf/spinor.hpp"

namespace spinsurf {

/// Meaning of X^⊤ in ω and K. `transpose` is the default: it is the
/// reading under which the transformed spinors solve the Dirac equation on
/// the test data; `conjugate_transpose` is kept for comparison.
enum class TransposeMode { transpose, conjugate_transpose };

Mat2 apply_transpose(const Mat2& m, TransposeMode mode);

/// Pointwise ω = -i Φ^⊤ P1 Ψ dz + i Φ^⊤ P2 Ψ dz̄ with P1 = diag(1,0),
/// P2 = diag(0,1).
Mat2 omega_dz(const Mat2& Phi, const Mat2& Psi, TransposeMode mode = TransposeMode::transpose);
Mat2 omega_dzbar(const Mat2& Phi, const Mat2& Psi, TransposeMode mode = TransposeMode::transpose);

/// Pointwise dt coefficient of ω1:
/// [Φ_z^⊤ P1 + Φ_z̄^⊤ P2] Ψ - Φ^⊤ [P1 Ψ_z + P2 Ψ_z̄].
Mat2 omega1_at(const Mat2& Phi, const Mat2& Phi_z, const Mat2& Phi_zbar, const Mat2& Psi, const Mat2& Psi_z,
               const Mat2& Psi_zbar, TransposeMode mode = TransposeMode::transpose);

MatrixForm omega(const QuatField& Phi, const QuatField& Psi, TransposeMode mode = TransposeMode::transpose);
/// Γω, the integrand of S.
MatrixForm gamma_omega(const QuatField& Phi, const QuatField& Psi, TransposeMode mode = TransposeMode::transpose);

/// ω1 on a grid with derivatives taken by `scheme`.
MatrixField omega1(const QuatField& Phi, const QuatField& Psi, Scheme scheme = Scheme::central2,
                   TransposeMode mode = TransposeMode::transpose);

/// Γ∫ω plus a constant, with its provenance.
struct SMatrix {
  MatrixField S;
  Mat2 constant{};
  NodeIndex base{};
  double time = 0.0;
  bool time_augmented = false;
  double loop_defect = 0.0;
};

struct BuildOptions {
  std::optional<NodeIndex> base;  ///< defaults to the node nearest z = 0
  Mat2 constant{};
  TransposeMode mode = TransposeMode::transpose;
  /// Max loop defect relative to max(1, max|S|).
  double loop_tol = 1e-2;
};

/// S(Φ,Ψ) = Γ∫ω(Φ,Ψ) from the base node plus the constant. Throws
/// NotClosedError when the x-first and y-first path integrals disagree.
SMatrix build_S(const QuatField& Phi, const QuatField& Psi, const BuildOptions& opts = {});

/// Spinor value (ψ1, ψ2) at (z, t).
using SpinorSource = std::function<std::array<cplx, 2>(cplx z, double t)>;

struct TimedOptions {
  BuildOptions build;
  double t0 = 0.0;
  int time_intervals = 64;  ///< Simpson intervals for ∫ω1 dt (made even)
  double fd_step = 1e-3;    ///< step of the fourth-order differences at the base
};

/// S(Φ,Ψ)(z, z̄, t) = Γ∫ω + Γ∫ω1: ω1 is integrated in t at the base point
/// from t0 to t, then ω in space at time t.
SMatrix build_S_timed(const SpinorSource& phi, const SpinorSource& psi, const Grid2D& grid, double t,
                      const TimedOptions& opts = {});

/// Samples a source on a grid at time t.
SpinorField sample_spinor(const SpinorSource& src, const Grid2D& grid, double t);

struct NormalizedPair {
  SMatrix S_phi_psi;  ///< S(Φ0, Ψ0), unchanged
  SMatrix S_psi_phi;  ///< S(Ψ0, Φ0) with the fitted constant
  double residual = 0.0;
};

/// Fits the constant of S(Ψ0,Φ0) so that ΓS⁻¹(Φ0,Ψ0)Γ = (S⁻¹(Ψ0,Φ0))^⊤,
/// equivalently S(Ψ0,Φ0) = Γ S(Φ0,Ψ0)^⊤ Γ, in the least-squares sense over
/// non-singular nodes. The relative residual max|S(Ψ0,Φ0) - ΓS^⊤Γ| /
/// max(1, max|S|) is reported; above `tol` NormalizationError is thrown.
NormalizedPair normalize_S_pair(const SMatrix& S_phi_psi, const SMatrix& S_psi_phi,
                                TransposeMode mode = TransposeMode::transpose, double tol = 1e-8);

/// W and a read from K = [[iW̄, a], [-ā, -iW]].
struct KData {
  ComplexField W;
  ComplexField a;
  double pattern_residual = 0.0;
};

/// K(Φ,Ψ) = Ψ S⁻¹ Γ Φ^⊤ Γ⁻¹. Nodes with |det S| ≤ 1e-12·max|det S| are
/// flagged. A block-pattern residual above 1e-10 (relative) is a bug and
/// throws NumericalError.
KData k_matrix(const QuatField& Psi, const MatrixField& S, const QuatField& Phi,
               TransposeMode mode = TransposeMode::transpose);

/// Transformed solutions
///   Ψ̃ = Ψ - Ψ0 S⁻¹(Φ0,Ψ0) S(Φ0,Ψ),  Φ̃ = Φ - Φ0 S⁻¹(Ψ0,Φ0) S(Ψ0,Φ).
/// S(Φ0,Ψ) and S(Ψ0,Φ) are built over the same base node with constants
/// c_psi and c_phi.
struct MoutardSpinors {
  MatrixField Psi;
  MatrixField Phi;
};

MoutardSpinors moutard_spinors(const QuatField& Psi0, const QuatField& Phi0, const NormalizedPair& pair,
                               const QuatField& Psi, const QuatField& Phi, const Mat2& c_psi = {},
                               const Mat2& c_phi = {}, TransposeMode mode = TransposeMode::transpose);

/// Ψ0 S⁻¹(Φ0,Ψ0) and Φ0 S⁻¹(Ψ0,Φ0): spinors of the inverted surface.
MoutardSpinors inverted_spinors(const QuatField& Psi0, const QuatField& Phi0, const NormalizedPair& pair);

/// First column of a matrix field as a spinor.
SpinorField spinor_column(const MatrixField& m);

/// (Ũ, Ṽ) = (U + W, V + 2i ∂a).
struct DsiiPair {
  ComplexField U;
  ComplexField V;
};
DsiiPair moutard_dsii(const ComplexField& U, const ComplexField& V, const KData& k, Scheme scheme = Scheme::central2);

/// CSV with columns ix, iy, reW, imW, rea, ima.
void write_kdata_csv(const std::filesystem::path& path, const KData& k);
/// JSON dump of an SMatrix (grid, constant, entries).
std::string smatrix_json(const SMatrix& s);

}  // namespace spinsurf
