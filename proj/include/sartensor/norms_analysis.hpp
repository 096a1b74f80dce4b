#ifndef SARTENSOR_NORMS_ANALYSIS_HPP
#define SARTENSOR_NORMS_ANALYSIS_HPP

#include "sartensor/tensorize.hpp"

namespace sartensor {

/// Tensor norms together with the concatenation bounds on the Fourier
/// nuclear norm: lower = (sum_i |A_i|_*^2)^{1/2}, upper = sqrt(n3) sum_i
/// |A_i|_*; lower <= nuclear_fourier <= upper always holds.
struct NormReport {
    double nuclear_decoupled = 0.0;
    double nuclear_fourier = 0.0;
    double l1 = 0.0;
    double frobenius = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

enum class EtaVariant { Fourier, Decoupled, Matrix };

/// Admissible trade-off weight range for one low-rank/sparse example pair:
/// eta_max from the sparse part, eta_min from the low-rank part, and their
/// geometric mean as the operating point.
struct EtaReport {
    double eta_min = 0.0;
    double eta_max = 0.0;
    double eta_star = 0.0;
    double ratio = 0.0; // eta_max / eta_min
    EtaVariant variant = EtaVariant::Fourier;
};

/// Sum of per-panel matrix nuclear norms.
double nuclear_decoupled(const ComplexTensor3& t, Exec exec = Exec::Parallel);

/// Sum of nuclear norms of the panels after the unitary DFT along the panel
/// index; equals the nuclear norm of the block-circulant embedding.
double nuclear_fourier(const ComplexTensor3& t, Exec exec = Exec::Parallel);

/// Explicit n1 n3 x n2 n3 block-circulant matrix with block (r, c) =
/// A^((c - r) mod n3), scaled by 1/sqrt(n3). Oracle/test path only.
ComplexMatrix block_circulant_embed(const ComplexTensor3& t,
                                    std::size_t max_entries = std::size_t(1) << 26);

NormReport bounds(const ComplexTensor3& t, Exec exec = Exec::Parallel);

EtaReport eta_report(const ComplexTensor3& low, const ComplexTensor3& sparse, EtaVariant variant,
                     Exec exec = Exec::Parallel);
EtaReport eta_report(const ComplexMatrix& low, const ComplexMatrix& sparse);

/// Closed-form optimal matrix-RPCA weight for a mover with column support
/// estimate n_vt.
double matrix_eta_optimal(const RadarConfig& cfg, double n_vt);

/// Slope-dependent suppression of the inner product between two linear
/// Gaussian-pulse traces: exp(-(w^2 / 2B^2) (b - b')^2 / (b^2 + b'^2)).
double cross_term_suppression(double b_l, double b_lp, double omega, double bandwidth);

struct SweepGrid {
    std::vector<double> sub_aperture_fractions; // of the total aperture
    std::vector<double> overlaps;
    std::vector<double> alphas; // rad

    static SweepGrid paper_default();
};

struct SweepPoint {
    double alpha = 0.0;
    double sub_fraction = 0.0;
    double overlap = 0.0;
    std::size_t n1 = 0;
    std::size_t n3 = 0;
    EtaReport eta_fourier;
    EtaReport eta_decoupled;
    double nuc_fourier_low = 0.0;
    double nuc_decoupled_low = 0.0;
    double nuc_fourier_sparse = 0.0;
    double nuc_decoupled_sparse = 0.0;
    double l1_low = 0.0;
    double l1_sparse = 0.0;

    double nuc_ratio_low() const { return nuc_fourier_low / nuc_decoupled_low; }
    double nuc_ratio_sparse() const { return nuc_fourier_sparse / nuc_decoupled_sparse; }
    double l1_ratio() const { return l1_low / l1_sparse; }
};

/// Hyper-parameter sweep over (alpha, s_sub, overlap): synthesizes the
/// stationary and mover data, tensorizes both per cell, and emits every norm
/// and eta ratio. Cells whose stride rounds to zero rows at this sampling are
/// skipped (reported through the skipped counter).
std::vector<SweepPoint> sweep(const SceneTemplate& tpl, const RadarConfig& cfg,
                              const SweepGrid& grid, Exec exec = Exec::Parallel,
                              std::size_t* skipped = nullptr);

} // namespace sartensor

#endif
