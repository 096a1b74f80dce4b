#ifndef SARTENSOR_TENSORIZE_HPP
#define SARTENSOR_TENSORIZE_HPP

#include "sartensor/sar_model.hpp"

namespace sartensor {

/// Sub-aperture decomposition plan. Row counts are the internal currency:
/// s_sub converts once to rows_per_panel = round(s_sub / ds) + 1 and the
/// panel stride is round((1 - overlap) * rows_per_panel).
struct TensorPlan {
    double sub_aperture_s = 0.0;
    double overlap_fraction = 0.0;
    std::size_t rows_per_panel = 0;
    std::size_t stride_rows = 0;
    std::size_t n3 = 0;
    std::size_t total_rows = 0;

    /// First source row of panel l; the last panel is anchored so it ends at
    /// the final row, and no panel may run past it.
    std::size_t panel_start(std::size_t l) const {
        const std::size_t anchor = total_rows - rows_per_panel;
        if (l + 1 == n3) return anchor;
        return std::min(l * stride_rows, anchor);
    }
    bool covers(std::size_t row, std::size_t l) const {
        const std::size_t p = panel_start(l);
        return row >= p && row < p + rows_per_panel;
    }
};

/// Builds the plan for a total aperture of s_tot seconds sampled every ds
/// seconds, with n3 = 1 + ceil((s_tot - s_sub) / ((1 - overlap) s_sub)).
TensorPlan make_plan(double s_tot, double s_sub, double overlap, double ds);

struct DataTensor {
    ComplexTensor3 tensor;
    TensorPlan plan;
    std::vector<double> slow_axis;
    std::vector<double> fast_axis;
    RadarConfig config;
};

DataTensor to_tensor(const DataMatrix& d, const TensorPlan& plan);

/// Plain tensorization of a bare matrix (no axis metadata); the panel
/// extraction shared by to_tensor.
ComplexTensor3 slice_rows(const ComplexMatrix& m, const TensorPlan& plan);

/// Index of the panel the reconstruction takes a covered row from: the
/// innermost panel, argmin_l l^2 + (l - n3 + 1)^2 over covering panels, ties
/// toward smaller l.
std::size_t innermost_panel(const TensorPlan& plan, std::size_t row);

DataMatrix reconstruct(const DataTensor& t);

/// Row-wise reconstruction of a bare tensor through the innermost rule.
ComplexMatrix merge_rows(const ComplexTensor3& t, const TensorPlan& plan);

} // namespace sartensor

#endif
