#ifndef SARTENSOR_IMAGING_HPP
#define SARTENSOR_IMAGING_HPP

#include "sartensor/sar_model.hpp"

namespace sartensor {

struct GridSpec {
    Vec3 origin;          // position of pixel (0, 0), m
    double spacing = 1.0; // m
    std::size_t nx = 64;
    std::size_t ny = 64;

    Vec3 pixel(std::size_t ix, std::size_t iy) const {
        return {origin.x + static_cast<double>(ix) * spacing,
                origin.y + static_cast<double>(iy) * spacing, origin.z};
    }
    /// Square grid centered on a point.
    static GridSpec centered(const Vec3& center, double spacing, std::size_t nx, std::size_t ny);
};

struct ImageGrid {
    GridSpec spec;
    ComplexMatrix values; // ny rows x nx cols
    Vec3 velocity;        // compensation velocity used to form the image
    std::size_t out_of_window = 0;

    double magnitude(std::size_t ix, std::size_t iy) const { return std::abs(values(iy, ix)); }
    /// Pixel of maximal magnitude.
    std::pair<std::size_t, std::size_t> peak() const;
    Vec3 peak_position() const;
};

/// Coherent backprojection with motion compensation: I(rho) = sum_j
/// D(s_j, dtau_j) exp(i w0 dtau_j), dtau_j = tau(s_j, rho + s_j v) -
/// tau(s_j, rho_o), linear interpolation along fast time. Samples whose
/// delay falls outside the fast window contribute zero and are counted.
ImageGrid backproject(const DataMatrix& d, const Scene& geometry, const GridSpec& spec,
                      const Vec3& velocity = {}, Exec exec = Exec::Parallel);

struct TracePoint {
    double s = 0.0;         // slow time
    double delta_tau = 0.0; // measured delay
};

/// Per-row peak delays of the sparse part. A row is kept when its peak
/// magnitude reaches stability_threshold times the global maximum.
std::vector<TracePoint> extract_trace(const DataMatrix& sparse, double stability_threshold = 0.2);

struct MotionEstimate {
    Vec3 position;
    Vec3 velocity;
    double loss = 0.0;
    std::vector<TracePoint> trace;
    bool reliable = false;
};

struct FitOptions {
    Vec3 position_seed;          // usually the v = 0 backprojection peak
    double v_max = 30.0;         // m/s, coarse-grid speed cap
    std::size_t speed_starts = 7;
    std::size_t angle_starts = 7;
    std::size_t max_evals_per_start = 4000;
    double loss_ceiling_scale = 0.5; // reliable when loss <= scale * npoints * delta^2
};

double huber_loss(double x, double delta);

/// Fits (position, velocity) to a measured delay trace by multi-start
/// Nelder-Mead descent on the Huber objective sum_s L_delta(y(s) -
/// f_{rho,v}(s)) with delta = 10 fast_dt. Starts cover speed in [0, v_max]
/// and heading in [0, pi/2]; the best final loss wins, ties resolved toward
/// lexicographically smaller parameters.
MotionEstimate fit_motion(const std::vector<TracePoint>& trace, const Scene& geometry,
                          const RadarConfig& cfg, const FitOptions& options,
                          Exec exec = Exec::Parallel);

} // namespace sartensor

#endif
