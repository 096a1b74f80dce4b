#ifndef SARTENSOR_SAR_MODEL_HPP
#define SARTENSOR_SAR_MODEL_HPP

#include "sartensor/numerics.hpp"
#include "sartensor/types.hpp"

#include <cstdint>

namespace sartensor {

/// Acquisition parameters for the baseband, down-ramped data matrix. Slow
/// times are s_j = j * pulse_interval for j = -n/2..n/2; fast times span
/// [fast_t_min, fast_t_max] in steps of fast_dt.
struct RadarConfig {
    double carrier_omega0 = 2.0 * 3.14159265358979323846 * 9.6e9; // rad/s
    double bandwidth = 1.0e8;                                     // Hz
    double pulse_interval = 11.5 / 512.0;                         // s
    double fast_dt = 2.5e-9;                                      // s
    std::size_t slow_count = 512;                                 // n, even
    double fast_t_min = -8.0e-7;                                  // s
    double fast_t_max = 8.0e-7;                                   // s
    double platform_speed = 200.0;                                // m/s
    double aperture_duration = 11.5;                              // s, n * pulse_interval
    double lightspeed = 3.0e8;                                    // m/s

    void validate() const;

    std::size_t slow_samples() const { return slow_count + 1; }
    std::size_t fast_samples() const;
    double slow_time(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(slow_count) / 2.0) * pulse_interval;
    }
    double fast_time(std::size_t l) const { return fast_t_min + static_cast<double>(l) * fast_dt; }

    /// X-band desk-scale configuration; aperture scales with n so the pulse
    /// interval stays fixed.
    static RadarConfig desk_default(std::size_t n = 512);
};

struct PointTarget {
    Vec3 position0;             // m, location at s = 0
    Vec3 velocity;              // m/s
    double reflectivity = 1.0;  // >= 0

    Vec3 position(double s) const { return position0 + velocity * s; }
};

/// Straight-line constant-speed platform track.
struct Trajectory {
    Vec3 start;    // r(0), m
    Vec3 velocity; // m/s

    Vec3 position(double s) const { return start + velocity * s; }
};

struct Scene {
    Trajectory platform;
    Vec3 reference_point;
    std::vector<PointTarget> stationary;
    std::vector<PointTarget> movers;

    Scene stationary_only() const;
    Scene movers_only() const;
    bool empty() const { return stationary.empty() && movers.empty(); }
    void validate(const RadarConfig& cfg) const;
};

struct DataMatrix {
    ComplexMatrix values;           // (n+1) x (m+1)
    std::vector<double> slow_axis;  // s_j
    std::vector<double> fast_axis;  // t_l
    RadarConfig config;
};

/// Round-trip travel time 2 |r(s) - p| / c.
double travel_time(const Scene& scene, double s, const Vec3& p, double lightspeed);

/// Delay of target i relative to the reference point under the start-stop
/// approximation: 2 (|r(s) - rho_i(s)| - |r(s) - rho_o|) / c.
double delta_tau(const Scene& scene, const PointTarget& target, double s, double lightspeed);

double gaussian_envelope(double t, double bandwidth);

/// Baseband data matrix: values[j,l] = sum_i sigma_i f_B(t_l - dtau_i(s_j))
/// exp(-i w0 dtau_i(s_j)). Stationary and mover contributions accumulate into
/// separate buffers that are summed once, so synthesize(full) equals
/// synthesize(stationary) + synthesize(movers) exactly.
DataMatrix synthesize(const Scene& scene, const RadarConfig& cfg, Exec exec = Exec::Parallel);

/// First-order estimate of the number of fast-time columns a mover's trace
/// spans over the aperture: N = (4 S(a) / dt) (v/c) cos(alpha), with alpha
/// measured against the horizontal line of sight at s = 0.
double column_support_estimate(const Scene& scene, const RadarConfig& cfg,
                               const PointTarget& target);

/// Standard simulation scene: platform offset in x and z from the reference
/// point and flying along y; stationary scatterers placed uniformly at random
/// on a ground strip; one mover with heading alpha measured from the
/// horizontal line of sight. The strip is wide in range (x) and narrow along
/// track (y) so that stationary phase histories stay slowly varying at the
/// coarse desk-scale pulse interval.
struct SceneTemplate {
    std::size_t stationary_count = 10;
    double stationary_reflectivity = 1.0;
    double region_extent = 60.0;  // m, half-extent in x
    double region_extent_y = 0.0; // m, half-extent in y (0 = on the range line)
    double mover_speed = 1.0;     // m/s; 0 disables the mover
    double mover_heading = 0.0;   // rad, alpha in [0, pi/2]
    double mover_reflectivity = 0.1;
    Vec3 mover_position = {20.0, 30.0, 0.0};
    double platform_standoff = 300000.0; // m, x offset of r(0)
    double platform_altitude = 5000.0;   // m
    std::uint64_t seed = 1;
};

Scene make_scene(const SceneTemplate& tpl, const RadarConfig& cfg);

} // namespace sartensor

#endif
