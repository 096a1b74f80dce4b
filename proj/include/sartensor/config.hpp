#ifndef SARTENSOR_CONFIG_HPP
#define SARTENSOR_CONFIG_HPP

#include "sartensor/imaging.hpp"
#include "sartensor/io.hpp"
#include "sartensor/norms_analysis.hpp"
#include "sartensor/rpca.hpp"

#include <json.hpp>

#include <filesystem>

namespace sartensor {

/// Configuration file problem; message carries the offending field path or
/// parse location.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EtaMode { Oracle, Default, Explicit };

EtaMode eta_mode_from_string(const std::string& s);
std::string to_string(EtaMode m);

/// Everything a CLI run needs, validated against the schema in
/// docs/config_schema.md.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    RadarConfig radar;
    SceneTemplate scene;
    double sub_aperture_fraction = 0.1;
    double overlap = 0.5;
    SolverConfig solver;            // solver.eta = 0 until resolved by eta mode
    EtaMode eta_mode = EtaMode::Oracle;
    double explicit_eta = 0.0;
    SweepGrid sweep_grid;
    bool sweep_write_pgm = false;
    Vec3 image_center;
    double image_spacing = 0.5;
    std::size_t image_nx = 128;
    std::size_t image_ny = 128;
    std::filesystem::path output_dir = "out";
    std::uint64_t config_hash = 0;

    Scene build_scene() const { return make_scene(scene, radar); }
    TensorPlan build_plan() const {
        return make_plan(radar.aperture_duration, sub_aperture_fraction * radar.aperture_duration,
                         overlap, radar.pulse_interval);
    }
    GridSpec build_grid() const {
        return GridSpec::centered(image_center, image_spacing, image_nx, image_ny);
    }
    FileMeta meta() const { return {config_hash, seed}; }
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& j, std::uint64_t hash);

nlohmann::json radar_to_json(const RadarConfig& cfg);
RadarConfig radar_from_json(const nlohmann::json& j);

} // namespace sartensor

#endif
