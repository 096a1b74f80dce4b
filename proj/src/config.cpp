#include "sartensor/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace sartensor {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: field '" + path + "': " + what);
}

const json& member(const json& j, const char* key, const std::string& path, bool required,
                   const json& fallback) {
    if (j.contains(key)) return j.at(key);
    if (required) fail(path + key, "missing required field");
    return fallback;
}

double get_num(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path + key, "missing required field");
    const json& v = j.at(key);
    if (!v.is_number()) fail(path + key, "expected a number");
    return v.get<double>();
}

double get_num_or(const json& j, const char* key, const std::string& path, double dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number()) fail(path + key, "expected a number");
    return v.get<double>();
}

std::size_t get_count_or(const json& j, const char* key, const std::string& path,
                         std::size_t dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) fail(path + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Vec3 get_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
    for (const auto& c : v)
        if (!c.is_number()) fail(path, "expected an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<double> get_num_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& c : v) {
        if (!c.is_number()) fail(path, "expected numbers");
        out.push_back(c.get<double>());
    }
    return out;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

EtaMode eta_mode_from_string(const std::string& s) {
    if (s == "oracle") return EtaMode::Oracle;
    if (s == "default") return EtaMode::Default;
    if (s == "explicit") return EtaMode::Explicit;
    throw ConfigError("config: eta mode must be oracle|default|explicit, got '" + s + "'");
}

std::string to_string(EtaMode m) {
    switch (m) {
        case EtaMode::Oracle: return "oracle";
        case EtaMode::Default: return "default";
        case EtaMode::Explicit: return "explicit";
    }
    return "?";
}

json radar_to_json(const RadarConfig& cfg) {
    json j;
    j["carrier_hz"] = cfg.carrier_omega0 / (2.0 * std::numbers::pi);
    j["bandwidth_hz"] = cfg.bandwidth;
    j["slow_count"] = cfg.slow_count;
    j["aperture_s"] = cfg.aperture_duration;
    j["fast_dt_s"] = cfg.fast_dt;
    j["fast_window_s"] = {cfg.fast_t_min, cfg.fast_t_max};
    j["platform_speed_mps"] = cfg.platform_speed;
    j["lightspeed_mps"] = cfg.lightspeed;
    return j;
}

RadarConfig radar_from_json(const json& j) {
    const std::string path = "radar.";
    RadarConfig cfg;
    cfg.carrier_omega0 = 2.0 * std::numbers::pi * get_num(j, "carrier_hz", path);
    cfg.bandwidth = get_num(j, "bandwidth_hz", path);
    const json& count = member(j, "slow_count", path, true, {});
    if (!count.is_number_unsigned()) fail(path + "slow_count", "expected an even count");
    cfg.slow_count = count.get<std::size_t>();
    cfg.aperture_duration = get_num(j, "aperture_s", path);
    cfg.pulse_interval = cfg.aperture_duration / static_cast<double>(cfg.slow_count);
    cfg.fast_dt = get_num(j, "fast_dt_s", path);
    if (j.contains("fast_window_s")) {
        const auto w = get_num_list(j.at("fast_window_s"), path + "fast_window_s");
        if (w.size() != 2) fail(path + "fast_window_s", "expected [t_min, t_max]");
        cfg.fast_t_min = w[0];
        cfg.fast_t_max = w[1];
    }
    cfg.platform_speed = get_num_or(j, "platform_speed_mps", path, cfg.platform_speed);
    cfg.lightspeed = get_num_or(j, "lightspeed_mps", path, cfg.lightspeed);
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: radar: ") + e.what());
    }
    return cfg;
}

ExperimentConfig config_from_json(const json& j, std::uint64_t hash) {
    ExperimentConfig cfg;
    cfg.config_hash = hash;
    cfg.seed = get_count_or(j, "seed", "", 1);

    if (!j.contains("radar")) throw ConfigError("config: field 'radar': missing required field");
    cfg.radar = radar_from_json(j.at("radar"));

    if (!j.contains("scene")) throw ConfigError("config: field 'scene': missing required field");
    const json& sc = j.at("scene");
    const std::string sp = "scene.";
    cfg.scene.stationary_count = get_count_or(sc, "stationary_count", sp, 10);
    cfg.scene.stationary_reflectivity =
        get_num_or(sc, "stationary_reflectivity", sp, 1.0);
    cfg.scene.region_extent = get_num_or(sc, "region_extent_m", sp, 60.0);
    cfg.scene.region_extent_y = get_num_or(sc, "region_extent_y_m", sp, 0.0);
    cfg.scene.platform_standoff = get_num_or(sc, "platform_standoff_m", sp, 300000.0);
    cfg.scene.platform_altitude = get_num_or(sc, "platform_altitude_m", sp, 5000.0);
    cfg.scene.seed = cfg.seed;
    if (sc.contains("mover")) {
        const json& mv = sc.at("mover");
        const std::string mp = sp + "mover.";
        cfg.scene.mover_speed = get_num(mv, "speed_mps", mp);
        cfg.scene.mover_heading = get_num(mv, "heading_rad", mp);
        cfg.scene.mover_reflectivity = get_num_or(mv, "reflectivity", mp, 0.1);
        if (mv.contains("position_m"))
            cfg.scene.mover_position = get_vec3(mv.at("position_m"), mp + "position_m");
    } else {
        cfg.scene.mover_speed = 0.0;
    }
    if (cfg.scene.stationary_count == 0 && cfg.scene.mover_speed <= 0.0)
        throw ConfigError("config: field 'scene': empty scene (no stationary targets, no mover)");

    if (j.contains("tensor")) {
        const json& tn = j.at("tensor");
        cfg.sub_aperture_fraction = get_num(tn, "sub_aperture_fraction", "tensor.");
        cfg.overlap = get_num(tn, "overlap", "tensor.");
        if (cfg.sub_aperture_fraction <= 0.0 || cfg.sub_aperture_fraction > 1.0)
            fail("tensor.sub_aperture_fraction", "must lie in (0, 1]");
        if (cfg.overlap < 0.0 || cfg.overlap >= 1.0) fail("tensor.overlap", "must lie in [0, 1)");
    }

    if (j.contains("solver")) {
        const json& sv = j.at("solver");
        const std::string vp = "solver.";
        cfg.solver.rho = get_num_or(sv, "rho", vp, 1.4);
        cfg.solver.tol = get_num_or(sv, "tol", vp, 1e-7);
        cfg.solver.max_iters = get_count_or(sv, "max_iters", vp, 500);
        if (sv.contains("eta_mode"))
            cfg.eta_mode = eta_mode_from_string(sv.at("eta_mode").get<std::string>());
        cfg.explicit_eta = get_num_or(sv, "eta", vp, 0.0);
        if (cfg.eta_mode == EtaMode::Explicit && cfg.explicit_eta <= 0.0)
            fail("solver.eta", "explicit eta mode needs a positive eta");
    }

    cfg.sweep_grid = SweepGrid::paper_default();
    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        const std::string wp = "sweep.";
        if (sw.contains("sub_aperture_fractions"))
            cfg.sweep_grid.sub_aperture_fractions =
                get_num_list(sw.at("sub_aperture_fractions"), wp + "sub_aperture_fractions");
        if (sw.contains("overlaps"))
            cfg.sweep_grid.overlaps = get_num_list(sw.at("overlaps"), wp + "overlaps");
        if (sw.contains("alphas_rad"))
            cfg.sweep_grid.alphas = get_num_list(sw.at("alphas_rad"), wp + "alphas_rad");
        if (sw.contains("write_pgm")) {
            if (!sw.at("write_pgm").is_boolean()) fail(wp + "write_pgm", "expected a boolean");
            cfg.sweep_write_pgm = sw.at("write_pgm").get<bool>();
        }
    }

    cfg.image_center = cfg.scene.mover_position;
    if (j.contains("imaging")) {
        const json& im = j.at("imaging");
        const std::string ip = "imaging.";
        if (im.contains("center_m")) cfg.image_center = get_vec3(im.at("center_m"), ip + "center_m");
        cfg.image_spacing = get_num_or(im, "spacing_m", ip, 0.5);
        cfg.image_nx = get_count_or(im, "nx", ip, 128);
        cfg.image_ny = get_count_or(im, "ny", ip, 128);
        if (cfg.image_spacing <= 0.0) fail(ip + "spacing_m", "must be positive");
        if (cfg.image_nx < 2 || cfg.image_ny < 2) fail(ip + "nx", "grid must be at least 2x2");
    }

    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ":" +
                          std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
    }
    return config_from_json(j, fnv1a(text));
}

} // namespace sartensor
