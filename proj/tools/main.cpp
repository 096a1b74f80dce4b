#include "sartensor/config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace sartensor;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoConvergence = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment configuration (JSON)")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "random seed (overrides config)");
    cmd->add_option("--threads", args.threads, "worker thread cap (0 = all)");
}

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.scene.seed = *args.seed;
    }
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    set_thread_count(args.threads);
    std::filesystem::create_directories(cfg.output_dir);
    return cfg;
}

Vec3 parse_velocity(const std::string& text) {
    Vec3 v;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
        throw ConfigError("config: --velocity expects \"vx,vy,vz\"");
    return v;
}

json norm_report_to_json(const NormReport& r) {
    return {{"nuclear_decoupled", r.nuclear_decoupled}, {"nuclear_fourier", r.nuclear_fourier},
            {"l1", r.l1},                               {"frobenius", r.frobenius},
            {"lower_bound", r.lower_bound},             {"upper_bound", r.upper_bound}};
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = load(args);
    const Scene scene = cfg.build_scene();

    const DataMatrix d = synthesize(scene, cfg.radar);
    const DataMatrix d_low = synthesize(scene.stationary_only(), cfg.radar);
    const DataMatrix d_sparse = synthesize(scene.movers_only(), cfg.radar);

    write_data_matrix(cfg.output_dir / "D.srt1", d, cfg.meta());
    write_data_matrix(cfg.output_dir / "D_L.srt1", d_low, cfg.meta());
    write_data_matrix(cfg.output_dir / "D_S.srt1", d_sparse, cfg.meta());

    const double e_low = frobenius_norm(d_low.values);
    const double e_sparse = frobenius_norm(d_sparse.values);
    std::cout << "simulate: wrote D, D_L, D_S (" << d.values.shape_string() << ") to "
              << cfg.output_dir.string() << "\n"
              << "  |D_L|_F = " << e_low << ", |D_S|_F = " << e_sparse
              << ", sparse/low energy ratio = " << (e_low > 0 ? e_sparse / e_low : 0.0) << "\n";
    return kExitOk;
}

struct SeparationFiles {
    DataMatrix d, d_low, d_sparse;
    bool have_truth = false;
};

SeparationFiles read_inputs(const ExperimentConfig& cfg, bool need_truth) {
    SeparationFiles f;
    f.d = read_data_matrix(cfg.output_dir / "D.srt1");
    const auto low_path = cfg.output_dir / "D_L.srt1";
    const auto sparse_path = cfg.output_dir / "D_S.srt1";
    if (std::filesystem::exists(low_path) && std::filesystem::exists(sparse_path)) {
        f.d_low = read_data_matrix(low_path);
        f.d_sparse = read_data_matrix(sparse_path);
        f.have_truth = true;
    } else if (need_truth) {
        throw std::runtime_error("separate: oracle eta mode needs D_L.srt1 and D_S.srt1 next to "
                                 "D.srt1 (run simulate first)");
    }
    return f;
}

int cmd_separate(const CommonArgs& args, const std::string& method, const std::string& eta_mode,
                 double eta_flag) {
    ExperimentConfig cfg = load(args);
    if (!eta_mode.empty()) cfg.eta_mode = eta_mode_from_string(eta_mode);
    if (eta_flag > 0.0) {
        cfg.eta_mode = EtaMode::Explicit;
        cfg.explicit_eta = eta_flag;
    }

    const SeparationFiles in = read_inputs(cfg, cfg.eta_mode == EtaMode::Oracle);
    const std::size_t rows = in.d.values.rows();
    const std::size_t cols = in.d.values.cols();

    json report;
    report["method"] = method;
    report["eta_mode"] = to_string(cfg.eta_mode);
    report["config_hash"] = cfg.config_hash;
    report["seed"] = cfg.seed;

    DataMatrix low = in.d;
    DataMatrix sparse = in.d;
    bool converged = false;

    if (method == "matrix") {
        SolverConfig sc = cfg.solver;
        switch (cfg.eta_mode) {
            case EtaMode::Oracle: {
                const EtaReport er = eta_report(in.d_low.values, in.d_sparse.values);
                sc.eta = er.eta_star;
                report["eta_report"] = {{"eta_min", er.eta_min},
                                        {"eta_max", er.eta_max},
                                        {"ratio", er.ratio}};
                break;
            }
            case EtaMode::Default: sc.eta = default_eta(rows, cols); break;
            case EtaMode::Explicit: sc.eta = cfg.explicit_eta; break;
        }
        const MatrixSeparation sep = rpca_matrix(in.d.values, sc);
        low.values = sep.low;
        sparse.values = sep.sparse;
        converged = sep.converged;
        report["eta"] = sep.eta_used;
        report["iterations"] = sep.iterations;
        report["residual"] = sep.final_residual;
        report["low_norms"] = {{"nuclear", nuclear_norm(sep.low)}, {"l1", l1_norm(sep.low)}};
        report["sparse_norms"] = {{"nuclear", nuclear_norm(sep.sparse)},
                                  {"l1", l1_norm(sep.sparse)}};
    } else if (method == "tensor" || method == "decoupled") {
        const TensorPlan plan = cfg.build_plan();
        const DataTensor a = to_tensor(in.d, plan);
        DataTensor a_low = a, a_sparse = a;
        if (in.have_truth) {
            a_low = to_tensor(in.d_low, plan);
            a_sparse = to_tensor(in.d_sparse, plan);
        }
        report["tensor"] = {{"n1", plan.rows_per_panel},
                            {"n3", plan.n3},
                            {"overlap", plan.overlap_fraction},
                            {"sub_aperture_s", plan.sub_aperture_s}};

        TensorSeparation sep;
        if (method == "tensor") {
            SolverConfig sc = cfg.solver;
            switch (cfg.eta_mode) {
                case EtaMode::Oracle: {
                    const EtaReport er =
                        eta_report(a_low.tensor, a_sparse.tensor, EtaVariant::Fourier);
                    sc.eta = er.eta_star;
                    report["eta_report"] = {{"eta_min", er.eta_min},
                                            {"eta_max", er.eta_max},
                                            {"ratio", er.ratio}};
                    break;
                }
                case EtaMode::Default:
                    sc.eta = default_eta(plan.rows_per_panel, cols, plan.n3);
                    break;
                case EtaMode::Explicit: sc.eta = cfg.explicit_eta; break;
            }
            sep = rpca_tensor(a.tensor, sc);
        } else {
            std::vector<double> etas(plan.n3, 0.0);
            for (std::size_t l = 0; l < plan.n3; ++l) {
                switch (cfg.eta_mode) {
                    case EtaMode::Oracle: {
                        const EtaReport er =
                            eta_report(a_low.tensor.panel(l), a_sparse.tensor.panel(l));
                        etas[l] = er.eta_star;
                        break;
                    }
                    case EtaMode::Default:
                        etas[l] = default_eta(plan.rows_per_panel, cols);
                        break;
                    case EtaMode::Explicit: etas[l] = cfg.explicit_eta; break;
                }
            }
            sep = rpca_decoupled(a.tensor, etas, cfg.solver);
            report["per_panel_eta"] = etas;
        }

        DataTensor sep_low = a, sep_sparse = a;
        sep_low.tensor = sep.low;
        sep_sparse.tensor = sep.sparse;
        low = reconstruct(sep_low);
        sparse = reconstruct(sep_sparse);
        converged = sep.converged;
        report["eta"] = sep.eta_used;
        report["iterations"] = sep.iterations;
        report["residual"] = sep.final_residual;
        report["low_norms"] = norm_report_to_json(bounds(sep.low));
        report["sparse_norms"] = norm_report_to_json(bounds(sep.sparse));
    } else {
        throw ConfigError("config: --method must be matrix|decoupled|tensor, got '" + method +
                          "'");
    }

    if (in.have_truth) {
        const double ds_norm = frobenius_norm(in.d_sparse.values);
        double err = 0.0;
        for (std::size_t i = 0; i < sparse.values.size(); ++i)
            err += std::norm(sparse.values.data()[i] - in.d_sparse.values.data()[i]);
        report["sparse_relative_error"] = ds_norm > 0 ? std::sqrt(err) / ds_norm : 0.0;
    }
    report["converged"] = converged;

    write_data_matrix(cfg.output_dir / ("L_" + method + ".srt1"), low, cfg.meta());
    write_data_matrix(cfg.output_dir / ("S_" + method + ".srt1"), sparse, cfg.meta());
    write_text(cfg.output_dir / ("report_" + method + ".json"), report.dump(2) + "\n");

    std::cout << "separate[" << method << "]: eta=" << report["eta"].get<double>()
              << " iterations=" << report["iterations"].get<std::size_t>()
              << " residual=" << report["residual"].get<double>();
    if (report.contains("sparse_relative_error"))
        std::cout << " sparse_rel_err=" << report["sparse_relative_error"].get<double>();
    std::cout << (converged ? "" : "  [NOT CONVERGED]") << "\n";
    return converged ? kExitOk : kExitNoConvergence;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentConfig cfg = load(args);
    std::size_t skipped = 0;
    const std::vector<SweepPoint> points = sweep(cfg.scene, cfg.radar, cfg.sweep_grid,
                                                 Exec::Parallel, &skipped);

    std::vector<std::vector<double>> rows;
    rows.reserve(points.size());
    for (const SweepPoint& p : points)
        rows.push_back({p.alpha, p.sub_fraction, p.overlap, static_cast<double>(p.n1),
                        static_cast<double>(p.n3), p.eta_fourier.eta_min, p.eta_fourier.eta_max,
                        p.eta_fourier.eta_star, p.eta_fourier.ratio, p.eta_decoupled.eta_min,
                        p.eta_decoupled.eta_max, p.eta_decoupled.eta_star, p.eta_decoupled.ratio,
                        p.nuc_fourier_low, p.nuc_decoupled_low, p.nuc_ratio_low(),
                        p.nuc_fourier_sparse, p.nuc_decoupled_sparse, p.nuc_ratio_sparse(),
                        p.l1_low, p.l1_sparse, p.l1_ratio()});
    write_csv(cfg.output_dir / "sweep.csv",
              "alpha_rad,sub_aperture_fraction,overlap,n1,n3,"
              "eta_min_fourier,eta_max_fourier,eta_star_fourier,eta_ratio_fourier,"
              "eta_min_decoupled,eta_max_decoupled,eta_star_decoupled,eta_ratio_decoupled,"
              "nuclear_fourier_background,nuclear_decoupled_background,nuclear_ratio_background,"
              "nuclear_fourier_mover,nuclear_decoupled_mover,nuclear_ratio_mover,"
              "l1_background,l1_mover,l1_ratio",
              rows, cfg.meta());

    if (cfg.sweep_write_pgm) {
        const auto& grid = cfg.sweep_grid;
        const std::size_t nx = grid.sub_aperture_fractions.size();
        const std::size_t ny = grid.overlaps.size();
        for (std::size_t ia = 0; ia < grid.alphas.size(); ++ia) {
            std::vector<double> ratio(nx * ny, 0.0), mover(nx * ny, 0.0);
            for (const SweepPoint& p : points) {
                if (p.alpha != grid.alphas[ia]) continue;
                std::size_t ix = 0, iy = 0;
                for (std::size_t i = 0; i < nx; ++i)
                    if (grid.sub_aperture_fractions[i] == p.sub_fraction) ix = i;
                for (std::size_t i = 0; i < ny; ++i)
                    if (grid.overlaps[i] == p.overlap) iy = i;
                ratio[iy * nx + ix] = p.eta_fourier.ratio;
                mover[iy * nx + ix] = p.nuc_ratio_sparse();
            }
            write_pgm(cfg.output_dir / ("eta_ratio_fourier_a" + std::to_string(ia) + ".pgm"),
                      ratio, nx, ny, cfg.meta());
            write_pgm(cfg.output_dir / ("nuclear_ratio_mover_a" + std::to_string(ia) + ".pgm"),
                      mover, nx, ny, cfg.meta());
        }
        std::vector<double> bg(nx * ny, 0.0);
        for (const SweepPoint& p : points) {
            if (p.alpha != grid.alphas.front()) continue;
            std::size_t ix = 0, iy = 0;
            for (std::size_t i = 0; i < nx; ++i)
                if (grid.sub_aperture_fractions[i] == p.sub_fraction) ix = i;
            for (std::size_t i = 0; i < ny; ++i)
                if (grid.overlaps[i] == p.overlap) iy = i;
            bg[iy * nx + ix] = p.nuc_ratio_low();
        }
        write_pgm(cfg.output_dir / "nuclear_ratio_background.pgm", bg, nx, ny, cfg.meta());
    }

    std::cout << "sweep: " << points.size() << " grid points written to "
              << (cfg.output_dir / "sweep.csv").string();
    if (skipped) std::cout << " (" << skipped << " degenerate cells skipped)";
    std::cout << "\n";
    return kExitOk;
}

int cmd_image(const CommonArgs& args, const std::string& input, const std::string& velocity) {
    const ExperimentConfig cfg = load(args);
    const DataMatrix d = read_data_matrix(input);
    const Scene scene = cfg.build_scene();
    const Vec3 v = velocity.empty() ? Vec3{} : parse_velocity(velocity);

    const ImageGrid img = backproject(d, scene, cfg.build_grid(), v);

    std::vector<std::vector<double>> rows;
    rows.reserve(img.spec.nx * img.spec.ny);
    std::vector<double> mags(img.spec.nx * img.spec.ny, 0.0);
    for (std::size_t iy = 0; iy < img.spec.ny; ++iy)
        for (std::size_t ix = 0; ix < img.spec.nx; ++ix) {
            const Vec3 p = img.spec.pixel(ix, iy);
            const double mag = img.magnitude(ix, iy);
            rows.push_back({static_cast<double>(ix), static_cast<double>(iy), p.x, p.y, mag});
            mags[iy * img.spec.nx + ix] = mag;
        }
    write_csv(cfg.output_dir / "image.csv", "ix,iy,x_m,y_m,magnitude", rows, cfg.meta());
    write_pgm(cfg.output_dir / "image.pgm", mags, img.spec.nx, img.spec.ny, cfg.meta());

    const Vec3 peak = img.peak_position();
    std::cout << "image: peak |I| at (" << peak.x << ", " << peak.y << ") m, "
              << img.out_of_window << " samples outside the fast window\n";
    return kExitOk;
}

int cmd_estimate(const CommonArgs& args, const std::string& input) {
    const ExperimentConfig cfg = load(args);
    const DataMatrix sparse = read_data_matrix(input);
    const Scene scene = cfg.build_scene();

    const std::vector<TracePoint> trace = extract_trace(sparse, 0.2);

    // Seed the position from the uncompensated backprojection peak.
    const ImageGrid coarse = backproject(sparse, scene, cfg.build_grid(), {});
    FitOptions options;
    options.position_seed = coarse.peak_position();

    const MotionEstimate est = fit_motion(trace, scene, cfg.radar, options);

    json j;
    j["position_m"] = {est.position.x, est.position.y, est.position.z};
    j["velocity_mps"] = {est.velocity.x, est.velocity.y, est.velocity.z};
    j["speed_mps"] = est.velocity.norm();
    j["heading_rad"] = std::atan2(est.velocity.y, est.velocity.x);
    j["loss"] = est.loss;
    j["reliable"] = est.reliable;
    j["trace_points"] = est.trace.size();
    j["config_hash"] = cfg.config_hash;
    j["seed"] = cfg.seed;
    write_text(cfg.output_dir / "motion.json", j.dump(2) + "\n");

    std::cout << "estimate: speed=" << est.velocity.norm()
              << " m/s heading=" << std::atan2(est.velocity.y, est.velocity.x)
              << " rad loss=" << est.loss << (est.reliable ? "" : "  [LOW CONFIDENCE]") << "\n";
    return est.reliable ? kExitOk : kExitNoConvergence;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAR moving-target separation via tensor robust PCA"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string method = "tensor", eta_mode, input, velocity;
    double eta_flag = 0.0;

    CLI::App* sim = app.add_subcommand("simulate", "synthesize D, D_L, D_S from a scene config");
    add_common(sim, args);

    CLI::App* sep = app.add_subcommand("separate", "split D into low-rank and sparse parts");
    add_common(sep, args);
    sep->add_option("--method", method, "matrix|decoupled|tensor")->required();
    sep->add_option("--eta-mode", eta_mode, "oracle|default|explicit");
    sep->add_option("--eta", eta_flag, "explicit trade-off weight");

    CLI::App* swp = app.add_subcommand("sweep", "hyper-parameter sweep of the norm ratios");
    add_common(swp, args);

    CLI::App* img = app.add_subcommand("image", "backproject a data matrix");
    add_common(img, args);
    img->add_option("--input", input, "SRT1 matrix to image")->required();
    img->add_option("--velocity", velocity, "compensation velocity \"vx,vy,vz\" (m/s)");

    CLI::App* est = app.add_subcommand("estimate", "extract motion parameters from a sparse part");
    add_common(est, args);
    est->add_option("--input", input, "SRT1 sparse matrix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (sep->parsed()) return cmd_separate(args, method, eta_mode, eta_flag);
        if (swp->parsed()) return cmd_sweep(args);
        if (img->parsed()) return cmd_image(args, input, velocity);
        if (est->parsed()) return cmd_estimate(args, input);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
