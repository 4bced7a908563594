#include "cli_app.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isoproxim/errors.hpp"
#include "isoproxim/frame.hpp"
#include "isoproxim/io.hpp"
#include "isoproxim/isometry.hpp"
#include "isoproxim/oracle.hpp"

namespace isoproxim::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(Complex z) { return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")"; }

void render_matrix(std::ostream& out, const Matrix& m, const char* indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << indent;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << fmt(m(i, j));
        }
        out << '\n';
    }
}

void render_family(std::ostream& out, const MinimizerSet& family) {
    if (std::holds_alternative<UniqueMinimizer>(family)) {
        out << "family: unique\n";
    } else if (const auto* proj = std::get_if<ProjectionFamily>(&family)) {
        out << "family: projection-family\n"
            << "l_k: " << proj->l_k << "\ne_k: " << proj->e_k
            << "\nproj_rank: " << proj->proj_rank << "\nV:\n";
        render_matrix(out, proj->V, "  ");
        out << "W:\n";
        render_matrix(out, proj->W, "  ");
    } else {
        const auto& iso = std::get<IsometryFamily>(family);
        out << "family: isometry-family\n"
            << "r: " << iso.rank_f << "\niso_rank: " << iso.iso_rank << "\nV:\n";
        render_matrix(out, iso.V, "  ");
        out << "W:\n";
        render_matrix(out, iso.W, "  ");
    }
}

void render_rank_k(std::ostream& out, const RankKResult& r) {
    out << "k: " << r.k << "\ngauge: " << r.gauge.to_string() << "\ndistance: " << fmt(r.distance)
        << "\ncertificate: " << to_string(r.certificate) << "\nminimizer:\n";
    render_matrix(out, r.minimizer, "  ");
    render_family(out, r.family);
}

void render_frame(std::ostream& out, const Frame& frame) {
    out << "ambient_dim: " << frame.ambient_dim() << "\nvectors:\n";
    for (std::size_t j = 0; j < frame.size(); ++j) {
        out << "  ";
        const auto v = frame.vector(j);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ' ';
            out << fmt(v[i]);
        }
        out << '\n';
    }
}

struct CommonOptions {
    std::string gauge = "fro";
    std::string format = "json";
    double tol_rank = 0.0;
    double tol_cluster = 0.0;
    double tol_half = 0.0;

    Tolerances tolerances() const {
        Tolerances tol;
        if (tol_rank > 0.0) tol.rank_rel = tol_rank;
        if (tol_cluster > 0.0) tol.cluster_rel = tol_cluster;
        if (tol_half > 0.0) tol.half = tol_half;
        return tol;
    }
    bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_gauge) {
    if (with_gauge)
        cmd->add_option("--gauge", opts.gauge, "Gauge spec: schatten:<p>|kyfan:<k>|fro");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--tol-rank", opts.tol_rank, "Rank threshold, relative to sigma[0]");
    cmd->add_option("--tol-cluster", opts.tol_cluster, "Singular value clustering tolerance");
    cmd->add_option("--tol-half", opts.tol_half, "Half-threshold detection tolerance");
}

std::uint64_t seed_from_env() {
    const char* text = std::getenv("ISOPROXIM_SEED");
    if (text == nullptr || *text == '\0') return 1;
    std::uint64_t seed = 0;
    const char* last = text;
    while (*last) ++last;
    const auto [ptr, ec] = std::from_chars(text, last, seed);
    if (ec != std::errc{} || ptr != last)
        throw InputError(std::string("ISOPROXIM_SEED: cannot parse '") + text + "'");
    return seed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nearest partial isometries and Parseval frame approximation"};
    app.name("isoproxim");
    app.require_subcommand(1);

    // nearest
    auto* nearest = app.add_subcommand("nearest", "Nearest partial isometry of a given rank");
    CommonOptions nearest_opts;
    std::size_t nearest_rank = 0;
    bool nearest_global_flag = false;
    std::string nearest_input;
    auto* nearest_rank_opt = nearest->add_option("--rank", nearest_rank, "Target rank k");
    nearest->add_flag("--global", nearest_global_flag, "Minimize over all ranks");
    nearest->add_option("input", nearest_input, "Matrix file (.json or .csv)")->required();
    add_common(nearest, nearest_opts, true);

    // distance
    auto* distance = app.add_subcommand("distance", "Distance to the rank-k partial isometries");
    CommonOptions distance_opts;
    std::size_t distance_rank = 0;
    std::string distance_input;
    distance->add_option("--rank", distance_rank, "Target rank k")->required();
    distance->add_option("input", distance_input, "Matrix file (.json or .csv)")->required();
    add_common(distance, distance_opts, true);

    // minimizers
    auto* minimizers = app.add_subcommand("minimizers", "Describe the full minimizer set");
    CommonOptions minimizers_opts;
    std::size_t minimizers_rank = 0;
    std::string minimizers_input;
    minimizers->add_option("--rank", minimizers_rank, "Target rank k")->required();
    minimizers->add_option("input", minimizers_input, "Matrix file (.json or .csv)")->required();
    add_common(minimizers, minimizers_opts, true);

    // frame-approx
    auto* frame_approx = app.add_subcommand("frame-approx", "Symmetric approximation of a frame");
    CommonOptions frame_opts;
    std::string frame_mode;
    std::string frame_input;
    std::string subspace_path;
    frame_approx->add_option("--mode", frame_mode, "fixed-excess:<k> | global | subspace")
        ->required();
    frame_approx->add_option("--subspace", subspace_path, "Subspace basis matrix file");
    frame_approx->add_option("input", frame_input, "Frame file (.json or .csv)")->required();
    add_common(frame_approx, frame_opts, false);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Frame bounds, excess and Parseval check");
    CommonOptions analyze_opts;
    std::string analyze_input;
    analyze_cmd->add_option("input", analyze_input, "Frame file (.json or .csv)")->required();
    add_common(analyze_cmd, analyze_opts, false);

    // verify
    auto* verify = app.add_subcommand("verify", "Cross-check the solver against brute force");
    CommonOptions verify_opts;
    std::size_t verify_trials = 20;
    int verify_resolution = 12;
    verify->add_option("--trials", verify_trials, "Number of random trials");
    verify->add_option("--resolution", verify_resolution, "Search lattice resolution (>= 8)");
    add_common(verify, verify_opts, true);

    std::vector<const char*> argv;
    argv.push_back("isoproxim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (nearest->parsed()) {
            if (nearest_global_flag == (nearest_rank_opt->count() > 0))
                throw InputError("nearest: pass exactly one of --rank <k> or --global");
            const Tolerances tol = nearest_opts.tolerances();
            const Gauge gauge = Gauge::parse(nearest_opts.gauge);
            const Matrix f = io::read_matrix(nearest_input);
            if (nearest_global_flag) {
                const GlobalResult result = nearest_global(f, gauge, tol);
                if (nearest_opts.json()) {
                    out << io::global_result_json(result);
                } else {
                    out << "best_ranks:";
                    for (std::size_t k : result.best_ranks) out << ' ' << k;
                    out << "\ndistance: " << fmt(result.distance) << '\n';
                    for (const auto& r : result.results) {
                        out << "---\n";
                        render_rank_k(out, r);
                    }
                }
            } else {
                const RankKResult result = nearest_rank_k(f, nearest_rank, gauge, tol);
                if (nearest_opts.json())
                    out << io::rank_k_result_json(result);
                else
                    render_rank_k(out, result);
            }
            return 0;
        }

        if (distance->parsed()) {
            const Tolerances tol = distance_opts.tolerances();
            const Gauge gauge = Gauge::parse(distance_opts.gauge);
            const Matrix f = io::read_matrix(distance_input);
            const double d = dist_rank_k(f, distance_rank, gauge, tol);
            if (distance_opts.json())
                out << io::distance_record_json(distance_rank, gauge, d);
            else
                out << "k: " << distance_rank << "\ngauge: " << gauge.to_string()
                    << "\ndistance: " << fmt(d) << '\n';
            return 0;
        }

        if (minimizers->parsed()) {
            const Tolerances tol = minimizers_opts.tolerances();
            const Gauge gauge = Gauge::parse(minimizers_opts.gauge);
            const Matrix f = io::read_matrix(minimizers_input);
            const RankKResult result = nearest_rank_k(f, minimizers_rank, gauge, tol);
            if (minimizers_opts.json()) {
                out << io::minimizers_record_json(result);
            } else {
                out << "k: " << result.k << "\ngauge: " << result.gauge.to_string()
                    << "\ncertificate: " << to_string(result.certificate) << '\n';
                render_family(out, result.family);
            }
            return 0;
        }

        if (frame_approx->parsed()) {
            const Tolerances tol = frame_opts.tolerances();
            const Frame frame = io::read_frame(frame_input);
            if (frame_mode.rfind("fixed-excess:", 0) == 0) {
                const std::string arg = frame_mode.substr(13);
                std::size_t k = 0;
                const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
                if (ec != std::errc{} || ptr != arg.data() + arg.size() || k == 0)
                    throw InputError("frame-approx: bad mode '" + frame_mode + "'");
                const FixedExcessResult result = symmetric_approx_fixed_excess(frame, k, tol);
                if (frame_opts.json()) {
                    out << io::fixed_excess_result_json(result);
                } else {
                    out << "mode: fixed-excess\nk: " << result.k
                        << "\ncertificate: " << to_string(result.certificate) << '\n';
                    render_frame(out, result.frame);
                    render_family(out, result.family);
                }
                return 0;
            }
            if (frame_mode == "global" || frame_mode == "subspace") {
                GlobalFrameResult result = [&] {
                    if (frame_mode == "global") return symmetric_approx_global(frame, tol);
                    if (subspace_path.empty())
                        throw InputError("frame-approx: subspace mode needs --subspace <path>");
                    const Matrix basis = io::read_matrix(subspace_path);
                    return symmetric_approx_subspace(frame, basis, tol);
                }();
                if (frame_opts.json()) {
                    out << io::global_frame_result_json(result, frame_mode);
                } else {
                    out << "mode: " << frame_mode << "\nk: " << result.k
                        << "\ncertificate: " << to_string(result.certificate)
                        << "\nunique: " << (result.unique ? "true" : "false")
                        << "\nhalf_tie: " << (result.half_tie ? "true" : "false") << '\n';
                    render_frame(out, result.frame);
                }
                return 0;
            }
            throw InputError("frame-approx: bad mode '" + frame_mode +
                             "' (expected fixed-excess:<k>, global or subspace)");
        }

        if (analyze_cmd->parsed()) {
            const Tolerances tol = analyze_opts.tolerances();
            const Frame frame = io::read_frame(analyze_input);
            const FrameReport report = analyze(frame, tol);
            if (analyze_opts.json())
                out << io::frame_report_json(report);
            else
                out << "span_dim: " << report.span_dim << "\nexcess: " << report.excess
                    << "\nlower_bound: " << fmt(report.lower_bound)
                    << "\nupper_bound: " << fmt(report.upper_bound)
                    << "\nis_tight: " << (report.is_tight ? "true" : "false")
                    << "\nis_parseval: " << (report.is_parseval ? "true" : "false") << '\n';
            return 0;
        }

        if (verify->parsed()) {
            oracle::VerifyOptions options;
            options.trials = verify_trials;
            options.resolution = verify_resolution;
            options.gauge = Gauge::parse(verify_opts.gauge);
            options.seed = seed_from_env();
            options.tol = verify_opts.tolerances();
            const oracle::VerifyReport report = oracle::run_verification(options);
            if (verify_opts.json()) {
                out << io::verify_report_json(report);
            } else {
                out << "trials: " << report.trials << "\nresolution: " << report.resolution
                    << "\ngauge: " << report.gauge << "\nseed: " << report.seed
                    << "\nmax_gap: " << fmt(report.max_gap)
                    << "\nviolations: " << report.violations.size() << '\n';
                for (const auto& v : report.violations)
                    out << "  trial " << v.trial << " (" << v.rows << "x" << v.cols
                        << ", k=" << v.k << "): solver " << fmt(v.solver_distance) << " vs oracle "
                        << fmt(v.oracle_distance) << '\n';
            }
            return report.violations.empty() ? 0 : 3;
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ZeroMatrixError& e) {
        err << "precondition violated: " << e.what()
            << " (that distance: " << fmt(e.rank_one_distance()) << ")\n";
        return 4;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

} // namespace isoproxim::cli
