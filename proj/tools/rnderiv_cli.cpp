// Command-line front end. Talks to the core exclusively through the C API in
// rnderiv.h; owns path handling, manifests and exit-code mapping.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnderiv.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitEngine = 3;
constexpr int kExitMonotonicity = 4;

int exit_code_for(int rc) {
    switch (rc) {
    case RN_OK: return kExitOk;
    case RN_EINVAL:
    case RN_EIO:
    case RN_EDOMAIN:
    case RN_ENON_TRIADIC: return kExitValidation;
    case RN_EMONOTONICITY: return kExitMonotonicity;
    default: return kExitEngine;
    }
}

struct CStr {
    char* ptr = nullptr;
    ~CStr() { rn_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

template <typename T, void (*Free)(T*)> struct HandleDeleter {
    void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)> using Handle = std::unique_ptr<T, HandleDeleter<T, Free>>;
using MeasureHandle = Handle<rn_measure, rn_measure_free>;
using ConfigHandle = Handle<rn_config, rn_config_free>;
using DensityHandle = Handle<rn_density, rn_density_free>;
using ResultHandle = Handle<rn_result, rn_result_free>;

struct RunFlags {
    std::string nu_path;
    std::string mu_path;
    std::string out_dir = ".";
    std::string oracle_path;
    int max_rounds = 40;
    double gain_tol = 1e-12;
    std::string split_mode = "best";
    std::string singular_threshold = "1/1000000";
    std::string cantor_tolerance = "1/1000000000000000";
    int checkpoint_stride = 0;
    int depth_offset = 0;
    int candidate_margin = 1;
    bool emit_plot_data = false;
    bool stable_trace = false;
    long seed = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--nu", f.nu_path, "measure spec JSON for nu")->required();
    cmd->add_option("--mu", f.mu_path, "measure spec JSON for mu")->required();
    cmd->add_option("--out", f.out_dir, "output directory (created if missing)");
    cmd->add_option("--max-rounds", f.max_rounds, "refinement round budget");
    cmd->add_option("--gain-tol", f.gain_tol, "stop when the best gain falls below this");
    cmd->add_option("--split-mode", f.split_mode, "best | all")
        ->check(CLI::IsMember({"best", "all"}));
    cmd->add_option("--singular-threshold", f.singular_threshold,
                    "rational eps; cells with nu/(nu+mu) >= 1-eps are flagged singular");
    cmd->add_option("--cantor-tolerance", f.cantor_tolerance,
                    "rational bound for Cantor masses off the triadic grid");
    cmd->add_option("--checkpoint-stride", f.checkpoint_stride,
                    "snapshot partitions every N rounds in the JSON trace (0 = final only)");
    cmd->add_option("--depth-offset", f.depth_offset, "candidate depth = round + offset");
    cmd->add_option("--candidate-margin", f.candidate_margin,
                    "grid levels per cell beyond the first interior one");
    cmd->add_flag("--emit-plot-data", f.emit_plot_data,
                  "write plot.csv with (round, a_n, l1_error_vs_oracle)");
    cmd->add_option("--oracle", f.oracle_path,
                    "reference density JSON for the plot error column");
    cmd->add_flag("--stable-trace", f.stable_trace, "zero the seconds column for byte-stable output");
    cmd->add_option("--seed", f.seed, "recorded in the manifest for downstream property suites");
}

[[noreturn]] void die(int rc, const std::string& context) {
    std::cerr << "rnderiv: " << context << ": " << rn_last_error() << "\n";
    std::exit(exit_code_for(rc));
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "rnderiv: cannot write " << path << "\n";
        std::exit(kExitValidation);
    }
    out << content;
}

json manifest_json(const char* command, const RunFlags& f) {
    return json{{"command", command},
                {"nu", f.nu_path},
                {"mu", f.mu_path},
                {"out", f.out_dir},
                {"seed", f.seed},
                {"config",
                 {{"max_rounds", f.max_rounds},
                  {"gain_tolerance", f.gain_tol},
                  {"split_mode", f.split_mode},
                  {"singular_threshold", f.singular_threshold},
                  {"cantor_tolerance", f.cantor_tolerance},
                  {"checkpoint_stride", f.checkpoint_stride},
                  {"depth_offset", f.depth_offset},
                  {"candidate_margin", f.candidate_margin},
                  {"oracle", f.oracle_path},
                  {"emit_plot_data", f.emit_plot_data},
                  {"stable_trace", f.stable_trace}}}};
}

ResultHandle execute(const char* command, const RunFlags& f) {
    rn_measure* nu_raw = nullptr;
    if (int rc = rn_measure_load(f.nu_path.c_str(), &nu_raw)) die(rc, f.nu_path);
    MeasureHandle nu(nu_raw);
    rn_measure* mu_raw = nullptr;
    if (int rc = rn_measure_load(f.mu_path.c_str(), &mu_raw)) die(rc, f.mu_path);
    MeasureHandle mu(mu_raw);

    rn_config* cfg_raw = nullptr;
    if (int rc = rn_config_create(&cfg_raw)) die(rc, "config");
    ConfigHandle cfg(cfg_raw);
    if (int rc = rn_config_set_max_rounds(cfg.get(), f.max_rounds)) die(rc, "--max-rounds");
    if (int rc = rn_config_set_gain_tolerance(cfg.get(), f.gain_tol)) die(rc, "--gain-tol");
    if (int rc = rn_config_set_split_mode(
            cfg.get(), f.split_mode == "best" ? RN_SPLIT_BEST_ONLY : RN_SPLIT_ALL_IMPROVING))
        die(rc, "--split-mode");
    if (int rc = rn_config_set_singular_threshold(cfg.get(), f.singular_threshold.c_str()))
        die(rc, "--singular-threshold");
    if (int rc = rn_config_set_cantor_tolerance(cfg.get(), f.cantor_tolerance.c_str()))
        die(rc, "--cantor-tolerance");
    if (int rc = rn_config_set_checkpoint_stride(cfg.get(), f.checkpoint_stride))
        die(rc, "--checkpoint-stride");
    if (int rc = rn_config_set_depth_offset(cfg.get(), f.depth_offset)) die(rc, "--depth-offset");
    if (int rc = rn_config_set_candidate_margin(cfg.get(), f.candidate_margin))
        die(rc, "--candidate-margin");

    DensityHandle oracle;
    if (!f.oracle_path.empty()) {
        rn_density* oracle_raw = nullptr;
        if (int rc = rn_density_load(f.oracle_path.c_str(), &oracle_raw)) die(rc, f.oracle_path);
        oracle.reset(oracle_raw);
    }

    std::error_code ec;
    fs::create_directories(f.out_dir, ec);

    rn_result* result_raw = nullptr;
    if (int rc = rn_run(nu.get(), mu.get(), cfg.get(), oracle.get(), &result_raw))
        die(rc, "engine run");
    ResultHandle result(result_raw);

    const fs::path out(f.out_dir);
    CStr trace_csv;
    if (int rc = rn_result_trace_csv(result.get(), f.stable_trace ? 1 : 0, &trace_csv.ptr))
        die(rc, "trace");
    write_file(out / "trace.csv", trace_csv.str());
    CStr trace_json;
    if (int rc = rn_result_trace_json(result.get(), f.stable_trace ? 1 : 0, &trace_json.ptr))
        die(rc, "trace");
    write_file(out / "trace.json", trace_json.str());
    if (f.emit_plot_data) {
        CStr plot;
        if (int rc = rn_result_plot_csv(result.get(), &plot.ptr)) die(rc, "plot data");
        write_file(out / "plot.csv", plot.str());
    }
    write_file(out / "manifest.json", manifest_json(command, f).dump(2) + "\n");
    return result;
}

int cmd_differentiate(const RunFlags& f) {
    ResultHandle result = execute("differentiate", f);
    CStr density;
    if (int rc = rn_result_density_json(result.get(), &density.ptr)) die(rc, "density");
    write_file(fs::path(f.out_dir) / "density.json", density.str() + "\n");

    int rounds = 0;
    long long cells = 0;
    double a = 0;
    rn_result_rounds(result.get(), &rounds);
    rn_result_final_cells(result.get(), &cells);
    rn_result_final_a(result.get(), &a);
    std::printf("differentiate: %d rounds, %lld cells, a = %.12g\n", rounds, cells, a);
    return kExitOk;
}

int cmd_decompose(const RunFlags& f) {
    ResultHandle result = execute("decompose", f);
    CStr report;
    if (int rc = rn_result_report_json(result.get(), &report.ptr)) die(rc, "report");
    write_file(fs::path(f.out_dir) / "decomposition.json", report.str() + "\n");

    CStr singular;
    CStr residual;
    rn_result_singular_mass(result.get(), &singular.ptr);
    rn_result_residual(result.get(), &residual.ptr);
    std::printf("decompose: singular_mass = %s, residual = %s\n", singular.str().c_str(),
                residual.str().c_str());
    return kExitOk;
}

int cmd_diagnose(const std::string& trace_path) {
    CStr summary;
    int rc = rn_verify_trace_file(trace_path.c_str(), &summary.ptr);
    if (rc == RN_OK) {
        std::printf("diagnose: ok (%s)\n", summary.str().c_str());
        return kExitOk;
    }
    std::cerr << "rnderiv: diagnose: " << rn_last_error() << "\n";
    return exit_code_for(rc);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radon-Nikodym derivatives and Lebesgue decompositions on [0,1) "
                 "by greedy partition refinement"};
    app.require_subcommand(1);

    RunFlags diff_flags;
    CLI::App* diff = app.add_subcommand("differentiate", "compute d(nu^a)/d(mu)");
    add_run_flags(diff, diff_flags);

    RunFlags dec_flags;
    CLI::App* dec = app.add_subcommand("decompose", "split nu into nu^a + nu^s against mu");
    add_run_flags(dec, dec_flags);

    std::string trace_path;
    CLI::App* diag = app.add_subcommand("diagnose", "audit a trace file (CSV or JSON)");
    diag->add_option("trace", trace_path, "trace.csv or trace.json")->required();

    CLI11_PARSE(app, argc, argv);

    if (diff->parsed()) return cmd_differentiate(diff_flags);
    if (dec->parsed()) return cmd_decompose(dec_flags);
    if (diag->parsed()) return cmd_diagnose(trace_path);
    return kExitValidation;
}
