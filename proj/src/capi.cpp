#include "rnderiv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "rnderiv/decompose.hpp"
#include "rnderiv/diagnose.hpp"
#include "rnderiv/json_io.hpp"

using namespace rnderiv;

struct rn_measure {
    MeasureSpec spec;
};

struct rn_config {
    DecomposeConfig config;
};

struct rn_density {
    SimpleFunction fn;
};

struct rn_result {
    Decomposition decomposition;
    MeasureSpec nu;
    MeasureSpec mu;
    DecomposeConfig config;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ok: return RN_OK;
    case ErrorCode::invalid_argument: return RN_EINVAL;
    case ErrorCode::point_not_interior: return RN_EPOINT_NOT_INTERIOR;
    case ErrorCode::not_a_refinement: return RN_ENOT_A_REFINEMENT;
    case ErrorCode::base_domination: return RN_EBASE_DOMINATION;
    case ErrorCode::non_triadic_endpoint: return RN_ENON_TRIADIC;
    case ErrorCode::domain: return RN_EDOMAIN;
    case ErrorCode::monotonicity: return RN_EMONOTONICITY;
    case ErrorCode::iteration_budget: return RN_EITERATION_BUDGET;
    case ErrorCode::io: return RN_EIO;
    case ErrorCode::internal: return RN_EINTERNAL;
    }
    return RN_EINTERNAL;
}

template <typename Fn> int guarded(Fn&& fn) {
    try {
        fn();
        return RN_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return code_of(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RN_EINTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RN_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return RN_EINTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int require(bool ok, const char* what) {
    if (ok) return RN_OK;
    g_last_error = what;
    return RN_EINVAL;
}

} // namespace

extern "C" {

const char* rn_last_error(void) { return g_last_error.c_str(); }

void rn_string_free(char* s) { std::free(s); }

int rn_measure_parse(const char* json_text, rn_measure** out) {
    if (int rc = require(json_text && out, "null argument")) return rc;
    return guarded([&] { *out = new rn_measure{measure_from_text(json_text, "spec")}; });
}

int rn_measure_load(const char* filename, rn_measure** out) {
    if (int rc = require(filename && out, "null argument")) return rc;
    return guarded([&] { *out = new rn_measure{measure_from_file(filename)}; });
}

void rn_measure_free(rn_measure* m) { delete m; }

int rn_measure_to_json(const rn_measure* m, char** json_out) {
    if (int rc = require(m && json_out, "null argument")) return rc;
    return guarded([&] { *json_out = dup_string(measure_to_json(m->spec).dump()); });
}

int rn_measure_total_mass(const rn_measure* m, char** rational_out) {
    if (int rc = require(m && rational_out, "null argument")) return rc;
    return guarded([&] { *rational_out = dup_string(rat_str(m->spec.total())); });
}

int rn_measure_mass(const rn_measure* m, const char* interval_set_json, int exact_mode,
                    char** value_out, char** error_bound_out) {
    if (int rc = require(m && interval_set_json && value_out, "null argument")) return rc;
    return guarded([&] {
        nlohmann::json j = nlohmann::json::parse(interval_set_json, nullptr, false);
        if (j.is_discarded()) fail(ErrorCode::invalid_argument, "interval set: malformed JSON");
        IntervalSet s = interval_set_from_json(j, "interval_set");
        MassResult r = m->spec.mass(s, exact_mode ? MassMode::exact : MassMode::bounded);
        *value_out = dup_string(rat_str(r.value));
        if (error_bound_out) *error_bound_out = dup_string(rat_str(r.error_bound));
    });
}

int rn_config_create(rn_config** out) {
    if (int rc = require(out != nullptr, "null argument")) return rc;
    return guarded([&] { *out = new rn_config{}; });
}

void rn_config_free(rn_config* c) { delete c; }

int rn_config_set_max_rounds(rn_config* c, int rounds) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    return guarded([&] {
        if (rounds < 1) fail(ErrorCode::invalid_argument, "max_rounds must be >= 1");
        c->config.engine.max_rounds = rounds;
    });
}

int rn_config_set_gain_tolerance(rn_config* c, double tol) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    return guarded([&] {
        if (!(tol > 0)) fail(ErrorCode::invalid_argument, "gain tolerance must be > 0");
        c->config.engine.gain_tolerance = tol;
    });
}

int rn_config_set_split_mode(rn_config* c, int mode) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    return guarded([&] {
        if (mode != RN_SPLIT_BEST_ONLY && mode != RN_SPLIT_ALL_IMPROVING)
            fail(ErrorCode::invalid_argument, "unknown split mode");
        c->config.engine.split_mode = mode == RN_SPLIT_BEST_ONLY
                                          ? EngineConfig::SplitMode::best_only
                                          : EngineConfig::SplitMode::all_improving;
    });
}

int rn_config_set_depth_offset(rn_config* c, int offset) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    c->config.engine.depth_offset = offset;
    return RN_OK;
}

int rn_config_set_candidate_margin(rn_config* c, int margin) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    return guarded([&] {
        if (margin < 0) fail(ErrorCode::invalid_argument, "candidate margin must be >= 0");
        c->config.engine.candidate_margin = margin;
    });
}

int rn_config_set_checkpoint_stride(rn_config* c, int stride) {
    if (int rc = require(c != nullptr, "null config")) return rc;
    return guarded([&] {
        if (stride < 0) fail(ErrorCode::invalid_argument, "checkpoint stride must be >= 0");
        c->config.engine.checkpoint_stride = stride;
    });
}

int rn_config_set_cantor_tolerance(rn_config* c, const char* rational) {
    if (int rc = require(c && rational, "null argument")) return rc;
    return guarded([&] {
        Rat tol = parse_rat(rational);
        if (!(tol > 0)) fail(ErrorCode::invalid_argument, "cantor tolerance must be > 0");
        c->config.engine.cantor_tolerance = std::move(tol);
    });
}

int rn_config_set_singular_threshold(rn_config* c, const char* rational) {
    if (int rc = require(c && rational, "null argument")) return rc;
    return guarded([&] {
        Rat eps = parse_rat(rational);
        if (!(eps > 0) || !(eps < 1))
            fail(ErrorCode::invalid_argument, "singular threshold must lie in (0,1)");
        c->config.singular_threshold = std::move(eps);
    });
}

int rn_density_parse(const char* json_text, rn_density** out) {
    if (int rc = require(json_text && out, "null argument")) return rc;
    return guarded([&] {
        nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
        if (j.is_discarded()) fail(ErrorCode::invalid_argument, "density: malformed JSON");
        *out = new rn_density{simple_function_from_json(j, "density")};
    });
}

int rn_density_load(const char* filename, rn_density** out) {
    if (int rc = require(filename && out, "null argument")) return rc;
    return guarded([&] { *out = new rn_density{simple_function_from_file(filename)}; });
}

void rn_density_free(rn_density* d) { delete d; }

int rn_run(const rn_measure* nu, const rn_measure* mu, const rn_config* config,
           const rn_density* oracle_or_null, rn_result** out) {
    if (int rc = require(nu && mu && out, "null argument")) return rc;
    return guarded([&] {
        DecomposeConfig cfg = config ? config->config : DecomposeConfig{};
        Decomposition d =
            decompose(nu->spec, mu->spec, cfg, oracle_or_null ? &oracle_or_null->fn : nullptr);
        *out = new rn_result{std::move(d), nu->spec, mu->spec, std::move(cfg)};
    });
}

void rn_result_free(rn_result* r) { delete r; }

int rn_result_density_json(const rn_result* r, char** out) {
    if (int rc = require(r && out, "null argument")) return rc;
    return guarded(
        [&] { *out = dup_string(simple_function_to_json(r->decomposition.density).dump()); });
}

int rn_result_report_json(const rn_result* r, char** out) {
    if (int rc = require(r && out, "null argument")) return rc;
    return guarded([&] {
        *out = dup_string(decomposition_report(r->decomposition, "trace.csv").dump(2));
    });
}

int rn_result_trace_csv(const rn_result* r, int zero_seconds, char** out) {
    if (int rc = require(r && out, "null argument")) return rc;
    return guarded(
        [&] { *out = dup_string(trace_to_csv(r->decomposition.engine.trace, zero_seconds != 0)); });
}

int rn_result_trace_json(const rn_result* r, int zero_seconds, char** out) {
    if (int rc = require(r && out, "null argument")) return rc;
    return guarded([&] {
        *out = dup_string(trace_to_json(r->decomposition.engine, r->nu, r->mu, r->config.engine,
                                        zero_seconds != 0)
                              .dump());
    });
}

int rn_result_plot_csv(const rn_result* r, char** out) {
    if (int rc = require(r && out, "null argument")) return rc;
    return guarded([&] { *out = dup_string(plot_csv(r->decomposition.engine)); });
}

int rn_result_rounds(const rn_result* r, int* out) {
    if (int rc = require(r && out, "null argument")) return rc;
    *out = r->decomposition.engine.trace.rows.back().round;
    return RN_OK;
}

int rn_result_final_cells(const rn_result* r, long long* out) {
    if (int rc = require(r && out, "null argument")) return rc;
    *out = static_cast<long long>(r->decomposition.engine.final_partition.size());
    return RN_OK;
}

int rn_result_final_a(const rn_result* r, double* out) {
    if (int rc = require(r && out, "null argument")) return rc;
    *out = r->decomposition.engine.trace.rows.back().a;
    return RN_OK;
}

int rn_result_singular_mass(const rn_result* r, char** rational_out) {
    if (int rc = require(r && rational_out, "null argument")) return rc;
    return guarded([&] { *rational_out = dup_string(rat_str(r->decomposition.singular_mass)); });
}

int rn_result_residual(const rn_result* r, char** rational_out) {
    if (int rc = require(r && rational_out, "null argument")) return rc;
    return guarded([&] { *rational_out = dup_string(rat_str(r->decomposition.residual)); });
}

int rn_result_terminated_by(const rn_result* r, int* out) {
    if (int rc = require(r && out, "null argument")) return rc;
    *out = r->decomposition.engine.terminated_by == Termination::gain_below_tolerance
               ? RN_TERMINATED_GAIN
               : RN_TERMINATED_ROUND_LIMIT;
    return RN_OK;
}

int rn_verify_trace_file(const char* filename, char** summary_out) {
    if (int rc = require(filename != nullptr, "null argument")) return rc;
    return guarded([&] {
        std::string text = read_text_file(filename);
        DiagnoseReport report;
        if (text.rfind("round,cells,", 0) == 0) {
            RefinementTrace trace;
            trace.rows = trace_rows_from_csv(text);
            report.trace = verify_trace(trace);
            report.summary = "rounds checked: " + std::to_string(report.trace.rounds);
        } else {
            nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
            if (j.is_discarded()) fail(ErrorCode::io, std::string(filename) + ": malformed JSON");
            report = diagnose_trace(trace_from_json(j));
        }
        if (summary_out) *summary_out = dup_string(report.summary);
    });
}

} // extern "C"
