#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rnderiv/decompose.hpp"
#include "rnderiv/engine.hpp"

namespace rnderiv {

// --- measure specs ---------------------------------------------------------
// Ingestion format: an object with exactly one of
//   {"atoms": [[loc, wt], ...]}
//   {"density": {"breakpoints": [...], "coeffs": [[...], ...]}}
//   {"cantor": wt}
//   {"sum": [spec, ...]}
//   {"scale": [factor, spec]}
// where every number is a "p/q" string or an integer. Validation errors name
// the offending path.
MeasureSpec measure_from_json(const nlohmann::json& j, const std::string& path);
MeasureSpec measure_from_text(const std::string& text, const std::string& origin);
MeasureSpec measure_from_file(const std::string& filename);
nlohmann::json measure_to_json(const MeasureSpec& m);

// --- partitions and simple functions --------------------------------------
nlohmann::json interval_set_to_json(const IntervalSet& s);
// Requires the piece list to be canonical (sorted, disjoint, merged).
IntervalSet interval_set_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j, const std::string& path);

// list of [cell, value] pairs
nlohmann::json simple_function_to_json(const SimpleFunction& f);
SimpleFunction simple_function_from_json(const nlohmann::json& j, const std::string& path);
SimpleFunction simple_function_from_file(const std::string& filename);

// --- traces ----------------------------------------------------------------
// CSV columns: round,cells,a,l1_increment,seconds
std::string trace_to_csv(const RefinementTrace& trace, bool zero_seconds);
std::vector<TraceRow> trace_rows_from_csv(const std::string& text);

struct TraceDocument {
    RefinementTrace trace;
    std::optional<MeasureSpec> nu;
    std::optional<MeasureSpec> mu;
    std::vector<Checkpoint> checkpoints;
    Rat cantor_tolerance = default_cantor_tolerance();
};

nlohmann::json trace_to_json(const EngineOutput& out, const MeasureSpec& nu, const MeasureSpec& mu,
                             const EngineConfig& config, bool zero_seconds);
TraceDocument trace_from_json(const nlohmann::json& j);
TraceDocument trace_from_file(const std::string& filename);

// --- reports ----------------------------------------------------------------
nlohmann::json decomposition_report(const Decomposition& d, const std::string& trace_ref);

// round,a,l1_error_vs_oracle for runs that carried a reference density
std::string plot_csv(const EngineOutput& out);

std::string read_text_file(const std::string& filename);
void write_text_file(const std::string& filename, const std::string& content);

} // namespace rnderiv
