#pragma once

#include <string>

#include "rnderiv/json_io.hpp"

namespace rnderiv {

struct DiagnoseReport {
    TraceReport trace;
    std::size_t checkpoints_checked = 0;
    std::size_t ui_identities_checked = 0;
    std::string summary;
};

// Re-runs the trace audit and, when the document embeds the input measures,
// recomputes every checkpoint's partition densities and the tail identity
// integral(f over {f >= k}, mu) = nu({f >= k}). Throws
// ErrorCode::monotonicity on any violation.
DiagnoseReport diagnose_trace(const TraceDocument& doc, double gain_tolerance = 1e-12);

} // namespace rnderiv
