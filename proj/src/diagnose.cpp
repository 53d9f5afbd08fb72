#include "rnderiv/diagnose.hpp"

#include <sstream>

namespace rnderiv {

DiagnoseReport diagnose_trace(const TraceDocument& doc, double gain_tolerance) {
    DiagnoseReport report;
    report.trace = verify_trace(doc.trace, gain_tolerance);

    if (doc.nu && doc.mu) {
        const MeasureSpec& nu = *doc.nu;
        const MeasureSpec& mu = *doc.mu;
        MeasureSpec gamma = MeasureSpec::sum({mu, nu});
        for (const Checkpoint& cp : doc.checkpoints) {
            const Partition& pi = cp.f_gamma.partition();
            SimpleFunction expect_gamma = f_pi(nu, gamma, pi, doc.cantor_tolerance);
            for (std::size_t i = 0; i < pi.size(); ++i)
                if (expect_gamma.value(i) != cp.f_gamma.value(i))
                    fail(ErrorCode::monotonicity,
                         "checkpoint round " + std::to_string(cp.round) +
                             ": recorded f_gamma differs from the recomputed density");
            SimpleFunction expect_mu = f_pi(nu, mu, cp.f_mu.partition(), doc.cantor_tolerance);
            for (std::size_t i = 0; i < expect_mu.partition().size(); ++i)
                if (expect_mu.value(i) != cp.f_mu.value(i))
                    fail(ErrorCode::monotonicity,
                         "checkpoint round " + std::to_string(cp.round) +
                             ": recorded f_mu differs from the recomputed density");

            // Tail identity: on {f_mu >= k} the integral against mu equals the
            // nu-mass of the set, exactly.
            Rat top(0);
            for (const Rat& v : cp.f_mu.values()) top = std::max(top, v);
            const std::vector<Rat> levels{Rat(top / 2), top, Rat(top * 10)};
            for (const Rat& k : levels) {
                if (!(k > 0)) continue;
                IntervalSet tail = cp.f_mu.superlevel_set(k);
                Rat integral(0);
                for (std::size_t i = 0; i < cp.f_mu.partition().size(); ++i) {
                    if (cp.f_mu.value(i) < k) continue;
                    integral += cp.f_mu.value(i) * mu.mass(cp.f_mu.partition().cell(i),
                                                           MassMode::bounded, doc.cantor_tolerance)
                                                       .value;
                }
                Rat nu_tail = nu.mass(tail, MassMode::bounded, doc.cantor_tolerance).value;
                if (integral != nu_tail)
                    fail(ErrorCode::monotonicity,
                         "checkpoint round " + std::to_string(cp.round) +
                             ": tail identity violated at k = " + rat_str(k));
                ++report.ui_identities_checked;
            }
            ++report.checkpoints_checked;
        }
    }

    std::ostringstream os;
    os << "rounds checked: " << report.trace.rounds
       << "; max functional decrease: " << report.trace.max_decrease
       << "; rejected candidates audited: " << report.trace.rejected_checked
       << " (exact-equality cases: " << report.trace.equality_candidates << ")"
       << "; checkpoints recomputed: " << report.checkpoints_checked
       << "; tail identities verified: " << report.ui_identities_checked;
    report.summary = os.str();
    return report;
}

} // namespace rnderiv
