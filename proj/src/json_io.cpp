#include "rnderiv/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rnderiv {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(ErrorCode::invalid_argument, path + ": " + what);
}

Rat rat_field(const json& j, const std::string& path) {
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (const Error& e) {
            bad(path, e.what());
        }
    }
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    bad(path, "expected a rational string \"p/q\" or an integer");
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

MeasureSpec measure_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        bad(path, "expected an object with exactly one of atoms/density/cantor/sum/scale");
    const auto& [key, value] = *j.items().begin();
    try {
        if (key == "atoms") {
            if (!value.is_array()) bad(path + ".atoms", "expected an array of [location, weight]");
            std::vector<std::pair<Rat, Rat>> entries;
            for (std::size_t i = 0; i < value.size(); ++i) {
                const json& e = value[i];
                const std::string p = path + ".atoms[" + std::to_string(i) + "]";
                if (!e.is_array() || e.size() != 2) bad(p, "expected [location, weight]");
                entries.emplace_back(rat_field(e[0], p + "[0]"), rat_field(e[1], p + "[1]"));
            }
            return MeasureSpec::atoms(std::move(entries));
        }
        if (key == "density") {
            const std::string p = path + ".density";
            if (!value.is_object() || !value.contains("breakpoints") || !value.contains("coeffs"))
                bad(p, "expected {breakpoints, coeffs}");
            std::vector<Rat> breaks;
            const json& jb = value["breakpoints"];
            if (!jb.is_array()) bad(p + ".breakpoints", "expected an array");
            for (std::size_t i = 0; i < jb.size(); ++i)
                breaks.push_back(rat_field(jb[i], p + ".breakpoints[" + std::to_string(i) + "]"));
            std::vector<Poly> coeffs;
            const json& jc = value["coeffs"];
            if (!jc.is_array()) bad(p + ".coeffs", "expected an array of coefficient lists");
            for (std::size_t i = 0; i < jc.size(); ++i) {
                if (!jc[i].is_array())
                    bad(p + ".coeffs[" + std::to_string(i) + "]", "expected a coefficient list");
                Poly poly;
                for (std::size_t k = 0; k < jc[i].size(); ++k)
                    poly.push_back(rat_field(
                        jc[i][k], p + ".coeffs[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
                coeffs.push_back(std::move(poly));
            }
            return MeasureSpec::density(std::move(breaks), std::move(coeffs));
        }
        if (key == "cantor") return MeasureSpec::cantor(rat_field(value, path + ".cantor"));
        if (key == "sum") {
            if (!value.is_array()) bad(path + ".sum", "expected an array of specs");
            std::vector<MeasureSpec> parts;
            for (std::size_t i = 0; i < value.size(); ++i)
                parts.push_back(
                    measure_from_json(value[i], path + ".sum[" + std::to_string(i) + "]"));
            return MeasureSpec::sum(std::move(parts));
        }
        if (key == "scale") {
            const std::string p = path + ".scale";
            if (!value.is_array() || value.size() != 2) bad(p, "expected [factor, spec]");
            Rat factor = rat_field(value[0], p + "[0]");
            return MeasureSpec::scale(std::move(factor), measure_from_json(value[1], p + "[1]"));
        }
    } catch (const Error& e) {
        if (std::string(e.what()).rfind(path, 0) == 0) throw; // already carries the path
        bad(path + "." + key, e.what());
    }
    bad(path, "unknown measure kind '" + key + "'");
}

MeasureSpec measure_from_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad(origin, "malformed JSON");
    return measure_from_json(j, origin);
}

MeasureSpec measure_from_file(const std::string& filename) {
    return measure_from_text(read_text_file(filename), filename);
}

nlohmann::json measure_to_json(const MeasureSpec& m) {
    switch (m.kind()) {
    case MeasureSpec::Kind::atoms: {
        json entries = json::array();
        for (const auto& [loc, wt] : m.atom_entries())
            entries.push_back(json::array({rat_str(loc), rat_str(wt)}));
        return json{{"atoms", entries}};
    }
    case MeasureSpec::Kind::density: {
        json breaks = json::array(), coeffs = json::array();
        for (const Rat& b : m.density_breakpoints()) breaks.push_back(rat_str(b));
        for (const Poly& p : m.density_coefficients()) {
            json cs = json::array();
            for (const Rat& c : p) cs.push_back(rat_str(c));
            coeffs.push_back(cs);
        }
        return json{{"density", {{"breakpoints", breaks}, {"coeffs", coeffs}}}};
    }
    case MeasureSpec::Kind::cantor:
        return json{{"cantor", rat_str(m.cantor_weight())}};
    case MeasureSpec::Kind::sum: {
        json parts = json::array();
        for (const MeasureSpec& c : m.children()) parts.push_back(measure_to_json(c));
        return json{{"sum", parts}};
    }
    case MeasureSpec::Kind::scale:
        return json{{"scale", json::array({rat_str(m.scale_factor()),
                                           measure_to_json(m.children().front())})}};
    }
    fail(ErrorCode::internal, "unreachable measure kind");
}

json interval_set_to_json(const IntervalSet& s) {
    json out = json::array();
    for (const Interval& p : s.pieces()) out.push_back(json::array({rat_str(p.lo), rat_str(p.hi)}));
    return out;
}

IntervalSet interval_set_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected a list of [lo, hi] pieces");
    std::vector<Interval> pieces;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) bad(p, "expected [lo, hi]");
        pieces.push_back({rat_field(j[i][0], p + "[0]"), rat_field(j[i][1], p + "[1]")});
    }
    if (!IntervalSet::is_canonical(pieces))
        bad(path, "pieces are not in canonical form (sorted, disjoint, merged)");
    return IntervalSet::from_pieces(std::move(pieces));
}

json partition_to_json(const Partition& p) {
    json out = json::array();
    for (const IntervalSet& c : p.cells()) out.push_back(interval_set_to_json(c));
    return out;
}

Partition partition_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected a list of cells");
    std::vector<IntervalSet> cells;
    for (std::size_t i = 0; i < j.size(); ++i)
        cells.push_back(interval_set_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return Partition::from_cells(std::move(cells));
}

json simple_function_to_json(const SimpleFunction& f) {
    json out = json::array();
    for (std::size_t i = 0; i < f.partition().size(); ++i)
        out.push_back(json::array({interval_set_to_json(f.partition().cell(i)),
                                   rat_str(f.value(i))}));
    return out;
}

SimpleFunction simple_function_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a nonempty list of [cell, value] pairs");
    std::vector<IntervalSet> cells;
    std::vector<Rat> values;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) bad(p, "expected [cell, value]");
        cells.push_back(interval_set_from_json(j[i][0], p + "[0]"));
        values.push_back(rat_field(j[i][1], p + "[1]"));
    }
    return SimpleFunction(Partition::from_cells(std::move(cells)), std::move(values));
}

SimpleFunction simple_function_from_file(const std::string& filename) {
    json j = json::parse(read_text_file(filename), nullptr, false);
    if (j.is_discarded()) bad(filename, "malformed JSON");
    return simple_function_from_json(j, filename);
}

std::string trace_to_csv(const RefinementTrace& trace, bool zero_seconds) {
    std::ostringstream os;
    os << "round,cells,a,l1_increment,seconds\n";
    for (const TraceRow& r : trace.rows) {
        char sec[32];
        std::snprintf(sec, sizeof(sec), "%.6f", zero_seconds ? 0.0 : r.seconds);
        os << r.round << ',' << r.cells << ',' << fmt_double(r.a) << ',' << rat_str(r.l1_increment)
           << ',' << sec << '\n';
    }
    return os.str();
}

std::vector<TraceRow> trace_rows_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("round,cells,a,", 0) != 0)
        fail(ErrorCode::io, "trace CSV missing header");
    std::vector<TraceRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        TraceRow row;
        try {
            std::getline(ls, field, ',');
            row.round = std::stoi(field);
            std::getline(ls, field, ',');
            row.cells = static_cast<std::size_t>(std::stoull(field));
            std::getline(ls, field, ',');
            row.a = std::stod(field);
            std::getline(ls, field, ',');
            row.l1_increment = parse_rat(field);
            std::getline(ls, field, ',');
            row.seconds = std::stod(field);
        } catch (const std::exception&) {
            fail(ErrorCode::io, "malformed trace CSV row: " + line);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json config_to_json(const EngineConfig& c) {
    return json{{"max_rounds", c.max_rounds},
                {"gain_tolerance", c.gain_tolerance},
                {"split_mode", c.split_mode == EngineConfig::SplitMode::best_only ? "best" : "all"},
                {"depth_offset", c.depth_offset},
                {"candidate_margin", c.candidate_margin},
                {"cantor_tolerance", rat_str(c.cantor_tolerance)},
                {"checkpoint_stride", c.checkpoint_stride}};
}

json rejected_to_json(const RejectedCandidate& r) {
    return json{{"round", r.round},
                {"point", rat_str(r.point)},
                {"parent", json::array({rat_str(r.parent_nu), rat_str(r.parent_gamma)})},
                {"left", json::array({rat_str(r.left_nu), rat_str(r.left_gamma)})},
                {"right", json::array({rat_str(r.right_nu), rat_str(r.right_gamma)})},
                {"gain", r.gain}};
}

RejectedCandidate rejected_from_json(const json& j, const std::string& path) {
    RejectedCandidate r;
    r.round = j.at("round").get<int>();
    r.point = rat_field(j.at("point"), path + ".point");
    r.parent_nu = rat_field(j.at("parent")[0], path + ".parent[0]");
    r.parent_gamma = rat_field(j.at("parent")[1], path + ".parent[1]");
    r.left_nu = rat_field(j.at("left")[0], path + ".left[0]");
    r.left_gamma = rat_field(j.at("left")[1], path + ".left[1]");
    r.right_nu = rat_field(j.at("right")[0], path + ".right[0]");
    r.right_gamma = rat_field(j.at("right")[1], path + ".right[1]");
    r.gain = j.at("gain").get<double>();
    return r;
}

} // namespace

json trace_to_json(const EngineOutput& out, const MeasureSpec& nu, const MeasureSpec& mu,
                   const EngineConfig& config, bool zero_seconds) {
    json rounds = json::array();
    for (const TraceRow& r : out.trace.rows)
        rounds.push_back(json::array({r.round, r.cells, r.a, rat_str(r.l1_increment),
                                      zero_seconds ? 0.0 : r.seconds}));
    json rejected = json::array();
    for (const RejectedCandidate& r : out.trace.rejected) rejected.push_back(rejected_to_json(r));
    json checkpoints = json::array();
    for (const Checkpoint& c : out.checkpoints)
        checkpoints.push_back(json{{"round", c.round},
                                   {"f_gamma", simple_function_to_json(c.f_gamma)},
                                   {"f_mu", simple_function_to_json(c.f_mu)}});
    return json{{"format", "rnderiv-trace-v1"},
                {"nu", measure_to_json(nu)},
                {"mu", measure_to_json(mu)},
                {"config", config_to_json(config)},
                {"terminated_by", out.terminated_by == Termination::gain_below_tolerance
                                      ? "gain_below_tolerance"
                                      : "round_limit"},
                {"rounds", rounds},
                {"rejected", rejected},
                {"checkpoints", checkpoints}};
}

TraceDocument trace_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "rnderiv-trace-v1")
        fail(ErrorCode::io, "not a rnderiv trace document");
    TraceDocument doc;
    if (j.contains("nu")) doc.nu = measure_from_json(j["nu"], "nu");
    if (j.contains("mu")) doc.mu = measure_from_json(j["mu"], "mu");
    if (j.contains("config") && j["config"].contains("cantor_tolerance"))
        doc.cantor_tolerance = rat_field(j["config"]["cantor_tolerance"], "config.cantor_tolerance");
    doc.trace.terminated_by = j.value("terminated_by", "") == "round_limit"
                                  ? Termination::round_limit
                                  : Termination::gain_below_tolerance;
    for (std::size_t i = 0; i < j.at("rounds").size(); ++i) {
        const json& r = j["rounds"][i];
        const std::string p = "rounds[" + std::to_string(i) + "]";
        if (!r.is_array() || r.size() != 5) bad(p, "expected [round, cells, a, l1, seconds]");
        TraceRow row;
        row.round = r[0].get<int>();
        row.cells = r[1].get<std::size_t>();
        row.a = r[2].get<double>();
        row.l1_increment = rat_field(r[3], p + "[3]");
        row.seconds = r[4].get<double>();
        doc.trace.rows.push_back(std::move(row));
    }
    if (j.contains("rejected"))
        for (std::size_t i = 0; i < j["rejected"].size(); ++i)
            doc.trace.rejected.push_back(
                rejected_from_json(j["rejected"][i], "rejected[" + std::to_string(i) + "]"));
    if (j.contains("checkpoints")) {
        for (std::size_t i = 0; i < j["checkpoints"].size(); ++i) {
            const json& c = j["checkpoints"][i];
            const std::string p = "checkpoints[" + std::to_string(i) + "]";
            doc.checkpoints.push_back({c.at("round").get<int>(),
                                       simple_function_from_json(c.at("f_gamma"), p + ".f_gamma"),
                                       simple_function_from_json(c.at("f_mu"), p + ".f_mu")});
        }
    }
    return doc;
}

TraceDocument trace_from_file(const std::string& filename) {
    json j = json::parse(read_text_file(filename), nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::io, filename + ": malformed JSON");
    return trace_from_json(j);
}

json decomposition_report(const Decomposition& d, const std::string& trace_ref) {
    json report{{"density", simple_function_to_json(d.density)},
                {"singular_mass", rat_str(d.singular_mass)},
                {"singular_cells", interval_set_to_json(d.singular_cells)},
                {"residual", rat_str(d.residual)},
                {"cells", d.engine.final_partition.size()},
                {"rounds", d.engine.trace.rows.back().round},
                {"final_a", d.engine.trace.rows.back().a},
                {"terminated_by", d.engine.terminated_by == Termination::gain_below_tolerance
                                      ? "gain_below_tolerance"
                                      : "round_limit"}};
    if (!trace_ref.empty()) report["trace"] = trace_ref;
    return report;
}

std::string plot_csv(const EngineOutput& out) {
    std::ostringstream os;
    os << "round,a,l1_error_vs_oracle\n";
    for (std::size_t i = 0; i < out.trace.rows.size(); ++i) {
        os << out.trace.rows[i].round << ',' << fmt_double(out.trace.rows[i].a) << ',';
        if (i < out.reference_l1.size())
            os << fmt_double(out.reference_l1[i]);
        else
            os << "nan";
        os << '\n';
    }
    return os.str();
}

std::string read_text_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + filename);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& filename, const std::string& content) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + filename);
    out << content;
}

} // namespace rnderiv
