#include "sparseseries/report.hpp"

#include <sstream>

#include <json.hpp>

#include "sparseseries/errors.hpp"

namespace sparseseries {

namespace {

using nlohmann::json;

constexpr int kDecimalDigits = 30;

json interval_to_json(const Interval& v) {
    json j;
    j["lo"] = v.lo_string(kDecimalDigits);
    j["hi"] = v.hi_string(kDecimalDigits);
    j["lo_x"] = v.lo_hex();
    j["hi_x"] = v.hi_hex();
    j["prec"] = static_cast<long>(v.precision());
    return j;
}

Interval interval_from_json(const json& j) {
    return Interval::from_hex(j.at("lo_x").get<std::string>(),
                              j.at("hi_x").get<std::string>(),
                              static_cast<mpfr_prec_t>(j.at("prec").get<long>()));
}

json rational_to_json(const mpq_class& v) { return v.get_str(); }

mpq_class rational_from_json(const json& j) { return mpq_class(j.get<std::string>()); }

Verdict verdict_from_string(const std::string& s) {
    if (s == "PASS-trend") return Verdict::PassTrend;
    if (s == "FAIL-trend") return Verdict::FailTrend;
    if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
    throw InvalidInput("unknown verdict '" + s + "'");
}

}  // namespace

std::string render_report_json(const CriterionReport& report) {
    json j;
    j["schema"] = "sparse-series-report/1";
    j["theorem"] = report.theorem;
    j["minpoly"] = report.minpoly;
    j["base"] = report.base_description;
    j["sequence_a"] = report.sequence_a;
    j["sequence_b"] = report.sequence_b;
    json sched;
    sched["eta"] = rational_to_json(report.eta);
    sched["x"] = json::array();
    for (const auto& v : report.schedule_x) sched["x"].push_back(rational_to_json(v));
    sched["y"] = json::array();
    for (const auto& v : report.schedule_y) sched["y"].push_back(rational_to_json(v));
    sched["z"] = json::array();
    for (const auto& v : report.schedule_z) sched["z"].push_back(interval_to_json(v));
    j["schedule"] = sched;
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["condition"] = row.condition_id;
        r["description"] = row.description;
        r["checkpoints"] = json::array();
        for (const auto& v : row.checkpoints) r["checkpoints"].push_back(rational_to_json(v));
        r["ratios"] = json::array();
        for (const auto& v : row.ratios) r["ratios"].push_back(interval_to_json(v));
        r["verdict"] = to_string(row.verdict);
        r["vacuous"] = row.vacuous;
        r["note"] = row.note;
        j["rows"].push_back(r);
    }
    j["witnesses"] = json::array();
    for (const auto& w : report.witnesses) {
        json r;
        r["u"] = w.u;
        r["N"] = w.N;
        r["value"] = interval_to_json(w.value);
        r["conjugate_product"] = interval_to_json(w.conjugate_product);
        r["conclusion"] = w.contradiction ? "ContradictionDemonstrated" : "Indeterminate";
        j["witnesses"].push_back(r);
    }
    j["interlacing_violations"] = json::array();
    for (const auto& v : report.interlacing_violations) {
        json r;
        r["m"] = v.m;
        r["m_plus"] = v.m_plus;
        r["mu"] = rational_to_json(v.mu);
        j["interlacing_violations"].push_back(r);
    }
    return j.dump(2) + "\n";
}

CriterionReport parse_report_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("schema", "") != "sparse-series-report/1")
        throw InvalidInput("unknown report schema");
    CriterionReport report;
    report.theorem = j.at("theorem").get<std::string>();
    report.minpoly = j.at("minpoly").get<std::string>();
    report.base_description = j.at("base").get<std::string>();
    report.sequence_a = j.at("sequence_a").get<std::string>();
    report.sequence_b = j.at("sequence_b").get<std::string>();
    const json& sched = j.at("schedule");
    report.eta = rational_from_json(sched.at("eta"));
    for (const auto& v : sched.at("x")) report.schedule_x.push_back(rational_from_json(v));
    for (const auto& v : sched.at("y")) report.schedule_y.push_back(rational_from_json(v));
    for (const auto& v : sched.at("z")) report.schedule_z.push_back(interval_from_json(v));
    for (const auto& r : j.at("rows")) {
        ConditionRow row;
        row.condition_id = r.at("condition").get<std::string>();
        row.description = r.at("description").get<std::string>();
        for (const auto& v : r.at("checkpoints"))
            row.checkpoints.push_back(rational_from_json(v));
        for (const auto& v : r.at("ratios")) row.ratios.push_back(interval_from_json(v));
        row.verdict = verdict_from_string(r.at("verdict").get<std::string>());
        row.vacuous = r.at("vacuous").get<bool>();
        row.note = r.at("note").get<std::string>();
        report.rows.push_back(std::move(row));
    }
    for (const auto& r : j.at("witnesses")) {
        NormWitness w;
        w.u = r.at("u").get<unsigned long>();
        w.N = r.at("N").get<std::uint64_t>();
        w.value = interval_from_json(r.at("value"));
        w.conjugate_product = interval_from_json(r.at("conjugate_product"));
        w.contradiction = r.at("conclusion").get<std::string>() == "ContradictionDemonstrated";
        report.witnesses.push_back(std::move(w));
    }
    for (const auto& r : j.at("interlacing_violations")) {
        InterlacingViolation v;
        v.m = r.at("m").get<std::uint64_t>();
        v.m_plus = r.at("m_plus").get<std::uint64_t>();
        v.mu = rational_from_json(r.at("mu"));
        report.interlacing_violations.push_back(std::move(v));
    }
    return report;
}

std::string render_report_csv(const CriterionReport& report) {
    std::ostringstream os;
    os << "condition,checkpoint,ratio_lo,ratio_hi,verdict\n";
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.ratios.size(); ++i) {
            std::string cp = i < row.checkpoints.size() ? row.checkpoints[i].get_str() : "";
            os << row.condition_id << "," << cp << ","
               << row.ratios[i].lo_string(kDecimalDigits) << ","
               << row.ratios[i].hi_string(kDecimalDigits) << "," << to_string(row.verdict)
               << "\n";
        }
        if (row.ratios.empty())
            os << row.condition_id << ",,,," << to_string(row.verdict) << "\n";
    }
    return os.str();
}

std::string render_report_text(const CriterionReport& report) {
    std::ostringstream os;
    os << "criterion report (" << report.theorem << ")\n";
    os << "  base: " << report.base_description << "  minpoly: " << report.minpoly << "\n";
    os << "  a: " << report.sequence_a << "\n";
    os << "  b: " << report.sequence_b << "\n";
    os << "  eta: " << report.eta.get_str() << "\n";
    for (const auto& row : report.rows) {
        os << "  [" << row.condition_id << "] " << to_string(row.verdict);
        if (row.vacuous) os << " (vacuous)";
        os << "  " << row.description << "\n";
        for (std::size_t i = 0; i < row.ratios.size(); ++i) {
            os << "      ";
            if (i < row.checkpoints.size()) os << "x=" << row.checkpoints[i].get_str() << "  ";
            os << row.ratios[i].to_string(12) << "\n";
        }
        if (!row.note.empty()) os << "      note: " << row.note << "\n";
    }
    if (!report.witnesses.empty()) {
        os << "  witnesses (u, N, value, conjugate_product, conclusion):\n";
        for (const auto& w : report.witnesses) {
            os << "    u=" << w.u << " N=" << w.N << " value=" << w.value.to_string(12)
               << " conj=" << w.conjugate_product.to_string(12) << " "
               << (w.contradiction ? "ContradictionDemonstrated" : "Indeterminate") << "\n";
        }
    }
    if (!report.interlacing_violations.empty()) {
        os << "  interlacing violations (m, m+, mu):\n";
        for (const auto& v : report.interlacing_violations)
            os << "    m=" << v.m << " m+=" << v.m_plus << " mu=" << v.mu.get_str() << "\n";
    }
    return os.str();
}

bool reports_equal(const CriterionReport& a, const CriterionReport& b) {
    if (a.theorem != b.theorem || a.minpoly != b.minpoly ||
        a.base_description != b.base_description || a.sequence_a != b.sequence_a ||
        a.sequence_b != b.sequence_b || a.eta != b.eta)
        return false;
    if (a.schedule_x != b.schedule_x || a.schedule_y != b.schedule_y) return false;
    if (a.schedule_z.size() != b.schedule_z.size()) return false;
    for (std::size_t i = 0; i < a.schedule_z.size(); ++i)
        if (!a.schedule_z[i].same_value(b.schedule_z[i])) return false;
    if (a.rows.size() != b.rows.size() || a.witnesses.size() != b.witnesses.size() ||
        a.interlacing_violations.size() != b.interlacing_violations.size())
        return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        if (ra.condition_id != rb.condition_id || ra.description != rb.description ||
            ra.checkpoints != rb.checkpoints || ra.verdict != rb.verdict ||
            ra.vacuous != rb.vacuous || ra.note != rb.note)
            return false;
        if (ra.ratios.size() != rb.ratios.size()) return false;
        for (std::size_t k = 0; k < ra.ratios.size(); ++k)
            if (!ra.ratios[k].same_value(rb.ratios[k])) return false;
    }
    for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
        const auto& wa = a.witnesses[i];
        const auto& wb = b.witnesses[i];
        if (wa.u != wb.u || wa.N != wb.N || wa.contradiction != wb.contradiction)
            return false;
        if (!wa.value.same_value(wb.value) ||
            !wa.conjugate_product.same_value(wb.conjugate_product))
            return false;
    }
    for (std::size_t i = 0; i < a.interlacing_violations.size(); ++i) {
        const auto& va = a.interlacing_violations[i];
        const auto& vb = b.interlacing_violations[i];
        if (va.m != vb.m || va.m_plus != vb.m_plus || va.mu != vb.mu) return false;
    }
    return true;
}

}  // namespace sparseseries
