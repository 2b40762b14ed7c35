#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "sparseseries/report.hpp"
#include "sparseseries/sequence.hpp"

using namespace sparseseries;

namespace {

CriterionReport sample_report() {
    auto f2 = AlgebraicField::rational_base(2);
    auto a = CoefficientSequence::indicator(f2, power_support(mpq_class(3), 2000), 2000,
                                            false);
    auto b = CoefficientSequence::zero(f2, 2000);
    CheckpointSchedule s;
    s.x = {100, 500, 1999};
    s.z = {2, 3, 4};
    s.eta = mpq_class(1, 2);
    return check_theorem_main(a, b, s);
}

}  // namespace

TEST_CASE("empty report renders as valid json with zero rows") {
    CriterionReport empty;
    empty.theorem = "main";
    std::string j = render_report_json(empty);
    auto back = parse_report_json(j);
    CHECK(back.rows.empty());
    CHECK(reports_equal(empty, back));
}

TEST_CASE("json round trip reproduces the in-memory report") {
    CriterionReport r = sample_report();
    std::string j = render_report_json(r);
    CriterionReport back = parse_report_json(j);
    CHECK(reports_equal(r, back));
    // and the re-rendering is byte identical
    CHECK(render_report_json(back) == j);
}

TEST_CASE("determinism: independent runs render byte-identical reports") {
    CriterionReport r1 = sample_report();
    CriterionReport r2 = sample_report();
    CHECK(render_report_json(r1) == render_report_json(r2));
    CHECK(render_report_csv(r1) == render_report_csv(r2));
    CHECK(render_report_text(r1) == render_report_text(r2));
}

TEST_CASE("csv has a header and one line per checkpoint") {
    CriterionReport r = sample_report();
    std::string csv = render_report_csv(r);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "condition,checkpoint,ratio_lo,ratio_hi,verdict");
    std::size_t lines = 0;
    while (std::getline(is, line)) ++lines;
    std::size_t expect = 0;
    for (const auto& row : r.rows) expect += std::max<std::size_t>(row.ratios.size(), 1);
    CHECK(lines == expect);
}

TEST_CASE("witness text rendering sorted by (u, N)") {
    auto f2 = AlgebraicField::rational_base(2);
    auto a = CoefficientSequence::indicator(f2, power_support(mpq_class(3), 1000), 1000,
                                            false);
    auto b = CoefficientSequence::zero(f2, 1000);
    CriterionReport r;
    r.theorem = "witness-search";
    r.witnesses = witness_search(a, b, 5, 200, 128);
    std::string text = render_report_text(r);
    std::size_t p1 = text.find("u=1");
    std::size_t p5 = text.find("u=5");
    REQUIRE(p1 != std::string::npos);
    REQUIRE(p5 != std::string::npos);
    CHECK(p1 < p5);
    // round trip keeps the witnesses
    auto back = parse_report_json(render_report_json(r));
    CHECK(reports_equal(r, back));
}

TEST_CASE("single PASS row renders as header plus one csv line") {
    CriterionReport r;
    r.theorem = "main";
    ConditionRow row;
    row.condition_id = "i";
    row.description = "demo";
    row.checkpoints = {mpq_class(10)};
    row.ratios = {Interval::exact(1, 64)};
    row.verdict = Verdict::PassTrend;
    r.rows.push_back(row);
    std::string csv = render_report_csv(r);
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 2);  // header + 1 row
    CHECK(csv.find("i,10,") != std::string::npos);
}
