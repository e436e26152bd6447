#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gmhd/verify.hpp"

using namespace gmhd;

TEST(Verify, ScenarioIds) {
    for (ScenarioId id : all_scenarios()) EXPECT_EQ(parse_scenario_id(to_string(id)), id);
    EXPECT_EQ(parse_scenario_id("THM8.1"), ScenarioId::Thm8_1);
    EXPECT_EQ(parse_scenario_id("lemma2_2"), ScenarioId::Lemma2_2);
    EXPECT_THROW(parse_scenario_id("thm9.9"), ConfigFault);
    EXPECT_EQ(all_scenarios().size(), 9u);
}

class DefaultScenario : public ::testing::TestWithParam<ScenarioId> {};

TEST_P(DefaultScenario, Passes) {
    const Scenario s = Scenario::defaults(GetParam());
    EXPECT_EQ(check_hypotheses(s), "");
    const Report r = run_scenario(s);
    EXPECT_EQ(r.status, ReportStatus::Pass) << r.to_json();
    EXPECT_FALSE(r.assertions.empty());
}

INSTANTIATE_TEST_SUITE_P(All, DefaultScenario, ::testing::ValuesIn(all_scenarios()),
                         [](const auto& info) {
                             std::string n = to_string(info.param);
                             for (char& c : n) {
                                 if (c == '.') c = '_';
                             }
                             return n;
                         });

struct Violation {
    ScenarioId id;
    void (*apply)(Scenario&);
};

void PrintTo(const Violation& v, std::ostream* os) { *os << to_string(v.id); }

class ViolatingPreset : public ::testing::TestWithParam<Violation> {};

TEST_P(ViolatingPreset, ReportsHypothesesUnmet) {
    Scenario s = Scenario::defaults(GetParam().id);
    GetParam().apply(s);
    EXPECT_NE(check_hypotheses(s), "");
    const Report r = run_scenario(s);
    EXPECT_EQ(r.status, ReportStatus::HypothesesUnmet);
    EXPECT_TRUE(r.assertions.empty());
    EXPECT_FALSE(r.detail.empty());
}

INSTANTIATE_TEST_SUITE_P(
    All, ViolatingPreset,
    ::testing::Values(
        Violation{ScenarioId::Thm3_1, [](Scenario& s) { s.b0 = "sine:1,0.1"; }},          // simple zero at 1
        Violation{ScenarioId::Thm3_1, [](Scenario& s) { s.params.kappa = 2.0; }},
        Violation{ScenarioId::Thm4_1, [](Scenario& s) { s.b0 = "sine:1,0.1"; }},          // b0'(1) != 0
        Violation{ScenarioId::Thm4_1, [](Scenario& s) { s.params.kappa = 0.75; }},
        Violation{ScenarioId::Thm5_1, [](Scenario& s) { s.b0 = "sine:1,0.1"; }},
        Violation{ScenarioId::Thm5_1, [](Scenario& s) { s.params.kappa = 0.0; }},
        Violation{ScenarioId::Thm5_2, [](Scenario& s) { s.b0 = "bump_m:1,1"; }},
        Violation{ScenarioId::Thm6_1, [](Scenario& s) { s.b0 = "sine:1,0.1"; }},          // b0'(0) != 0
        Violation{ScenarioId::Thm6_1, [](Scenario& s) { s.u0 = "poly:[0,0.5,-0.5]"; }},   // u0'(0) < U0'(0)
        Violation{ScenarioId::Thm7_1, [](Scenario& s) { s.b0 = "sine:1,1"; }},            // E0 > 1
        Violation{ScenarioId::Thm7_1, [](Scenario& s) { s.b0 = "sine:1,-0.1"; }},         // b0'(0) < 0
        Violation{ScenarioId::Thm8_1, [](Scenario& s) { s.params.lambda = 1.0; }},
        Violation{ScenarioId::Lemma2_1, [](Scenario& s) { s.b0 = "zero"; }},
        Violation{ScenarioId::Lemma2_2, [](Scenario& s) { s.params.lambda = 1.0; }}),
    [](const auto& info) {
        std::string n = to_string(info.param.id) + "_" + std::to_string(info.index);
        for (char& c : n) {
            if (c == '.') c = '_';
        }
        return n;
    });

TEST(Verify, BadPresetIsError) {
    Scenario s = Scenario::defaults(ScenarioId::Thm8_1);
    s.u0 = "cos:1";
    EXPECT_EQ(run_scenario(s).status, ReportStatus::Error);
}

TEST(Verify, ReportJsonDeterministic) {
    const Scenario s = Scenario::defaults(ScenarioId::Thm8_1);
    const std::string a = run_scenario(s).to_json(), b = run_scenario(s).to_json();
    EXPECT_EQ(a, b);
    for (const char* key : {"\"scenario\"", "\"params\"", "\"assertions\"", "\"measured\"", "\"tolerance\"", "\"pass\""}) {
        EXPECT_NE(a.find(key), std::string::npos) << key;
    }
}

TEST(Verify, EulerReducedScenarioMatchesBlowupTime) {
    const Report r = run_scenario(Scenario::defaults(ScenarioId::Thm5_1));
    ASSERT_TRUE(r.t_blowup_estimate);
    EXPECT_NEAR(*r.t_blowup_estimate / (std::numbers::pi * std::numbers::pi / 6.0), 1.0, 0.05);
    EXPECT_LT(std::abs(r.metrics.at("b_order_m_ratio")), 1e-3);
}

TEST(Verify, NegativeLambdaTraceRegimes) {
    // order-2 zero at 1: diverges for lambda > -2, constant at -2, vanishes below
    for (auto [lambda, name] : {std::pair{-1.0, "b_order_m_inverse_growth"}, std::pair{-2.0, "b_order_m_constant"},
                                std::pair{-3.0, "b_order_m_decay"}}) {
        Scenario s = Scenario::defaults(ScenarioId::Thm5_2);
        s.params.lambda = lambda;
        s.params.kappa = -lambda;
        const Report r = run_scenario(s);
        EXPECT_EQ(r.status, ReportStatus::Pass) << lambda;
        bool found = false;
        for (const auto& a : r.assertions) found = found || a.name == name;
        EXPECT_TRUE(found) << name;
    }
}

TEST(Verify, SweepSinglePointMatchesScenario) {
    Scenario s = Scenario::defaults(ScenarioId::Thm8_1);
    auto rows = sweep(s, {{0.0, 0.0}}, 1);
    ASSERT_EQ(rows.size(), 1u);
    const Report r = run_scenario(s);
    EXPECT_EQ(rows[0].status, to_string(r.status));
    EXPECT_EQ(rows[0].run_verdict, r.run_verdict);
    EXPECT_EQ(rows[0].t_end, r.t_end);
}

TEST(Verify, SweepDichotomyAndOrder) {
    Scenario s = Scenario::defaults(ScenarioId::Thm5_1);
    s.b0 = "bump2:0,0.001";
    auto rows = sweep(s, {{1.0, -1.0}, {0.4, -0.4}}, 2);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].lambda, 1.0);
    EXPECT_EQ(rows[0].run_verdict, "BlowupDetected");
    EXPECT_EQ(rows[1].run_verdict, "CompletedHorizon");
}

TEST(Verify, SweepCapturesFaultsPerRow) {
    Scenario s = Scenario::defaults(ScenarioId::Thm8_1);
    auto rows = sweep(s, {{std::nan(""), 0.0}, {0.0, 0.0}});
    EXPECT_EQ(rows[0].status, "error");
    EXPECT_EQ(rows[1].status, "pass");
}

TEST(Verify, SweepAcrossKappaHalf) {
    Scenario s = Scenario::defaults(ScenarioId::Thm4_1);
    auto rows = sweep(s, {{-0.5, 0.0}, {-0.5, 0.5}, {-0.5, 0.75}});
    EXPECT_EQ(rows[0].run_verdict, "BlowupDetected");
    EXPECT_EQ(rows[1].run_verdict, "BlowupDetected");
    EXPECT_EQ(rows[2].status, "hypotheses_unmet");
}
