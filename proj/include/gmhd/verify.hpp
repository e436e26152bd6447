#pragma once

// Named scenarios, one per result being checked. Each scenario validates its
// hypotheses on the initial data, runs the solver(s) and reports a list of
// assertions of the form measured <= tolerance.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmhd/dynamics.hpp"
#include "gmhd/lagrangian.hpp"

namespace gmhd {

enum class ScenarioId { Thm3_1, Thm4_1, Thm5_1, Thm5_2, Thm6_1, Thm7_1, Thm8_1, Lemma2_1, Lemma2_2 };

/// "thm3.1", "lemma2.2", ... (case-insensitive on input).
std::string to_string(ScenarioId id);
ScenarioId parse_scenario_id(const std::string& text);
std::vector<ScenarioId> all_scenarios();

struct Scenario {
    ScenarioId id = ScenarioId::Thm8_1;
    Params params;
    std::string u0 = "quadratic";
    std::string b0 = "zero";
    std::size_t n = 512;
    double horizon = 1.0;
    StepControl control;
    std::optional<double> alpha0;  // label of interest; derived from the data when empty
    std::size_t labels = 65;

    /// The configuration used by the acceptance checks.
    static Scenario defaults(ScenarioId id);
};

struct Assertion {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

enum class ReportStatus { Pass, Fail, HypothesesUnmet, Error };
std::string to_string(ReportStatus s);

struct Report {
    Scenario scenario;
    ReportStatus status = ReportStatus::Pass;
    std::string detail;
    std::vector<Assertion> assertions;
    std::map<std::string, double> metrics;
    std::string run_verdict;
    std::optional<double> t_blowup_estimate;
    double t_end = 0.0;
    std::optional<TrackedRun> run;  // primary PDE run, not serialized

    bool passed() const noexcept { return status == ReportStatus::Pass; }
    /// JSON text; deterministic for identical input.
    std::string to_json() const;
};

/// Hypotheses of the scenario on its initial data; empty when satisfied.
std::string check_hypotheses(const Scenario& s);

Report run_scenario(const Scenario& s);

struct SweepRow {
    double lambda = 0.0;
    double kappa = 0.0;
    std::string status;
    std::string run_verdict;
    std::optional<double> t_blowup_estimate;
    double t_end = 0.0;
    std::string detail;
};

/// Runs the template scenario at every (lambda, kappa), rows in grid order.
/// Faults are captured per row. threads = 0 uses the hardware concurrency.
std::vector<SweepRow> sweep(const Scenario& tmpl, const std::vector<std::pair<double, double>>& grid,
                            unsigned threads = 0);

}  // namespace gmhd
