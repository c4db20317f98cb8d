#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "matchmech/mechanisms.hpp"
#include "matchmech/model.hpp"
#include "matchmech/random.hpp"

namespace matchmech {

enum class VariationLevel { none, small, medium, large };

const char* to_string(VariationLevel level) noexcept;
std::optional<VariationLevel> parse_variation(std::string_view name) noexcept;

/// A patient misreports with probability 1 / denominator; 0 means never.
std::uint64_t misreport_denominator(VariationLevel level) noexcept;

/// Sizes of one simulated market. Scenario 1 is full preferences with
/// m = n; scenarios 2-4 are partial lists with m = n, m > n and m < n.
struct ScenarioSpec {
    int scenario = 1;
    int row = 1;
    std::vector<Index> doctors;   // per category
    std::vector<Index> patients;  // per category
    bool full_preferences = true;
};

inline constexpr int kTableRows = 5;
inline constexpr std::size_t kCategories = 10;

/// The published simulation sizes; `row` is 1-based.
ScenarioSpec table_ii(int scenario, int row);

/// Scenario-1 style market with `k` categories of n x n, full lists.
ScenarioSpec square_spec(Index n, std::size_t k);

/// Throws PreconditionError when the sizes disagree with the scenario's
/// completeness flag and m/n relation.
void validate_spec(const ScenarioSpec& spec);

using IndexedInstance = std::vector<IndexedCategory>;

/// Full scenarios: every list is a uniform permutation of the category's
/// doctors. Partial scenarios: list length uniform on [1, m], contents the
/// first entries of a uniform permutation.
IndexedInstance generate_indexed(const ScenarioSpec& spec, RandomSource& src);

/// Names categories x1.., doctors s1.. and patients p1...
ProblemInstance name_instance(const IndexedInstance& instance);

ProblemInstance generate_scenario(const ScenarioSpec& spec, RandomSource& src);

/// Misreporting model. For every patient (categories in order, patients in
/// order) one draw decides whether it misreports and a Fisher-Yates pass
/// over a copy of its list yields the misreport; both draws are consumed
/// whether or not the patient misreports, so levels run from the same seed
/// see nested misreporter sets with identical misreports.
struct IndexedVariation {
    IndexedInstance reported;
    std::vector<std::pair<Index, Index>> misreporters;  // (category, patient)
};

IndexedVariation apply_variation(const IndexedInstance& truth, VariationLevel level, RandomSource& src);

struct Variation {
    ProblemInstance reported;
    std::vector<std::pair<CategoryId, PatientId>> misreporters;
};

Variation apply_variation(const ProblemInstance& truth, VariationLevel level, RandomSource& src);

// ---------------------------------------------------------------------------
// Experiment runner

/// Throws PreconditionError for pairings outside the published protocol:
/// TOAM and RanPAM run on scenario 1 only; TOAM-IComP on 1-4.
void check_pairing(int scenario, MechanismKind mechanism);

struct ExperimentConfig {
    std::vector<ScenarioSpec> specs;
    std::vector<MechanismKind> mechanisms;
    std::vector<VariationLevel> levels;
    std::uint64_t trials = 0;
    std::uint64_t base_seed = 0;
    bool timing = false;  // when false runtime_us is reported as 0
};

struct ResultRow {
    int scenario = 0;
    int row = 0;
    MechanismKind mechanism = MechanismKind::toam;
    VariationLevel variation = VariationLevel::none;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t tel = 0;
    std::uint64_t nba = 0;
    std::uint64_t runtime_us = 0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;  // sorted by (config, trial)
};

/// Seeds: trial seed = derive_seed(base_seed, spec index, trial); the true
/// instance is generated from the trial seed, the variation stream from
/// derive_seed(trial seed, 1, 0) and each mechanism run from
/// derive_seed(trial seed, 2, 0). Every mechanism and level in a trial
/// therefore sees the same true market. Configs are enumerated spec-major,
/// then mechanism, then level.
///
/// Trials run in parallel (OpenMP); the table does not depend on the
/// schedule.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Single-threaded reference producing the same table.
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

struct ConfigSummary {
    int scenario = 0;
    int row = 0;
    MechanismKind mechanism = MechanismKind::toam;
    VariationLevel variation = VariationLevel::none;
    std::uint64_t trials = 0;
    double mean_tel = 0;
    double sd_tel = 0;
    double mean_nba = 0;
    double sd_nba = 0;
};

/// Per-config means and sample standard deviations, in config order.
std::vector<ConfigSummary> summarize(const ExperimentResult& result);

/// Rows of one config in trial order.
std::vector<ResultRow> select_rows(const ExperimentResult& result, int scenario, int row, MechanismKind mechanism,
                                   VariationLevel variation);

struct PairedTest {
    double mean = 0;
    double t = 0;
    double p_value = 1;  // one-sided, H1: mean difference > 0
};

/// One-sided paired t-test on the given differences.
PairedTest paired_t_test(std::span<const double> differences);

}  // namespace matchmech
