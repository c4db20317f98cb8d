#include "matchmech/simharness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "matchmech/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace matchmech {

const char* to_string(VariationLevel level) noexcept {
    switch (level) {
        case VariationLevel::none: return "none";
        case VariationLevel::small: return "small";
        case VariationLevel::medium: return "medium";
        case VariationLevel::large: return "large";
    }
    return "unknown";
}

std::optional<VariationLevel> parse_variation(std::string_view name) noexcept {
    if (name == "none") return VariationLevel::none;
    if (name == "small") return VariationLevel::small;
    if (name == "medium") return VariationLevel::medium;
    if (name == "large") return VariationLevel::large;
    return std::nullopt;
}

std::uint64_t misreport_denominator(VariationLevel level) noexcept {
    switch (level) {
        case VariationLevel::none: return 0;
        case VariationLevel::small: return 8;
        case VariationLevel::medium: return 4;
        case VariationLevel::large: return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Table of simulated market sizes, doctors then patients per category.

namespace {

using Row = std::array<Index, kCategories>;

struct TableEntry {
    Row doctors;
    Row patients;
};

const std::array<TableEntry, kTableRows> kScenario3 = {{
    {{12, 9, 8, 13, 10, 7, 10, 11, 11, 9}, {8, 6, 6, 10, 8, 5, 9, 7, 8, 8}},
    {{20, 15, 27, 21, 17, 19, 23, 21, 23, 14}, {14, 10, 21, 17, 13, 15, 20, 16, 18, 11}},
    {{27, 27, 33, 36, 33, 24, 39, 21, 31, 29}, {19, 21, 25, 22, 29, 20, 17, 14, 25, 28}},
    {{40, 41, 45, 41, 44, 32, 38, 36, 40, 43}, {37, 34, 43, 37, 38, 27, 36, 32, 36, 40}},
    {{45, 55, 55, 50, 35, 50, 65, 40, 45, 60}, {43, 53, 47, 45, 30, 49, 60, 35, 44, 56}},
}};

}  // namespace

ScenarioSpec table_ii(int scenario, int row) {
    if (scenario < 1 || scenario > 4 || row < 1 || row > kTableRows) {
        throw PreconditionError("", "no table entry for scenario " + std::to_string(scenario) + " row " +
                                        std::to_string(row));
    }
    ScenarioSpec spec;
    spec.scenario = scenario;
    spec.row = row;
    spec.full_preferences = scenario == 1;
    const auto& entry = kScenario3[static_cast<std::size_t>(row - 1)];
    switch (scenario) {
        case 1:
        case 2:
            spec.doctors.assign(kCategories, static_cast<Index>(10 * row));
            spec.patients = spec.doctors;
            break;
        case 3:
            spec.doctors.assign(entry.doctors.begin(), entry.doctors.end());
            spec.patients.assign(entry.patients.begin(), entry.patients.end());
            break;
        default:  // scenario 4 mirrors scenario 3
            spec.doctors.assign(entry.patients.begin(), entry.patients.end());
            spec.patients.assign(entry.doctors.begin(), entry.doctors.end());
            break;
    }
    return spec;
}

ScenarioSpec square_spec(Index n, std::size_t k) {
    ScenarioSpec spec;
    spec.scenario = 1;
    spec.row = 0;
    spec.doctors.assign(k, n);
    spec.patients.assign(k, n);
    spec.full_preferences = true;
    return spec;
}

void validate_spec(const ScenarioSpec& spec) {
    auto fail = [&](const std::string& why) {
        throw PreconditionError("", "scenario " + std::to_string(spec.scenario) + ": " + why);
    };
    if (spec.doctors.size() != spec.patients.size()) {
        fail("doctor and patient counts cover different numbers of categories");
    }
    if (spec.scenario < 1 || spec.scenario > 4) {
        fail("unknown scenario");
    }
    if (spec.full_preferences != (spec.scenario == 1)) {
        fail("preference completeness flag does not match the scenario");
    }
    for (std::size_t i = 0; i < spec.doctors.size(); ++i) {
        const Index m = spec.doctors[i];
        const Index n = spec.patients[i];
        const bool ok = spec.scenario <= 2 ? m == n : spec.scenario == 3 ? m > n : m < n;
        if (!ok) {
            fail("category " + std::to_string(i + 1) + " has m = " + std::to_string(m) + ", n = " +
                 std::to_string(n));
        }
        if (!spec.full_preferences && m == 0 && n > 0) {
            fail("partial lists need at least one doctor");
        }
    }
}

namespace {

void shuffle_in_place(std::vector<Index>& v, RandomSource& src) {
    const auto n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + src.below(n - i);
        std::swap(v[i], v[j]);
    }
}

}  // namespace

IndexedInstance generate_indexed(const ScenarioSpec& spec, RandomSource& src) {
    validate_spec(spec);
    IndexedInstance out;
    out.reserve(spec.doctors.size());
    for (std::size_t c = 0; c < spec.doctors.size(); ++c) {
        const Index m = spec.doctors[c];
        IndexedCategory cat;
        cat.doctor_count = m;
        cat.prefs.reserve(spec.patients[c]);
        std::vector<Index> doctors(m);
        for (Index p = 0; p < spec.patients[c]; ++p) {
            std::iota(doctors.begin(), doctors.end(), Index{0});
            if (spec.full_preferences) {
                shuffle_in_place(doctors, src);
                cat.prefs.push_back(doctors);
                continue;
            }
            const auto length = 1 + src.below(m);
            // Partial Fisher-Yates: the first `length` slots are a uniform
            // ordered sample without replacement.
            for (std::size_t i = 0; i < length; ++i) {
                const auto j = i + src.below(m - i);
                std::swap(doctors[i], doctors[j]);
            }
            cat.prefs.emplace_back(doctors.begin(), doctors.begin() + static_cast<std::ptrdiff_t>(length));
        }
        out.push_back(std::move(cat));
    }
    return out;
}

ProblemInstance name_instance(const IndexedInstance& instance) {
    ProblemInstance out;
    out.categories.reserve(instance.size());
    for (std::size_t c = 0; c < instance.size(); ++c) {
        const auto& ic = instance[c];
        CategoryInstance cat;
        cat.id = "x" + std::to_string(c + 1);
        std::vector<std::string> doctor_names;
        for (Index d = 0; d < ic.doctor_count; ++d) {
            doctor_names.push_back("s" + std::to_string(d + 1));
        }
        cat.doctors = doctor_names;
        for (Index p = 0; p < ic.patient_count(); ++p) {
            Patient patient;
            patient.id = "p" + std::to_string(p + 1);
            patient.prefs.reserve(ic.prefs[p].size());
            for (const Index d : ic.prefs[p]) {
                patient.prefs.push_back(doctor_names[d]);
            }
            cat.patients.push_back(std::move(patient));
        }
        out.categories.push_back(std::move(cat));
    }
    return out;
}

ProblemInstance generate_scenario(const ScenarioSpec& spec, RandomSource& src) {
    return name_instance(generate_indexed(spec, src));
}

IndexedVariation apply_variation(const IndexedInstance& truth, VariationLevel level, RandomSource& src) {
    IndexedVariation out{truth, {}};
    const auto denominator = misreport_denominator(level);
    if (denominator == 0) {
        return out;
    }
    std::vector<Index> shuffled;
    for (std::size_t c = 0; c < truth.size(); ++c) {
        for (Index p = 0; p < truth[c].patient_count(); ++p) {
            const bool misreports = src.below(denominator) == 0;
            shuffled = truth[c].prefs[p];
            shuffle_in_place(shuffled, src);
            if (misreports) {
                out.reported[c].prefs[p] = shuffled;
                out.misreporters.emplace_back(static_cast<Index>(c), p);
            }
        }
    }
    return out;
}

Variation apply_variation(const ProblemInstance& truth, VariationLevel level, RandomSource& src) {
    IndexedInstance indexed;
    for (const auto& cat : truth.categories) {
        indexed.push_back(index_category(cat));
    }
    const auto varied = apply_variation(indexed, level, src);

    Variation out{truth, {}};
    for (const auto& [c, p] : varied.misreporters) {
        const auto& cat = truth.categories[c];
        auto& prefs = out.reported.categories[c].patients[p].prefs;
        prefs.clear();
        for (const Index d : varied.reported[c].prefs[p]) {
            prefs.push_back(cat.doctors[d]);
        }
        out.misreporters.emplace_back(cat.id, cat.patients[p].id);
    }
    return out;
}

// ---------------------------------------------------------------------------

void check_pairing(int scenario, MechanismKind mechanism) {
    if (mechanism != MechanismKind::toam_icomp && scenario != 1) {
        throw PreconditionError("", std::string(to_string(mechanism)) + " is only run on scenario 1, not scenario " +
                                        std::to_string(scenario));
    }
}

namespace {

void check_config(const ExperimentConfig& config) {
    for (const auto& spec : config.specs) {
        validate_spec(spec);
        for (const auto m : config.mechanisms) {
            check_pairing(spec.scenario, m);
        }
    }
}

std::size_t config_index(const ExperimentConfig& config, std::size_t spec, std::size_t mechanism,
                         std::size_t level) {
    return (spec * config.mechanisms.size() + mechanism) * config.levels.size() + level;
}

/// Every (mechanism, level) row of one (spec, trial) unit, in config order.
std::vector<ResultRow> run_unit(const ExperimentConfig& config, std::size_t spec_index, std::uint64_t trial) {
    const ScenarioSpec& spec = config.specs[spec_index];
    const std::uint64_t seed = derive_seed(config.base_seed, spec_index, trial);

    RandomSource instance_src(seed);
    const IndexedInstance truth = generate_indexed(spec, instance_src);

    std::vector<IndexedVariation> variations;
    variations.reserve(config.levels.size());
    for (const auto level : config.levels) {
        RandomSource variation_src(derive_seed(seed, 1, 0));
        variations.push_back(apply_variation(truth, level, variation_src));
    }

    std::vector<ResultRow> rows;
    rows.reserve(config.mechanisms.size() * config.levels.size());
    for (const auto mechanism : config.mechanisms) {
        for (std::size_t l = 0; l < config.levels.size(); ++l) {
            const auto level = config.levels[l];
            const IndexedVariation& varied = variations[l];
            RandomSource mechanism_src(derive_seed(seed, 2, 0));
            const auto start = std::chrono::steady_clock::now();
            std::vector<Assignment> assignments;
            assignments.reserve(truth.size());
            for (const auto& cat : varied.reported) {
                assignments.push_back(allocate_category(mechanism, cat, mechanism_src));
            }
            const auto elapsed = std::chrono::steady_clock::now() - start;

            ResultRow row;
            row.scenario = spec.scenario;
            row.row = spec.row;
            row.mechanism = mechanism;
            row.variation = level;
            row.trial = trial;
            row.seed = seed;
            for (std::size_t c = 0; c < truth.size(); ++c) {
                for (Index p = 0; p < truth[c].patient_count(); ++p) {
                    const Index d = assignments[c].doctor_of[p];
                    const auto el = efficiency_loss(d, truth[c].prefs[p]);
                    row.tel += el;
                    row.nba += (d != kNone && el == 0) ? 1 : 0;
                }
            }
            if (config.timing) {
                row.runtime_us = static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count());
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    check_config(config);
    const std::size_t per_unit = config.mechanisms.size() * config.levels.size();
    const std::size_t units = config.specs.size() * config.trials;

    ExperimentResult result;
    result.rows.resize(units * per_unit);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(units); ++u) {
        const std::size_t spec = static_cast<std::size_t>(u) / config.trials;
        const std::uint64_t trial = static_cast<std::size_t>(u) % config.trials;
        try {
            const auto rows = run_unit(config, spec, trial);
            // Row slot = config index * trials + trial.
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const std::size_t cfg = spec * per_unit + k;
                result.rows[cfg * config.trials + trial] = rows[k];
            }
        } catch (...) {
#pragma omp critical(matchmech_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return result;
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
    check_config(config);
    struct Keyed {
        std::size_t config;
        ResultRow row;
    };
    std::vector<Keyed> keyed;
    for (std::size_t s = 0; s < config.specs.size(); ++s) {
        for (std::uint64_t t = 0; t < config.trials; ++t) {
            const auto rows = run_unit(config, s, t);
            std::size_t k = 0;
            for (std::size_t m = 0; m < config.mechanisms.size(); ++m) {
                for (std::size_t l = 0; l < config.levels.size(); ++l) {
                    keyed.push_back({config_index(config, s, m, l), rows[k++]});
                }
            }
        }
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return a.config != b.config ? a.config < b.config : a.row.trial < b.row.trial;
    });
    ExperimentResult result;
    result.rows.reserve(keyed.size());
    for (auto& k : keyed) {
        result.rows.push_back(k.row);
    }
    return result;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    if (xs.empty()) {
        return {0.0, 0.0};
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0;
    for (const double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

bool same_config(const ResultRow& a, const ResultRow& b) {
    return a.scenario == b.scenario && a.row == b.row && a.mechanism == b.mechanism && a.variation == b.variation;
}

}  // namespace

std::vector<ConfigSummary> summarize(const ExperimentResult& result) {
    std::vector<ConfigSummary> out;
    std::size_t i = 0;
    while (i < result.rows.size()) {
        std::size_t j = i;
        std::vector<double> tel;
        std::vector<double> nba;
        while (j < result.rows.size() && same_config(result.rows[i], result.rows[j])) {
            tel.push_back(static_cast<double>(result.rows[j].tel));
            nba.push_back(static_cast<double>(result.rows[j].nba));
            ++j;
        }
        const auto& r = result.rows[i];
        ConfigSummary s;
        s.scenario = r.scenario;
        s.row = r.row;
        s.mechanism = r.mechanism;
        s.variation = r.variation;
        s.trials = j - i;
        std::tie(s.mean_tel, s.sd_tel) = mean_sd(tel);
        std::tie(s.mean_nba, s.sd_nba) = mean_sd(nba);
        out.push_back(s);
        i = j;
    }
    return out;
}

std::vector<ResultRow> select_rows(const ExperimentResult& result, int scenario, int row, MechanismKind mechanism,
                                   VariationLevel variation) {
    std::vector<ResultRow> out;
    for (const auto& r : result.rows) {
        if (r.scenario == scenario && r.row == row && r.mechanism == mechanism && r.variation == variation) {
            out.push_back(r);
        }
    }
    return out;
}

PairedTest paired_t_test(std::span<const double> differences) {
    PairedTest out;
    const auto n = differences.size();
    if (n == 0) {
        return out;
    }
    const auto [mean, sd] = mean_sd(std::vector<double>(differences.begin(), differences.end()));
    out.mean = mean;
    if (n < 2) {
        return out;
    }
    if (sd == 0) {
        out.t = mean > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.p_value = mean > 0 ? 0.0 : 1.0;
        return out;
    }
    out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.t));
    return out;
}

}  // namespace matchmech
