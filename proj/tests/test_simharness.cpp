#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matchmech/metrics.hpp"
#include "matchmech/simharness.hpp"
#include "support.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace matchmech;

namespace {

Index total(const std::vector<Index>& v) { return std::accumulate(v.begin(), v.end(), Index{0}); }

double mean_of(const std::vector<ResultRow>& rows, bool tel) {
    double s = 0;
    for (const auto& r : rows) s += static_cast<double>(tel ? r.tel : r.nba);
    return s / static_cast<double>(rows.size());
}

}  // namespace

TEST_SUITE("table") {
    TEST_CASE("scenario 3 first row") {
        const auto spec = table_ii(3, 1);
        CHECK(spec.doctors == std::vector<Index>{12, 9, 8, 13, 10, 7, 10, 11, 11, 9});
        CHECK(spec.patients == std::vector<Index>{8, 6, 6, 10, 8, 5, 9, 7, 8, 8});
        CHECK_FALSE(spec.full_preferences);
    }

    TEST_CASE("row totals") {
        const Index doctors3[] = {100, 200, 300, 400, 500};
        const Index patients3[] = {75, 155, 220, 360, 462};
        for (int row = 1; row <= kTableRows; ++row) {
            CAPTURE(row);
            for (int s : {1, 2}) {
                const auto spec = table_ii(s, row);
                CHECK(spec.doctors == std::vector<Index>(kCategories, static_cast<Index>(10 * row)));
                CHECK(spec.patients == spec.doctors);
                CHECK(spec.full_preferences == (s == 1));
            }
            const auto s3 = table_ii(3, row);
            CHECK(total(s3.doctors) == doctors3[row - 1]);
            CHECK(total(s3.patients) == patients3[row - 1]);
            const auto s4 = table_ii(4, row);
            CHECK(s4.doctors == s3.patients);
            CHECK(s4.patients == s3.doctors);
            for (int s = 1; s <= 4; ++s) CHECK_NOTHROW(validate_spec(table_ii(s, row)));
        }
        CHECK_THROWS_AS(table_ii(5, 1), PreconditionError);
        CHECK_THROWS_AS(table_ii(1, 6), PreconditionError);
    }

    TEST_CASE("inconsistent specs are refused") {
        auto spec = table_ii(1, 1);
        spec.full_preferences = false;
        RandomSource src(1);
        CHECK_THROWS_AS(generate_scenario(spec, src), PreconditionError);
        auto s3 = table_ii(3, 1);
        s3.doctors[0] = s3.patients[0];
        CHECK_THROWS_AS(validate_spec(s3), PreconditionError);
        auto s4 = table_ii(4, 1);
        s4.patients.pop_back();
        CHECK_THROWS_AS(validate_spec(s4), PreconditionError);
    }
}

TEST_SUITE("generation") {
    // Expected lists come from tests/oracle/trace_prng.py.
    TEST_CASE("traced full lists") {
        RandomSource src(11);
        const auto inst = generate_indexed(square_spec(3, 1), src);
        REQUIRE(inst.size() == 1);
        CHECK(inst[0].prefs == std::vector<std::vector<Index>>{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}});
    }

    TEST_CASE("traced partial lists") {
        RandomSource src(3);
        const ScenarioSpec spec{3, 0, {4}, {3}, false};
        const auto inst = generate_indexed(spec, src);
        CHECK(inst[0].prefs == std::vector<std::vector<Index>>{{2}, {0, 1, 3}, {3}});
    }

    TEST_CASE("generated instances are valid with the requested shape") {
        for (int s = 1; s <= 4; ++s) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                RandomSource src(seed);
                const auto spec = table_ii(s, 1 + static_cast<int>(seed % kTableRows));
                const auto inst = generate_scenario(spec, src);
                REQUIRE(validate_instance(inst).empty());
                REQUIRE(inst.categories.size() == kCategories);
                for (std::size_t c = 0; c < kCategories; ++c) {
                    const auto& cat = inst.categories[c];
                    REQUIRE(cat.doctor_count() == spec.doctors[c]);
                    REQUIRE(cat.patient_count() == spec.patients[c]);
                    for (const auto& p : cat.patients) {
                        REQUIRE(!p.prefs.empty());
                        REQUIRE(p.prefs.size() <= cat.doctor_count());
                        if (s == 1) REQUIRE(p.prefs.size() == cat.doctor_count());
                    }
                }
            }
        }
        RandomSource src(0);
        const auto first = generate_scenario(table_ii(1, 1), src);
        CHECK(first.categories[0].id == "x1");
        CHECK(first.categories[9].doctors.back() == "s10");
        CHECK(first.categories[0].patients[0].id == "p1");
    }
}

TEST_SUITE("variation") {
    TEST_CASE("none leaves the market alone") {
        RandomSource a(4), b(4);
        const auto truth = generate_scenario(table_ii(1, 1), a);
        const auto v = apply_variation(truth, VariationLevel::none, b);
        CHECK(v.reported == truth);
        CHECK(v.misreporters.empty());
    }

    TEST_CASE("misreports permute the true list") {
        RandomSource gen(6);
        const auto truth = generate_indexed(table_ii(3, 2), gen);
        RandomSource src(7);
        const auto v = apply_variation(truth, VariationLevel::large, src);
        CHECK(!v.misreporters.empty());
        for (std::size_t c = 0; c < truth.size(); ++c) {
            for (Index p = 0; p < truth[c].patient_count(); ++p) {
                auto a = truth[c].prefs[p];
                auto b = v.reported[c].prefs[p];
                if (a.size() == 1) REQUIRE(a == b);
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                REQUIRE(a == b);
            }
        }
        for (const auto& [c, p] : v.misreporters) REQUIRE(c < truth.size());
    }

    TEST_CASE("levels drawn from one seed are nested") {
        RandomSource gen(8);
        const auto truth = generate_indexed(table_ii(1, 3), gen);
        std::vector<IndexedVariation> v;
        for (auto level : {VariationLevel::small, VariationLevel::medium, VariationLevel::large}) {
            RandomSource src(99);
            v.push_back(apply_variation(truth, level, src));
        }
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            CHECK(v[i].misreporters.size() <= v[i + 1].misreporters.size());
            CHECK(std::includes(v[i + 1].misreporters.begin(), v[i + 1].misreporters.end(),
                                v[i].misreporters.begin(), v[i].misreporters.end()));
            for (const auto& [c, p] : v[i].misreporters) {
                CHECK(v[i].reported[c].prefs[p] == v[i + 1].reported[c].prefs[p]);
            }
        }
    }

    TEST_CASE("misreporter counts track the level") {
        // 10^4 patients; short lists are enough
        IndexedInstance many(100, IndexedCategory{2, std::vector<std::vector<Index>>(100, {1, 0})});
        const double n = 1e4;
        for (auto level : {VariationLevel::small, VariationLevel::medium, VariationLevel::large}) {
            const double p = 1.0 / static_cast<double>(misreport_denominator(level));
            RandomSource src(2000 + misreport_denominator(level));
            const auto v = apply_variation(many, level, src);
            const double count = static_cast<double>(v.misreporters.size());
            CHECK(std::abs(count - n * p) < 5 * std::sqrt(n * p * (1 - p)));
        }
    }

    TEST_CASE("named variant keeps ids") {
        RandomSource gen(1);
        const auto truth = generate_scenario(table_ii(2, 1), gen);
        RandomSource src(2);
        const auto v = apply_variation(truth, VariationLevel::medium, src);
        for (const auto& [c, p] : v.misreporters) {
            CHECK(c.front() == 'x');
            CHECK(p.front() == 'p');
        }
        CHECK(v.reported.categories.size() == truth.categories.size());
    }
}

TEST_SUITE("experiments") {
    TEST_CASE("pairings") {
        CHECK_NOTHROW(check_pairing(1, MechanismKind::toam));
        CHECK_NOTHROW(check_pairing(1, MechanismKind::ranpam));
        for (int s = 1; s <= 4; ++s) CHECK_NOTHROW(check_pairing(s, MechanismKind::toam_icomp));
        CHECK_THROWS_AS(check_pairing(2, MechanismKind::toam), PreconditionError);
        CHECK_THROWS_AS(check_pairing(4, MechanismKind::ranpam), PreconditionError);

        ExperimentConfig bad{{table_ii(3, 1)}, {MechanismKind::toam}, {VariationLevel::none}, 3, 1, false};
        CHECK_THROWS_AS(run_experiment(bad), PreconditionError);
        CHECK_THROWS_AS(run_experiment_serial(bad), PreconditionError);
    }

    TEST_CASE("zero trials") {
        ExperimentConfig cfg{{table_ii(1, 1)}, {MechanismKind::toam}, {VariationLevel::none}, 0, 1, false};
        CHECK(run_experiment(cfg).rows.empty());
        CHECK(summarize(run_experiment(cfg)).empty());
    }

    TEST_CASE("table layout, reproducibility and parallel agreement") {
        ExperimentConfig cfg{{table_ii(1, 1), table_ii(1, 2)},
                             {MechanismKind::toam, MechanismKind::ranpam, MechanismKind::toam_icomp},
                             {VariationLevel::none, VariationLevel::large},
                             7,
                             2024,
                             false};
        const auto a = run_experiment(cfg);
        REQUIRE(a.rows.size() == 2 * 3 * 2 * 7);
        CHECK(a.rows == run_experiment(cfg).rows);
        CHECK(a.rows == run_experiment_serial(cfg).rows);
#ifdef _OPENMP
        // oversubscribe so the dynamic schedule interleaves units
        const int before = omp_get_max_threads();
        omp_set_num_threads(4);
        CHECK(run_experiment(cfg).rows == a.rows);
        omp_set_num_threads(before);
#endif

        CHECK(a.rows[0].mechanism == MechanismKind::toam);
        CHECK(a.rows[0].variation == VariationLevel::none);
        CHECK(a.rows[6].trial == 6);
        CHECK(a.rows[7].variation == VariationLevel::large);
        CHECK(a.rows[14].mechanism == MechanismKind::ranpam);
        CHECK(a.rows[42].row == 2);
        for (const auto& r : a.rows) {
            CHECK(r.runtime_us == 0);
            // spec index equals row - 1 here
            CHECK(r.seed == derive_seed(2024, static_cast<std::uint64_t>(r.row - 1), r.trial));
        }

        auto other = cfg;
        other.base_seed = 2025;
        CHECK(run_experiment(other).rows != a.rows);
    }

    TEST_CASE("mechanisms in one trial share the true market") {
        ExperimentConfig cfg{{table_ii(1, 1)}, {MechanismKind::toam}, {VariationLevel::none}, 3, 77, false};
        const auto rows = run_experiment(cfg).rows;
        for (const auto& r : rows) {
            RandomSource src(r.seed);
            const auto truth = generate_scenario(table_ii(1, 1), src);
            RandomSource mech(derive_seed(r.seed, 2, 0));
            const auto run = run_mechanism(MechanismKind::toam, truth, mech);
            CHECK(r.tel == total_efficiency_loss(truth, run.allocation));
            CHECK(r.nba == number_best_allocation(truth, run.allocation));
        }
    }

    TEST_CASE("top trading cycles beat random pairing on the smallest row") {
        ExperimentConfig cfg{{table_ii(1, 1)},
                             {MechanismKind::toam, MechanismKind::ranpam},
                             {VariationLevel::none},
                             100,
                             5,
                             false};
        const auto result = run_experiment(cfg);
        const auto toam = select_rows(result, 1, 1, MechanismKind::toam, VariationLevel::none);
        const auto ranpam = select_rows(result, 1, 1, MechanismKind::ranpam, VariationLevel::none);
        REQUIRE(toam.size() == 100);
        CHECK(mean_of(toam, true) < mean_of(ranpam, true));
        CHECK(mean_of(toam, false) > mean_of(ranpam, false));
    }

    TEST_CASE("summaries") {
        ExperimentResult r;
        for (std::uint64_t t = 0; t < 4; ++t) {
            r.rows.push_back({1, 1, MechanismKind::toam, VariationLevel::none, t, 0, 2 * t, t % 2, 0});
        }
        r.rows.push_back({1, 1, MechanismKind::toam, VariationLevel::small, 0, 0, 5, 1, 0});
        const auto s = summarize(r);
        REQUIRE(s.size() == 2);
        CHECK(s[0].trials == 4);
        CHECK(s[0].mean_tel == doctest::Approx(3.0));
        CHECK(s[0].sd_tel == doctest::Approx(std::sqrt(20.0 / 3.0)));
        CHECK(s[0].mean_nba == doctest::Approx(0.5));
        CHECK(s[1].trials == 1);
        CHECK(s[1].sd_tel == 0.0);
    }

    TEST_CASE("paired t-test against reference values") {
        const std::vector<double> a{1, 2, 3, 4, 5};
        const auto t1 = paired_t_test(a);
        CHECK(t1.t == doctest::Approx(4.242640687119285));
        CHECK(t1.p_value == doctest::Approx(0.0066177997818413475).epsilon(1e-9));
        const std::vector<double> b{0.5, -0.2, 0.1, 0.4, 0.3, -0.1};
        const auto t2 = paired_t_test(b);
        CHECK(t2.t == doctest::Approx(1.4555562743489545));
        CHECK(t2.p_value == doctest::Approx(0.10264075261436316).epsilon(1e-9));

        const std::vector<double> constant{2, 2, 2};
        CHECK(paired_t_test(constant).p_value == 0.0);
        const std::vector<double> zeros{0, 0, 0};
        CHECK(paired_t_test(zeros).p_value == 1.0);
    }
}
