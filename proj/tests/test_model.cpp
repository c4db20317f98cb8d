#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "matchmech/model.hpp"
#include "support.hpp"

using namespace matchmech;
using support::example_instance;

namespace {

ProblemInstance two_categories() {
    auto a = support::make_category("x1", {"s1", "s2"}, {{"p1", {"s1", "s2"}}, {"p2", {"s2"}}});
    auto b = support::make_category("x2", {"s3"}, {{"p3", {"s3"}}});
    return {{a, b}};
}

}  // namespace

TEST_CASE("well-formed instances validate") {
    CHECK(validate_instance(example_instance()).empty());
    CHECK(validate_instance(two_categories()).empty());
    CHECK(validate_instance(ProblemInstance{}).empty());
}

TEST_CASE("duplicate doctor id is one violation") {
    auto inst = example_instance();
    inst.categories[0].doctors[4] = "s1";
    // s5 now appears on lists without being declared anywhere
    for (auto& p : inst.categories[0].patients) {
        for (auto& d : p.prefs) {
            if (d == "s5") d = "s1";
        }
    }
    // every list now names s1 twice, so drop the second copy
    for (auto& p : inst.categories[0].patients) {
        auto second = std::find(std::find(p.prefs.begin(), p.prefs.end(), "s1") + 1, p.prefs.end(), "s1");
        p.prefs.erase(second);
    }
    const auto v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::duplicate_doctor);
    CHECK(v[0].category == "x1");
    CHECK(v[0].offending_id == "s1");
}

TEST_CASE("ids are scoped to their category") {
    auto inst = two_categories();
    inst.categories[1].doctors = {"s1"};
    inst.categories[1].patients[0] = {"p1", {"s1"}};
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("list naming another category's doctor") {
    auto inst = two_categories();
    inst.categories[1].patients[0].prefs.push_back("s1");
    const auto v = validate_instance(inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::foreign_doctor);
    CHECK(v[0].category == "x2");
    CHECK(v[0].offending_id == "s1");
}

// Each mutation breaks exactly one invariant of a valid instance.
TEST_CASE("single-field mutations report exactly the matching violation") {
    struct Mutation {
        std::string name;
        ViolationKind kind;
        void (*apply)(ProblemInstance&);
    };
    const Mutation mutations[] = {
        {"empty category id", ViolationKind::empty_category_id, [](ProblemInstance& i) { i.categories[1].id = ""; }},
        {"repeated category id", ViolationKind::duplicate_category,
         [](ProblemInstance& i) { i.categories[1].id = "x1"; }},
        {"empty doctor id", ViolationKind::empty_doctor_id,
         [](ProblemInstance& i) { i.categories[0].doctors.push_back(""); }},
        {"doctor declared twice", ViolationKind::duplicate_doctor,
         [](ProblemInstance& i) { i.categories[1].doctors.push_back("s3"); }},
        {"empty patient id", ViolationKind::empty_patient_id,
         [](ProblemInstance& i) { i.categories[0].patients[1].id = ""; }},
        {"patient declared twice", ViolationKind::duplicate_patient,
         [](ProblemInstance& i) { i.categories[0].patients[1].id = "p1"; }},
        {"list repeats a doctor", ViolationKind::duplicate_preference,
         [](ProblemInstance& i) { i.categories[0].patients[1].prefs.push_back("s2"); }},
        {"list names a foreign doctor", ViolationKind::foreign_doctor,
         [](ProblemInstance& i) { i.categories[0].patients[1].prefs.push_back("s3"); }},
        {"list names an unknown doctor", ViolationKind::unknown_doctor,
         [](ProblemInstance& i) { i.categories[0].patients[0].prefs.push_back("s9"); }},
    };
    for (const auto& m : mutations) {
        CAPTURE(m.name);
        auto inst = two_categories();
        m.apply(inst);
        const auto v = validate_instance(inst);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == m.kind);
    }
}

TEST_CASE("index round trip") {
    const auto cat = support::example_category();
    const auto ic = index_category(cat);
    CHECK(ic.doctor_count == 5);
    CHECK(ic.patient_count() == 5);
    CHECK(ic.full_preferences());
    CHECK(ic.prefs[0] == std::vector<Index>{1, 3, 2, 0, 4});
    CHECK(cat.full_preferences());
    CHECK(rank_of(ic.prefs[0], 3) == 1);
    CHECK(rank_of(ic.prefs[0], 7) == 5);

    const Assignment a{{3, 2, 1, 4, 0}};
    const auto alloc = to_allocation(cat, a);
    CHECK(alloc.pairs == support::example_toam_pairs());
    CHECK(alloc.unmatched_patients.empty());
    CHECK(alloc.unmatched_doctors.empty());
    CHECK(to_assignment(cat, alloc) == a);

    const Ownership o{{0, 1, 2, 3, 4}};
    const auto e = to_endowment(cat, o);
    CHECK(e == support::identity_endowment(cat));
    CHECK(to_ownership(cat, e) == o);
}

TEST_CASE("allocation conversion rejects broken allocations") {
    const auto cat = support::example_category();
    auto alloc = to_allocation(cat, Assignment{{3, 2, 1, 4, 0}});

    auto repeated = alloc;
    repeated.pairs[1].second = "s4";
    repeated.unmatched_doctors.push_back("s3");
    CHECK_THROWS_AS(to_assignment(cat, repeated), PreconditionError);

    auto missing = alloc;
    missing.pairs.pop_back();
    CHECK_THROWS_AS(to_assignment(cat, missing), PreconditionError);

    auto unknown = alloc;
    unknown.pairs[0].first = "p9";
    CHECK_THROWS_AS(to_assignment(cat, unknown), PreconditionError);

    auto off_list = support::make_category("x1", {"s1", "s2"}, {{"p1", {"s1"}}, {"p2", {"s1", "s2"}}});
    CategoryAllocation bad{"x1", {{"p1", "s2"}, {"p2", "s1"}}, {}, {}};
    CHECK_THROWS_AS(to_assignment(off_list, bad), PreconditionError);

    CategoryEndowment not_bijection{"x1", {{"s1", "p1"}, {"s1", "p2"}}};
    CHECK_THROWS_AS(to_ownership(off_list, not_bijection), PreconditionError);
}

TEST_CASE("lookups") {
    const auto cat = support::example_category();
    CHECK(doctor_index(cat, "s3") == 2);
    CHECK(patient_index(cat, "p5") == 4);
    CHECK_THROWS_AS(doctor_index(cat, "s0"), PreconditionError);
    Allocation alloc{{CategoryAllocation{"x1", {}, {}, {}}}};
    CHECK(find_category(alloc, "x1").category == "x1");
    CHECK_THROWS_AS(find_category(alloc, "x2"), PreconditionError);
}
