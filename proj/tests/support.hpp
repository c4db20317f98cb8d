#pragma once

#include <string>
#include <utility>
#include <vector>

#include "matchmech/model.hpp"
#include "matchmech/random.hpp"

namespace support {

using namespace matchmech;

inline CategoryInstance make_category(std::string id, std::vector<DoctorId> doctors,
                                      std::vector<std::pair<PatientId, PreferenceList>> lists) {
    CategoryInstance cat{std::move(id), std::move(doctors), {}};
    for (auto& [p, prefs] : lists) {
        cat.patients.push_back({std::move(p), std::move(prefs)});
    }
    return cat;
}

// The 5 x 5 worked example.
inline CategoryInstance example_category() {
    return make_category("x1", {"s1", "s2", "s3", "s4", "s5"},
                         {{"p1", {"s2", "s4", "s3", "s1", "s5"}},
                          {"p2", {"s3", "s4", "s5", "s1", "s2"}},
                          {"p3", {"s2", "s3", "s1", "s4", "s5"}},
                          {"p4", {"s5", "s2", "s3", "s4", "s1"}},
                          {"p5", {"s1", "s4", "s2", "s3", "s5"}}});
}

inline ProblemInstance example_instance() { return {{example_category()}}; }

inline CategoryEndowment identity_endowment(const CategoryInstance& cat) {
    CategoryEndowment e{cat.id, {}};
    for (std::size_t i = 0; i < cat.patients.size(); ++i) {
        e.owners.emplace_back(cat.doctors[i], cat.patients[i].id);
    }
    return e;
}

inline std::vector<std::pair<PatientId, DoctorId>> example_toam_pairs() {
    return {{"p1", "s4"}, {"p2", "s3"}, {"p3", "s2"}, {"p4", "s5"}, {"p5", "s1"}};
}

inline void shuffle(std::vector<Index>& v, RandomSource& src) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        std::swap(v[i], v[i + src.below(v.size() - i)]);
    }
}

// Random lists over m doctors; with `full` every list is a permutation,
// otherwise lengths are uniform on [0, m].
inline IndexedCategory random_indexed(Index m, Index n, bool full, RandomSource& src) {
    IndexedCategory cat;
    cat.doctor_count = m;
    for (Index p = 0; p < n; ++p) {
        std::vector<Index> list(m);
        for (Index d = 0; d < m; ++d) list[d] = d;
        shuffle(list, src);
        if (!full) list.resize(src.below(m + 1));
        cat.prefs.push_back(std::move(list));
    }
    return cat;
}

inline CategoryInstance named(const IndexedCategory& ic, std::string id = "x1") {
    CategoryInstance cat{std::move(id), {}, {}};
    for (Index d = 0; d < ic.doctor_count; ++d) cat.doctors.push_back("s" + std::to_string(d + 1));
    for (Index p = 0; p < ic.patient_count(); ++p) {
        Patient patient{"p" + std::to_string(p + 1), {}};
        for (Index d : ic.prefs[p]) patient.prefs.push_back(cat.doctors[d]);
        cat.patients.push_back(std::move(patient));
    }
    return cat;
}

inline Ownership random_ownership(Index n, RandomSource& src) {
    Ownership o{std::vector<Index>(n)};
    for (Index i = 0; i < n; ++i) o.endowed[i] = i;
    shuffle(o.endowed, src);
    return o;
}

}  // namespace support
