#include "matchmech/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace matchmech {

bool CategoryInstance::full_preferences() const noexcept {
    return std::all_of(patients.begin(), patients.end(),
                       [&](const Patient& p) { return p.prefs.size() == doctors.size(); });
}

bool IndexedCategory::full_preferences() const noexcept {
    return std::all_of(prefs.begin(), prefs.end(),
                       [&](const auto& list) { return list.size() == doctor_count; });
}

BoundError::BoundError(std::size_t size, std::size_t bound)
    : std::runtime_error("instance size " + std::to_string(size) + " exceeds search bound " +
                         std::to_string(bound)),
      size_(size),
      bound_(bound) {}

const char* to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::empty_category_id: return "empty_category_id";
        case ViolationKind::duplicate_category: return "duplicate_category";
        case ViolationKind::empty_doctor_id: return "empty_doctor_id";
        case ViolationKind::duplicate_doctor: return "duplicate_doctor";
        case ViolationKind::empty_patient_id: return "empty_patient_id";
        case ViolationKind::duplicate_patient: return "duplicate_patient";
        case ViolationKind::duplicate_preference: return "duplicate_preference";
        case ViolationKind::foreign_doctor: return "foreign_doctor";
        case ViolationKind::unknown_doctor: return "unknown_doctor";
    }
    return "unknown";
}

std::vector<Violation> validate_instance(const ProblemInstance& instance) {
    std::vector<Violation> out;

    // doctor id -> every category declaring it
    std::unordered_map<std::string, std::unordered_set<std::string>> owners;
    for (const auto& cat : instance.categories) {
        for (const auto& d : cat.doctors) {
            owners[d].insert(cat.id);
        }
    }

    std::unordered_set<std::string> seen_categories;
    for (const auto& cat : instance.categories) {
        if (cat.id.empty()) {
            out.push_back({cat.id, ViolationKind::empty_category_id, ""});
        } else if (!seen_categories.insert(cat.id).second) {
            out.push_back({cat.id, ViolationKind::duplicate_category, cat.id});
        }

        const std::unordered_set<std::string> declared(cat.doctors.begin(), cat.doctors.end());
        std::unordered_set<std::string> doctors;
        for (const auto& d : cat.doctors) {
            if (d.empty()) {
                out.push_back({cat.id, ViolationKind::empty_doctor_id, ""});
            } else if (!doctors.insert(d).second) {
                out.push_back({cat.id, ViolationKind::duplicate_doctor, d});
            }
        }

        std::unordered_set<std::string> patients;
        for (const auto& p : cat.patients) {
            if (p.id.empty()) {
                out.push_back({cat.id, ViolationKind::empty_patient_id, ""});
            } else if (!patients.insert(p.id).second) {
                out.push_back({cat.id, ViolationKind::duplicate_patient, p.id});
            }

            std::unordered_set<std::string> listed;
            for (const auto& d : p.prefs) {
                if (!listed.insert(d).second) {
                    out.push_back({cat.id, ViolationKind::duplicate_preference, d});
                    continue;
                }
                if (declared.count(d) != 0) {
                    continue;
                }
                const auto it = owners.find(d);
                const auto kind = it == owners.end() ? ViolationKind::unknown_doctor
                                                     : ViolationKind::foreign_doctor;
                out.push_back({cat.id, kind, d});
            }
        }
    }
    return out;
}

namespace {

template <typename Ids>
std::unordered_map<std::string, Index> position_map(const Ids& ids) {
    std::unordered_map<std::string, Index> out;
    out.reserve(ids.size());
    for (Index i = 0; i < ids.size(); ++i) {
        out.emplace(ids[i], i);
    }
    return out;
}

std::unordered_map<std::string, Index> patient_map(const CategoryInstance& cat) {
    std::unordered_map<std::string, Index> out;
    out.reserve(cat.patients.size());
    for (Index i = 0; i < cat.patients.size(); ++i) {
        out.emplace(cat.patients[i].id, i);
    }
    return out;
}

}  // namespace

IndexedCategory index_category(const CategoryInstance& cat) {
    const auto doctors = position_map(cat.doctors);
    IndexedCategory out;
    out.doctor_count = static_cast<Index>(cat.doctors.size());
    out.prefs.reserve(cat.patients.size());
    for (const auto& p : cat.patients) {
        std::vector<Index> list;
        list.reserve(p.prefs.size());
        for (const auto& d : p.prefs) {
            const auto it = doctors.find(d);
            if (it == doctors.end()) {
                throw PreconditionError(cat.id, "patient '" + p.id + "' lists unknown doctor '" + d + "'");
            }
            list.push_back(it->second);
        }
        out.prefs.push_back(std::move(list));
    }
    return out;
}

Index doctor_index(const CategoryInstance& cat, const DoctorId& id) {
    const auto it = std::find(cat.doctors.begin(), cat.doctors.end(), id);
    if (it == cat.doctors.end()) {
        throw PreconditionError(cat.id, "unknown doctor '" + id + "'");
    }
    return static_cast<Index>(it - cat.doctors.begin());
}

Index patient_index(const CategoryInstance& cat, const PatientId& id) {
    const auto it = std::find_if(cat.patients.begin(), cat.patients.end(),
                                 [&](const Patient& p) { return p.id == id; });
    if (it == cat.patients.end()) {
        throw PreconditionError(cat.id, "unknown patient '" + id + "'");
    }
    return static_cast<Index>(it - cat.patients.begin());
}

std::size_t rank_of(const std::vector<Index>& list, Index doctor) noexcept {
    return static_cast<std::size_t>(std::find(list.begin(), list.end(), doctor) - list.begin());
}

CategoryAllocation to_allocation(const CategoryInstance& cat, const Assignment& assignment) {
    CategoryAllocation out;
    out.category = cat.id;
    std::vector<bool> used(cat.doctors.size(), false);
    for (std::size_t p = 0; p < cat.patients.size(); ++p) {
        const Index d = assignment.doctor_of[p];
        if (d == kNone) {
            out.unmatched_patients.push_back(cat.patients[p].id);
        } else {
            out.pairs.emplace_back(cat.patients[p].id, cat.doctors[d]);
            used[d] = true;
        }
    }
    for (std::size_t d = 0; d < cat.doctors.size(); ++d) {
        if (!used[d]) {
            out.unmatched_doctors.push_back(cat.doctors[d]);
        }
    }
    return out;
}

CategoryEndowment to_endowment(const CategoryInstance& cat, const Ownership& ownership) {
    CategoryEndowment out;
    out.category = cat.id;
    std::vector<Index> owner(cat.doctors.size(), kNone);
    for (Index p = 0; p < ownership.endowed.size(); ++p) {
        owner[ownership.endowed[p]] = p;
    }
    for (std::size_t d = 0; d < cat.doctors.size(); ++d) {
        if (owner[d] != kNone) {
            out.owners.emplace_back(cat.doctors[d], cat.patients[owner[d]].id);
        }
    }
    return out;
}

Assignment to_assignment(const CategoryInstance& cat, const CategoryAllocation& alloc) {
    const auto doctors = position_map(cat.doctors);
    const auto patients = patient_map(cat);
    auto lookup = [&](const auto& map, const std::string& id, const char* what) {
        const auto it = map.find(id);
        if (it == map.end()) {
            throw PreconditionError(cat.id, std::string("allocation names unknown ") + what + " '" + id + "'");
        }
        return it->second;
    };

    Assignment out{std::vector<Index>(cat.patients.size(), kNone)};
    std::vector<char> patient_seen(cat.patients.size(), 0);
    std::vector<char> doctor_seen(cat.doctors.size(), 0);
    auto mark = [&](std::vector<char>& seen, Index i, const std::string& id) {
        if (seen[i]) {
            throw PreconditionError(cat.id, "allocation mentions '" + id + "' more than once");
        }
        seen[i] = 1;
    };

    for (const auto& [pid, did] : alloc.pairs) {
        const Index p = lookup(patients, pid, "patient");
        const Index d = lookup(doctors, did, "doctor");
        mark(patient_seen, p, pid);
        mark(doctor_seen, d, did);
        const auto& prefs = cat.patients[p].prefs;
        if (std::find(prefs.begin(), prefs.end(), did) == prefs.end()) {
            throw PreconditionError(cat.id, "patient '" + pid + "' allocated unlisted doctor '" + did + "'");
        }
        out.doctor_of[p] = d;
    }
    for (const auto& pid : alloc.unmatched_patients) {
        mark(patient_seen, lookup(patients, pid, "patient"), pid);
    }
    for (const auto& did : alloc.unmatched_doctors) {
        mark(doctor_seen, lookup(doctors, did, "doctor"), did);
    }
    const bool complete = std::all_of(patient_seen.begin(), patient_seen.end(), [](char c) { return c; }) &&
                          std::all_of(doctor_seen.begin(), doctor_seen.end(), [](char c) { return c; });
    if (!complete) {
        throw PreconditionError(cat.id, "allocation does not cover every participant");
    }
    return out;
}

Ownership to_ownership(const CategoryInstance& cat, const CategoryEndowment& endowment) {
    if (cat.doctors.size() != cat.patients.size() || endowment.owners.size() != cat.patients.size()) {
        throw PreconditionError(cat.id, "endowment must pair every doctor with exactly one patient");
    }
    const auto doctors = position_map(cat.doctors);
    const auto patients = patient_map(cat);
    Ownership out{std::vector<Index>(cat.patients.size(), kNone)};
    std::vector<char> doctor_used(cat.doctors.size(), 0);
    for (const auto& [did, pid] : endowment.owners) {
        const auto d = doctors.find(did);
        const auto p = patients.find(pid);
        if (d == doctors.end() || p == patients.end()) {
            throw PreconditionError(cat.id, "endowment names unknown participant ('" + did + "', '" + pid + "')");
        }
        if (doctor_used[d->second] || out.endowed[p->second] != kNone) {
            throw PreconditionError(cat.id, "endowment is not a bijection");
        }
        doctor_used[d->second] = 1;
        out.endowed[p->second] = d->second;
    }
    return out;
}

const CategoryAllocation& find_category(const Allocation& alloc, const CategoryId& id) {
    for (const auto& c : alloc.categories) {
        if (c.category == id) {
            return c;
        }
    }
    throw PreconditionError(id, "allocation has no entry for this category");
}

const CategoryEndowment& find_category(const Endowment& endowment, const CategoryId& id) {
    for (const auto& c : endowment.categories) {
        if (c.category == id) {
            return c;
        }
    }
    throw PreconditionError(id, "endowment has no entry for this category");
}

}  // namespace matchmech
