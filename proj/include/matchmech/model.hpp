#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchmech {

using CategoryId = std::string;
using PatientId = std::string;
using DoctorId = std::string;

/// Doctors in decreasing order of preference; rank 1 is the front.
using PreferenceList = std::vector<DoctorId>;

struct Patient {
    PatientId id;
    PreferenceList prefs;

    friend bool operator==(const Patient&, const Patient&) = default;
};

/// One disease category: its doctors, its patients (declared order is
/// significant) and each patient's strict preference list.
struct CategoryInstance {
    CategoryId id;
    std::vector<DoctorId> doctors;
    std::vector<Patient> patients;

    std::size_t doctor_count() const noexcept { return doctors.size(); }
    std::size_t patient_count() const noexcept { return patients.size(); }

    /// True iff every patient ranks every doctor of the category.
    bool full_preferences() const noexcept;

    friend bool operator==(const CategoryInstance&, const CategoryInstance&) = default;
};

struct ProblemInstance {
    std::vector<CategoryInstance> categories;

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Initial doctor -> patient ownership for one category.
struct CategoryEndowment {
    CategoryId category;
    std::vector<std::pair<DoctorId, PatientId>> owners;

    friend bool operator==(const CategoryEndowment&, const CategoryEndowment&) = default;
};

struct Endowment {
    std::vector<CategoryEndowment> categories;

    friend bool operator==(const Endowment&, const Endowment&) = default;
};

/// Result of a mechanism on one category. Pairs are listed in the
/// category's declared patient order; unmatched ids in declared order.
struct CategoryAllocation {
    CategoryId category;
    std::vector<std::pair<PatientId, DoctorId>> pairs;
    std::vector<PatientId> unmatched_patients;
    std::vector<DoctorId> unmatched_doctors;

    friend bool operator==(const CategoryAllocation&, const CategoryAllocation&) = default;
};

struct Allocation {
    std::vector<CategoryAllocation> categories;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// A group of patients together with the doctor each member receives when
/// the group trades among itself.
struct Coalition {
    std::vector<PatientId> members;
    std::vector<DoctorId> reallocation;  // parallel to members

    friend bool operator==(const Coalition&, const Coalition&) = default;
};

// ---------------------------------------------------------------------------
// Errors

/// An input does not satisfy the preconditions of the requested operation.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(std::string category, const std::string& what)
        : std::invalid_argument(category.empty() ? what : "category '" + category + "': " + what),
          category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

/// An exhaustive search was asked to run above its configured size bound.
class BoundError : public std::runtime_error {
public:
    BoundError(std::size_t size, std::size_t bound);

    std::size_t size() const noexcept { return size_; }
    std::size_t bound() const noexcept { return bound_; }

private:
    std::size_t size_;
    std::size_t bound_;
};

/// Data that should be consistent is not (e.g. an allocated doctor missing
/// from a patient's true list).
class IntegrityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    empty_category_id,
    duplicate_category,
    empty_doctor_id,
    duplicate_doctor,
    empty_patient_id,
    duplicate_patient,
    duplicate_preference,
    foreign_doctor,  // listed doctor belongs to a different category
    unknown_doctor,  // listed doctor belongs to no category
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
    CategoryId category;
    ViolationKind kind;
    std::string offending_id;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Reports one record per breached invariant; never throws.
std::vector<Violation> validate_instance(const ProblemInstance& instance);

// ---------------------------------------------------------------------------
// Index form used by the mechanism kernels.
//
// Patients and doctors are numbered by their declared position.

using Index = std::uint32_t;
inline constexpr Index kNone = std::numeric_limits<Index>::max();

struct IndexedCategory {
    Index doctor_count = 0;
    std::vector<std::vector<Index>> prefs;  // per patient

    Index patient_count() const noexcept { return static_cast<Index>(prefs.size()); }
    bool full_preferences() const noexcept;
};

/// Patient -> doctor matching; kNone marks an unmatched patient.
struct Assignment {
    std::vector<Index> doctor_of;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Endowed doctor of every patient (a bijection when m == n).
struct Ownership {
    std::vector<Index> endowed;

    friend bool operator==(const Ownership&, const Ownership&) = default;
};

/// Throws PreconditionError if a list names a doctor outside the category.
IndexedCategory index_category(const CategoryInstance& cat);

Index doctor_index(const CategoryInstance& cat, const DoctorId& id);
Index patient_index(const CategoryInstance& cat, const PatientId& id);

/// Position of `doctor` in `list` (0 = best), or list.size() when absent.
std::size_t rank_of(const std::vector<Index>& list, Index doctor) noexcept;

CategoryAllocation to_allocation(const CategoryInstance& cat, const Assignment& assignment);
CategoryEndowment to_endowment(const CategoryInstance& cat, const Ownership& ownership);

/// Converts back to index form, checking the allocation invariants
/// (known ids, no repeats, pairs plus unmatched partition the participants,
/// every allocated doctor is on the patient's list).
/// Throws PreconditionError on any breach.
Assignment to_assignment(const CategoryInstance& cat, const CategoryAllocation& alloc);

/// Requires a bijection between all doctors and all patients.
Ownership to_ownership(const CategoryInstance& cat, const CategoryEndowment& endowment);

const CategoryAllocation& find_category(const Allocation& alloc, const CategoryId& id);
const CategoryEndowment& find_category(const Endowment& endowment, const CategoryId& id);

}  // namespace matchmech
