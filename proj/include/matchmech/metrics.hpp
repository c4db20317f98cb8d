#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchmech/model.hpp"

namespace matchmech {

/// Rank of the allocated doctor on the patient's true list minus one; an
/// unmatched patient scores the length of its list. Throws IntegrityError if
/// the doctor is not on the list.
std::uint64_t efficiency_loss(const std::optional<DoctorId>& allocated, const PreferenceList& true_list);

/// Index-level variant used by the simulation kernels (kNone = unmatched).
std::uint64_t efficiency_loss(Index allocated, const std::vector<Index>& true_list);

struct PatientScore {
    PatientId patient;
    std::uint64_t el = 0;
    bool best = false;  // matched to rank 1
};

struct CategoryMetrics {
    CategoryId category;
    std::vector<PatientScore> patients;
    std::uint64_t tel = 0;
    std::uint64_t nba = 0;
    std::uint64_t unmatched = 0;
};

struct MetricsReport {
    std::vector<CategoryMetrics> categories;
    std::uint64_t tel = 0;
    std::uint64_t nba = 0;
};

/// Scores `alloc` against the lists in `truth` (which must be the true,
/// unaltered preferences even when the mechanism ran on misreports).
MetricsReport compute_metrics(const ProblemInstance& truth, const Allocation& alloc);

std::uint64_t total_efficiency_loss(const ProblemInstance& truth, const Allocation& alloc);
std::uint64_t number_best_allocation(const ProblemInstance& truth, const Allocation& alloc);

}  // namespace matchmech
