#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matchmech/model.hpp"

namespace matchmech {

/// Exhaustive-search limits. Every search refuses with BoundError instead of
/// sampling when its input is larger than the limit.
namespace bounds {
inline constexpr std::size_t blocking = 10;   // patients, coalition search
inline constexpr std::size_t core = 6;        // patients, core enumeration (6! matchings)
inline constexpr std::size_t pareto = 6;      // patients, Pareto search
inline constexpr std::size_t misreport = 5;   // length of the probed list
}  // namespace bounds

// ---------------------------------------------------------------------------
// Index level

struct IndexedCoalition {
    std::vector<Index> members;
    std::vector<Index> doctors;  // what each member receives
};

/// Coalition of matched patients that can swap the doctors they hold so that
/// nobody is worse off and somebody is strictly better off. Subsets are tried
/// smallest first.
std::optional<IndexedCoalition> find_blocking_coalition(const IndexedCategory& cat, const Assignment& assignment,
                                                        std::size_t bound = bounds::blocking);

/// Same, but members trade the doctors they were endowed with.
std::optional<IndexedCoalition> find_endowment_blocking_coalition(const IndexedCategory& cat,
                                                                  const Ownership& ownership,
                                                                  const Assignment& assignment,
                                                                  std::size_t bound = bounds::blocking);

struct IndexedCore {
    std::vector<Assignment> reallocation_core;
    std::vector<Assignment> endowment_core;
};

/// Enumerates every perfect matching and keeps the unblocked ones under each
/// blocking notion. Requires full preferences and m == n <= bound.
IndexedCore enumerate_core(const IndexedCategory& cat, const Ownership& ownership,
                           std::size_t bound = bounds::core);

/// An allocation every patient weakly prefers and one strictly prefers, using
/// any doctors of the category. Unmatched ranks below every listed doctor.
std::optional<Assignment> find_pareto_improvement(const IndexedCategory& cat, const Assignment& assignment,
                                                  std::size_t bound = bounds::pareto);

struct IndexedMisreport {
    Index target = kNone;
    std::vector<Index> report;
    Index truthful = kNone;  // doctor under the true list (kNone = unmatched)
    Index obtained = kNone;  // doctor under `report`
};

using IndexedMechanism = std::function<Assignment(const IndexedCategory&)>;

/// Runs `mechanism` with the target's list replaced by every permutation of
/// its true list (or, with `subsets`, every ordering of every subset) and
/// returns the first report the target strictly prefers by its true list.
std::optional<IndexedMisreport> probe_misreports(const IndexedCategory& cat, Index target,
                                                 const IndexedMechanism& mechanism, bool subsets,
                                                 std::size_t bound = bounds::misreport);

std::optional<IndexedMisreport> strategyproofness_probe(const IndexedCategory& cat, const Ownership& ownership,
                                                        Index target, std::size_t bound = bounds::misreport);

std::optional<IndexedMisreport> strategyproofness_probe_icomp(const IndexedCategory& cat,
                                                              std::span<const Index> order, Index target,
                                                              std::size_t bound = bounds::misreport);

// ---------------------------------------------------------------------------
// Named level

std::optional<Coalition> find_blocking_coalition(const CategoryInstance& cat, const CategoryAllocation& alloc,
                                                 std::size_t bound = bounds::blocking);

std::optional<Coalition> find_endowment_blocking_coalition(const CategoryInstance& cat,
                                                           const CategoryEndowment& endowment,
                                                           const CategoryAllocation& alloc,
                                                           std::size_t bound = bounds::blocking);

bool is_core(const CategoryInstance& cat, const CategoryAllocation& alloc, std::size_t bound = bounds::blocking);

struct CoreSets {
    std::vector<CategoryAllocation> reallocation_core;
    std::vector<CategoryAllocation> endowment_core;
};

CoreSets enumerate_core(const CategoryInstance& cat, const CategoryEndowment& endowment,
                        std::size_t bound = bounds::core);

struct ParetoResult {
    bool optimal = true;
    std::optional<CategoryAllocation> witness;
};

ParetoResult is_pareto_optimal(const CategoryInstance& cat, const CategoryAllocation& alloc,
                               std::size_t bound = bounds::pareto);

struct Misreport {
    PatientId target;
    PreferenceList report;
    std::optional<DoctorId> truthful;
    std::optional<DoctorId> obtained;

    friend bool operator==(const Misreport&, const Misreport&) = default;
};

std::optional<Misreport> strategyproofness_probe(const CategoryInstance& cat, const CategoryEndowment& endowment,
                                                 const PatientId& target, std::size_t bound = bounds::misreport);

std::optional<Misreport> strategyproofness_probe_icomp(const CategoryInstance& cat,
                                                       const std::vector<PatientId>& order,
                                                       const PatientId& target,
                                                       std::size_t bound = bounds::misreport);

// ---------------------------------------------------------------------------
// Witness re-checks. Each one recomputes the claim from scratch.

/// Members are distinct matched patients, the reallocation is a bijection
/// over exactly the doctors they hold, all weakly improve and one strictly.
bool coalition_blocks(const CategoryInstance& cat, const CategoryAllocation& alloc, const Coalition& coalition);

bool coalition_blocks_endowment(const CategoryInstance& cat, const CategoryEndowment& endowment,
                                const CategoryAllocation& alloc, const Coalition& coalition);

/// `better` is a valid allocation that nobody likes less and someone likes more.
bool pareto_dominates(const CategoryInstance& cat, const CategoryAllocation& better,
                      const CategoryAllocation& alloc);

/// Re-runs TOAM with and without the misreport.
bool misreport_benefits(const CategoryInstance& cat, const CategoryEndowment& endowment, const Misreport& m);

// ---------------------------------------------------------------------------

using Witness = std::variant<std::monostate, Coalition, CategoryAllocation, Misreport>;

struct ProbeReport {
    std::string property;
    CategoryId category;
    bool holds = true;
    Witness witness;
    std::size_t bound = 0;
};

}  // namespace matchmech
