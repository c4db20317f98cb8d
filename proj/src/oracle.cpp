#include "matchmech/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "matchmech/mechanisms.hpp"

namespace matchmech {

namespace {

std::size_t held_rank(const std::vector<Index>& list, Index doctor) noexcept {
    return doctor == kNone ? list.size() : rank_of(list, doctor);
}

/// Non-empty subsets of {0..k-1} as bitmasks, smallest subsets first.
std::vector<std::uint32_t> masks_by_size(std::size_t k) {
    std::vector<std::uint32_t> masks((std::size_t{1} << k) - 1);
    std::iota(masks.begin(), masks.end(), std::uint32_t{1});
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    return masks;
}

/// Backtracking search for a bijection members -> pool where every member
/// gets a listed doctor no worse than `current` and one gets a better one.
class ExchangeSearch {
public:
    ExchangeSearch(const IndexedCategory& cat, const std::vector<Index>& members, const std::vector<Index>& pool,
                   const std::vector<std::size_t>& current)
        : cat_(cat), members_(members), pool_(pool), current_(current), used_(pool.size(), 0),
          out_(members.size(), kNone) {}

    std::optional<std::vector<Index>> run() {
        if (step(0, false)) {
            return out_;
        }
        return std::nullopt;
    }

private:
    bool step(std::size_t i, bool strict) {
        if (i == members_.size()) {
            return strict;
        }
        const auto& list = cat_.prefs[members_[i]];
        for (std::size_t k = 0; k < pool_.size(); ++k) {
            if (used_[k]) {
                continue;
            }
            const std::size_t r = rank_of(list, pool_[k]);
            if (r >= list.size() || r > current_[i]) {
                continue;
            }
            used_[k] = 1;
            out_[i] = pool_[k];
            if (step(i + 1, strict || r < current_[i])) {
                return true;
            }
            used_[k] = 0;
        }
        return false;
    }

    const IndexedCategory& cat_;
    const std::vector<Index>& members_;
    const std::vector<Index>& pool_;
    const std::vector<std::size_t>& current_;
    std::vector<char> used_;
    std::vector<Index> out_;
};

std::optional<IndexedCoalition> search_coalitions(const IndexedCategory& cat, const std::vector<Index>& candidates,
                                                  const std::vector<Index>& holdings, const Assignment& assignment) {
    std::vector<Index> members;
    std::vector<Index> pool;
    std::vector<std::size_t> current;
    for (const auto mask : masks_by_size(candidates.size())) {
        members.clear();
        pool.clear();
        current.clear();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (mask & (std::uint32_t{1} << i)) {
                const Index p = candidates[i];
                members.push_back(p);
                pool.push_back(holdings[p]);
                current.push_back(held_rank(cat.prefs[p], assignment.doctor_of[p]));
            }
        }
        if (auto found = ExchangeSearch(cat, members, pool, current).run()) {
            return IndexedCoalition{members, std::move(*found)};
        }
    }
    return std::nullopt;
}

void require_within(std::size_t size, std::size_t bound) {
    if (size > bound) {
        throw BoundError(size, bound);
    }
}

class ParetoSearch {
public:
    ParetoSearch(const IndexedCategory& cat, const Assignment& assignment)
        : cat_(cat), current_(cat.patient_count()), used_(cat.doctor_count, 0),
          alt_{std::vector<Index>(cat.patient_count(), kNone)} {
        for (Index p = 0; p < cat.patient_count(); ++p) {
            current_[p] = held_rank(cat.prefs[p], assignment.doctor_of[p]);
        }
    }

    std::optional<Assignment> run() {
        if (step(0, false)) {
            return alt_;
        }
        return std::nullopt;
    }

private:
    bool step(Index p, bool strict) {
        if (p == cat_.patient_count()) {
            return strict;
        }
        const auto& list = cat_.prefs[p];
        for (std::size_t r = 0; r < list.size() && r <= current_[p]; ++r) {
            const Index d = list[r];
            if (used_[d]) {
                continue;
            }
            used_[d] = 1;
            alt_.doctor_of[p] = d;
            if (step(p + 1, strict || r < current_[p])) {
                return true;
            }
            used_[d] = 0;
        }
        alt_.doctor_of[p] = kNone;
        return current_[p] >= list.size() && step(p + 1, strict);
    }

    const IndexedCategory& cat_;
    std::vector<std::size_t> current_;
    std::vector<char> used_;
    Assignment alt_;
};

Coalition name_coalition(const CategoryInstance& cat, const IndexedCoalition& c) {
    Coalition out;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        out.members.push_back(cat.patients[c.members[i]].id);
        out.reallocation.push_back(cat.doctors[c.doctors[i]]);
    }
    return out;
}

Misreport name_misreport(const CategoryInstance& cat, const IndexedMisreport& m) {
    Misreport out;
    out.target = cat.patients[m.target].id;
    for (const Index d : m.report) {
        out.report.push_back(cat.doctors[d]);
    }
    if (m.truthful != kNone) out.truthful = cat.doctors[m.truthful];
    if (m.obtained != kNone) out.obtained = cat.doctors[m.obtained];
    return out;
}

// Rank of a named doctor on a named list; list.size() when absent.
std::size_t named_rank(const PreferenceList& list, const std::optional<DoctorId>& d) {
    if (!d) {
        return list.size();
    }
    return static_cast<std::size_t>(std::find(list.begin(), list.end(), *d) - list.begin());
}

std::optional<DoctorId> held_by(const CategoryAllocation& alloc, const PatientId& p) {
    for (const auto& [pid, did] : alloc.pairs) {
        if (pid == p) {
            return did;
        }
    }
    return std::nullopt;
}

const PreferenceList* prefs_of(const CategoryInstance& cat, const PatientId& p) {
    for (const auto& patient : cat.patients) {
        if (patient.id == p) {
            return &patient.prefs;
        }
    }
    return nullptr;
}

// Shared tail of the two coalition re-checks: `pool` is what the members
// bring to the table.
bool exchange_improves(const CategoryInstance& cat, const CategoryAllocation& alloc, const Coalition& coalition,
                       std::vector<DoctorId> pool) {
    std::vector<DoctorId> received = coalition.reallocation;
    std::sort(pool.begin(), pool.end());
    std::sort(received.begin(), received.end());
    if (pool != received) {
        return false;
    }
    bool strict = false;
    for (std::size_t i = 0; i < coalition.members.size(); ++i) {
        const PreferenceList* list = prefs_of(cat, coalition.members[i]);
        const std::size_t now = named_rank(*list, held_by(alloc, coalition.members[i]));
        const std::size_t then = named_rank(*list, coalition.reallocation[i]);
        if (then >= list->size() || then > now) {
            return false;
        }
        strict = strict || then < now;
    }
    return strict;
}

bool distinct_known_members(const CategoryInstance& cat, const Coalition& coalition) {
    if (coalition.members.empty() || coalition.members.size() != coalition.reallocation.size()) {
        return false;
    }
    auto sorted = coalition.members;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return false;
    }
    return std::all_of(sorted.begin(), sorted.end(), [&](const auto& p) { return prefs_of(cat, p) != nullptr; });
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<IndexedCoalition> find_blocking_coalition(const IndexedCategory& cat, const Assignment& assignment,
                                                        std::size_t bound) {
    require_within(cat.patient_count(), bound);
    std::vector<Index> matched;
    for (Index p = 0; p < cat.patient_count(); ++p) {
        if (assignment.doctor_of[p] != kNone) {
            matched.push_back(p);
        }
    }
    return search_coalitions(cat, matched, assignment.doctor_of, assignment);
}

std::optional<IndexedCoalition> find_endowment_blocking_coalition(const IndexedCategory& cat,
                                                                  const Ownership& ownership,
                                                                  const Assignment& assignment,
                                                                  std::size_t bound) {
    require_within(cat.patient_count(), bound);
    std::vector<Index> everyone(cat.patient_count());
    std::iota(everyone.begin(), everyone.end(), Index{0});
    return search_coalitions(cat, everyone, ownership.endowed, assignment);
}

IndexedCore enumerate_core(const IndexedCategory& cat, const Ownership& ownership, std::size_t bound) {
    const Index n = cat.patient_count();
    if (n != cat.doctor_count || !cat.full_preferences()) {
        throw PreconditionError("", "core enumeration requires full preferences and m = n");
    }
    require_within(n, bound);

    IndexedCore out;
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
        const Assignment a{perm};
        if (!find_blocking_coalition(cat, a, n)) {
            out.reallocation_core.push_back(a);
        }
        if (!find_endowment_blocking_coalition(cat, ownership, a, n)) {
            out.endowment_core.push_back(a);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::optional<Assignment> find_pareto_improvement(const IndexedCategory& cat, const Assignment& assignment,
                                                  std::size_t bound) {
    require_within(cat.patient_count(), bound);
    return ParetoSearch(cat, assignment).run();
}

std::optional<IndexedMisreport> probe_misreports(const IndexedCategory& cat, Index target,
                                                 const IndexedMechanism& mechanism, bool subsets,
                                                 std::size_t bound) {
    const auto& truth = cat.prefs.at(target);
    require_within(truth.size(), std::min<std::size_t>(bound, 20));

    const Index truthful = mechanism(cat).doctor_of[target];
    const std::size_t truthful_rank = held_rank(truth, truthful);

    IndexedCategory altered = cat;
    auto attempt = [&](const std::vector<Index>& report) -> std::optional<IndexedMisreport> {
        altered.prefs[target] = report;
        const Index got = mechanism(altered).doctor_of[target];
        if (held_rank(truth, got) < truthful_rank) {
            return IndexedMisreport{target, report, truthful, got};
        }
        return std::nullopt;
    };

    const std::size_t len = truth.size();
    const std::uint32_t full = (std::uint32_t{1} << len) - 1;
    for (std::uint32_t mask = subsets ? 0 : full; mask <= full; ++mask) {
        std::vector<Index> report;
        for (std::size_t i = 0; i < len; ++i) {
            if (mask & (std::uint32_t{1} << i)) {
                report.push_back(truth[i]);
            }
        }
        std::sort(report.begin(), report.end());
        do {
            if (auto found = attempt(report)) {
                return found;
            }
        } while (std::next_permutation(report.begin(), report.end()));
    }
    return std::nullopt;
}

std::optional<IndexedMisreport> strategyproofness_probe(const IndexedCategory& cat, const Ownership& ownership,
                                                        Index target, std::size_t bound) {
    return probe_misreports(
        cat, target, [&](const IndexedCategory& c) { return toam_allocate(c, ownership); }, false, bound);
}

std::optional<IndexedMisreport> strategyproofness_probe_icomp(const IndexedCategory& cat,
                                                              std::span<const Index> order, Index target,
                                                              std::size_t bound) {
    return probe_misreports(
        cat, target, [&](const IndexedCategory& c) { return serial_dictatorship(c, order); }, true, bound);
}

// ---------------------------------------------------------------------------

std::optional<Coalition> find_blocking_coalition(const CategoryInstance& cat, const CategoryAllocation& alloc,
                                                 std::size_t bound) {
    require_within(cat.patient_count(), bound);
    const auto found = find_blocking_coalition(index_category(cat), to_assignment(cat, alloc), bound);
    if (!found) {
        return std::nullopt;
    }
    return name_coalition(cat, *found);
}

std::optional<Coalition> find_endowment_blocking_coalition(const CategoryInstance& cat,
                                                           const CategoryEndowment& endowment,
                                                           const CategoryAllocation& alloc, std::size_t bound) {
    require_within(cat.patient_count(), bound);
    const auto found = find_endowment_blocking_coalition(index_category(cat), to_ownership(cat, endowment),
                                                         to_assignment(cat, alloc), bound);
    if (!found) {
        return std::nullopt;
    }
    return name_coalition(cat, *found);
}

bool is_core(const CategoryInstance& cat, const CategoryAllocation& alloc, std::size_t bound) {
    return !find_blocking_coalition(cat, alloc, bound);
}

CoreSets enumerate_core(const CategoryInstance& cat, const CategoryEndowment& endowment, std::size_t bound) {
    require_within(cat.patient_count(), bound);
    IndexedCore core;
    try {
        core = enumerate_core(index_category(cat), to_ownership(cat, endowment), bound);
    } catch (const PreconditionError& e) {
        throw PreconditionError(cat.id, e.what());
    }
    CoreSets out;
    for (const auto& a : core.reallocation_core) out.reallocation_core.push_back(to_allocation(cat, a));
    for (const auto& a : core.endowment_core) out.endowment_core.push_back(to_allocation(cat, a));
    return out;
}

ParetoResult is_pareto_optimal(const CategoryInstance& cat, const CategoryAllocation& alloc, std::size_t bound) {
    require_within(cat.patient_count(), bound);
    const auto better = find_pareto_improvement(index_category(cat), to_assignment(cat, alloc), bound);
    if (!better) {
        return {};
    }
    return {false, to_allocation(cat, *better)};
}

std::optional<Misreport> strategyproofness_probe(const CategoryInstance& cat, const CategoryEndowment& endowment,
                                                 const PatientId& target, std::size_t bound) {
    const IndexedCategory indexed = index_category(cat);
    const Ownership ownership = to_ownership(cat, endowment);
    const Index t = patient_index(cat, target);
    std::optional<IndexedMisreport> found;
    try {
        found = strategyproofness_probe(indexed, ownership, t, bound);
    } catch (const PreconditionError& e) {
        throw PreconditionError(cat.id, e.what());
    }
    if (!found) {
        return std::nullopt;
    }
    return name_misreport(cat, *found);
}

std::optional<Misreport> strategyproofness_probe_icomp(const CategoryInstance& cat,
                                                       const std::vector<PatientId>& order,
                                                       const PatientId& target, std::size_t bound) {
    std::vector<Index> indices;
    for (const auto& id : order) {
        indices.push_back(patient_index(cat, id));
    }
    const auto found = strategyproofness_probe_icomp(index_category(cat), indices, patient_index(cat, target), bound);
    if (!found) {
        return std::nullopt;
    }
    return name_misreport(cat, *found);
}

// ---------------------------------------------------------------------------

bool coalition_blocks(const CategoryInstance& cat, const CategoryAllocation& alloc, const Coalition& coalition) {
    if (!distinct_known_members(cat, coalition)) {
        return false;
    }
    std::vector<DoctorId> pool;
    for (const auto& m : coalition.members) {
        const auto held = held_by(alloc, m);
        if (!held) {
            return false;
        }
        pool.push_back(*held);
    }
    return exchange_improves(cat, alloc, coalition, std::move(pool));
}

bool coalition_blocks_endowment(const CategoryInstance& cat, const CategoryEndowment& endowment,
                                const CategoryAllocation& alloc, const Coalition& coalition) {
    if (!distinct_known_members(cat, coalition)) {
        return false;
    }
    std::vector<DoctorId> pool;
    for (const auto& m : coalition.members) {
        const auto it = std::find_if(endowment.owners.begin(), endowment.owners.end(),
                                     [&](const auto& owner) { return owner.second == m; });
        if (it == endowment.owners.end()) {
            return false;
        }
        pool.push_back(it->first);
    }
    return exchange_improves(cat, alloc, coalition, std::move(pool));
}

bool pareto_dominates(const CategoryInstance& cat, const CategoryAllocation& better,
                      const CategoryAllocation& alloc) {
    try {
        (void)to_assignment(cat, better);
        (void)to_assignment(cat, alloc);
    } catch (const PreconditionError&) {
        return false;
    }
    bool strict = false;
    for (const auto& p : cat.patients) {
        const std::size_t now = named_rank(p.prefs, held_by(alloc, p.id));
        const std::size_t then = named_rank(p.prefs, held_by(better, p.id));
        if (then > now) {
            return false;
        }
        strict = strict || then < now;
    }
    return strict;
}

bool misreport_benefits(const CategoryInstance& cat, const CategoryEndowment& endowment, const Misreport& m) {
    const PreferenceList* truth = prefs_of(cat, m.target);
    if (truth == nullptr) {
        return false;
    }
    auto a = *truth;
    auto b = m.report;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        return false;
    }

    const auto honest = toam_allocate(cat, endowment);
    CategoryInstance altered = cat;
    for (auto& p : altered.patients) {
        if (p.id == m.target) {
            p.prefs = m.report;
        }
    }
    const auto lied = toam_allocate(altered, endowment);
    const auto got = held_by(lied, m.target);
    return got == m.obtained && named_rank(*truth, got) < named_rank(*truth, held_by(honest, m.target));
}

}  // namespace matchmech
