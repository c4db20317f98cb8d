#include "matchmech/metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace matchmech {

std::uint64_t efficiency_loss(const std::optional<DoctorId>& allocated, const PreferenceList& true_list) {
    if (!allocated) {
        return true_list.size();
    }
    const auto it = std::find(true_list.begin(), true_list.end(), *allocated);
    if (it == true_list.end()) {
        throw IntegrityError("allocated doctor '" + *allocated + "' is not on the patient's true list");
    }
    return static_cast<std::uint64_t>(it - true_list.begin());
}

std::uint64_t efficiency_loss(Index allocated, const std::vector<Index>& true_list) {
    if (allocated == kNone) {
        return true_list.size();
    }
    const std::size_t r = rank_of(true_list, allocated);
    if (r == true_list.size()) {
        throw IntegrityError("allocated doctor " + std::to_string(allocated) + " is not on the patient's true list");
    }
    return r;
}

MetricsReport compute_metrics(const ProblemInstance& truth, const Allocation& alloc) {
    MetricsReport report;
    for (const auto& cat : truth.categories) {
        const auto& ca = find_category(alloc, cat.id);
        std::unordered_map<PatientId, DoctorId> held;
        for (const auto& [p, d] : ca.pairs) {
            held.emplace(p, d);
        }

        CategoryMetrics cm;
        cm.category = cat.id;
        for (const auto& p : cat.patients) {
            const auto it = held.find(p.id);
            const std::optional<DoctorId> doctor =
                it == held.end() ? std::nullopt : std::optional<DoctorId>(it->second);
            PatientScore score{p.id, efficiency_loss(doctor, p.prefs), false};
            score.best = doctor.has_value() && score.el == 0;
            cm.tel += score.el;
            cm.nba += score.best ? 1 : 0;
            cm.unmatched += doctor ? 0 : 1;
            cm.patients.push_back(std::move(score));
        }
        report.tel += cm.tel;
        report.nba += cm.nba;
        report.categories.push_back(std::move(cm));
    }
    return report;
}

std::uint64_t total_efficiency_loss(const ProblemInstance& truth, const Allocation& alloc) {
    return compute_metrics(truth, alloc).tel;
}

std::uint64_t number_best_allocation(const ProblemInstance& truth, const Allocation& alloc) {
    return compute_metrics(truth, alloc).nba;
}

}  // namespace matchmech
