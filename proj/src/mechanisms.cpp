#include "matchmech/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace matchmech {

const char* to_string(MechanismKind kind) noexcept {
    switch (kind) {
        case MechanismKind::ranpam: return "ranpam";
        case MechanismKind::toam: return "toam";
        case MechanismKind::toam_icomp: return "toam-icomp";
    }
    return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view name) noexcept {
    if (name == "ranpam") return MechanismKind::ranpam;
    if (name == "toam") return MechanismKind::toam;
    if (name == "toam-icomp") return MechanismKind::toam_icomp;
    return std::nullopt;
}

namespace {

void require_square_full(const IndexedCategory& cat, const char* mechanism) {
    if (cat.patient_count() != cat.doctor_count) {
        throw PreconditionError("", std::string(mechanism) + " requires as many doctors as patients (m = " +
                                        std::to_string(cat.doctor_count) + ", n = " +
                                        std::to_string(cat.patient_count()) + ")");
    }
    if (!cat.full_preferences()) {
        throw PreconditionError("", std::string(mechanism) + " requires every patient to rank every doctor");
    }
}

void require_bijection(const IndexedCategory& cat, const Ownership& ownership) {
    if (ownership.endowed.size() != cat.patient_count()) {
        throw PreconditionError("", "endowment does not cover every patient");
    }
    std::vector<char> used(cat.doctor_count, 0);
    for (const Index d : ownership.endowed) {
        if (d >= cat.doctor_count || used[d]) {
            throw PreconditionError("", "endowment is not a bijection");
        }
        used[d] = 1;
    }
}

// Points every remaining patient at its best remaining doctor. `cursor`
// remembers how far down each list earlier rounds already skipped; doctors
// never come back, so the scan is amortized over the whole run.
TradingGraph make_graph(const IndexedCategory& cat, const Ownership& ownership, const Remaining& remaining,
                        std::vector<std::size_t>& cursor) {
    const Index n = cat.patient_count();
    TradingGraph g{std::vector<Index>(n, kNone), std::vector<Index>(cat.doctor_count, kNone)};
    for (Index p = 0; p < n; ++p) {
        if (!remaining.patients[p]) {
            continue;
        }
        const auto& list = cat.prefs[p];
        auto& c = cursor[p];
        while (c < list.size() && !remaining.doctors[list[c]]) {
            ++c;
        }
        if (c == list.size()) {
            throw std::logic_error("trading graph: patient " + std::to_string(p) + " has no remaining doctor");
        }
        g.patient_target[p] = list[c];

        const Index d = ownership.endowed[p];
        if (!remaining.doctors[d]) {
            throw std::logic_error("trading graph: endowed doctor of patient " + std::to_string(p) +
                                   " already left the market");
        }
        g.doctor_target[d] = p;
    }
    for (Index d = 0; d < cat.doctor_count; ++d) {
        if (remaining.doctors[d] && g.doctor_target[d] == kNone) {
            throw std::logic_error("trading graph: doctor " + std::to_string(d) + " has no remaining owner");
        }
    }
    return g;
}

template <typename F>
auto with_category(const CategoryId& id, F&& f) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        if (e.category().empty()) {
            throw PreconditionError(id, e.what());
        }
        throw;
    }
}

}  // namespace

TradingGraph build_trading_graph(const IndexedCategory& cat, const Ownership& ownership,
                                 const Remaining& remaining) {
    std::vector<std::size_t> cursor(cat.patient_count(), 0);
    return make_graph(cat, ownership, remaining, cursor);
}

std::vector<TradeCycle> clear_cycles(const TradingGraph& graph) {
    enum : char { unvisited, on_path, done };
    const auto n = graph.patient_target.size();
    std::vector<char> state(n, unvisited);
    std::vector<TradeCycle> cycles;
    std::vector<Index> path;

    for (Index start = 0; start < n; ++start) {
        if (graph.patient_target[start] == kNone || state[start] != unvisited) {
            continue;
        }
        path.clear();
        Index p = start;
        while (state[p] == unvisited) {
            state[p] = on_path;
            path.push_back(p);
            const Index next = graph.doctor_target[graph.patient_target[p]];
            if (next == kNone) {
                throw std::logic_error("trading graph is not functional");
            }
            p = next;
        }
        if (state[p] == on_path) {
            auto first = std::find(path.begin(), path.end(), p);
            std::vector<Index> members(first, path.end());
            std::rotate(members.begin(), std::min_element(members.begin(), members.end()), members.end());
            TradeCycle cycle;
            cycle.patients = std::move(members);
            for (const Index q : cycle.patients) {
                cycle.doctors.push_back(graph.patient_target[q]);
            }
            cycles.push_back(std::move(cycle));
        }
        for (const Index q : path) {
            state[q] = done;
        }
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const TradeCycle& a, const TradeCycle& b) { return a.patients.front() < b.patients.front(); });
    return cycles;
}

Assignment ranpam_allocate(const IndexedCategory& cat, RandomSource& src) {
    require_square_full(cat, "RanPAM");
    const Index n = cat.patient_count();
    std::vector<Index> remaining(n);
    std::iota(remaining.begin(), remaining.end(), Index{0});
    std::vector<char> taken(cat.doctor_count, 0);
    Assignment out{std::vector<Index>(n, kNone)};

    std::vector<Index> available;
    while (!remaining.empty()) {
        const auto j = src.below(remaining.size());
        const Index p = remaining[j];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));

        // The patient's list with every taken doctor stripped, order kept.
        available.clear();
        for (const Index d : cat.prefs[p]) {
            if (!taken[d]) {
                available.push_back(d);
            }
        }
        const Index d = available[src.below(available.size())];
        taken[d] = 1;
        out.doctor_of[p] = d;
    }
    return out;
}

Ownership initialize_endowment(const IndexedCategory& cat, RandomSource& src) {
    if (cat.patient_count() != cat.doctor_count) {
        throw PreconditionError("", "endowment requires as many doctors as patients");
    }
    std::vector<Index> remaining(cat.doctor_count);
    std::iota(remaining.begin(), remaining.end(), Index{0});
    Ownership out;
    out.endowed.reserve(cat.patient_count());
    for (Index p = 0; p < cat.patient_count(); ++p) {
        const auto k = src.below(remaining.size());
        out.endowed.push_back(remaining[k]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

ToamTrace toam_trace(const IndexedCategory& cat, const Ownership& ownership) {
    require_square_full(cat, "TOAM");
    require_bijection(cat, ownership);

    const Index n = cat.patient_count();
    ToamTrace trace;
    trace.assignment.doctor_of.assign(n, kNone);
    Remaining remaining = Remaining::all(n, cat.doctor_count);
    std::vector<std::size_t> cursor(n, 0);

    Index left = n;
    while (left > 0) {
        const TradingGraph graph = make_graph(cat, ownership, remaining, cursor);
        auto cycles = clear_cycles(graph);
        for (const auto& cycle : cycles) {
            for (std::size_t i = 0; i < cycle.patients.size(); ++i) {
                trace.assignment.doctor_of[cycle.patients[i]] = cycle.doctors[i];
                remaining.patients[cycle.patients[i]] = 0;
                remaining.doctors[cycle.doctors[i]] = 0;
            }
            left -= static_cast<Index>(cycle.patients.size());
        }
        trace.rounds.push_back(std::move(cycles));
    }
    return trace;
}

Assignment toam_allocate(const IndexedCategory& cat, const Ownership& ownership) {
    return toam_trace(cat, ownership).assignment;
}

std::vector<Index> shuffle_order(Index patients, RandomSource& src) {
    std::vector<Index> order(patients);
    std::iota(order.begin(), order.end(), Index{0});
    for (Index i = 0; i < patients; ++i) {
        const auto j = i + src.below(patients - i);
        std::swap(order[i], order[j]);
    }
    return order;
}

Assignment serial_dictatorship(const IndexedCategory& cat, std::span<const Index> order) {
    const Index n = cat.patient_count();
    std::vector<char> seen(n, 0);
    if (order.size() != n) {
        throw PreconditionError("", "order is not a permutation of the patients");
    }
    for (const Index p : order) {
        if (p >= n || seen[p]) {
            throw PreconditionError("", "order is not a permutation of the patients");
        }
        seen[p] = 1;
    }

    std::vector<char> taken(cat.doctor_count, 0);
    Assignment out{std::vector<Index>(n, kNone)};
    for (const Index p : order) {
        for (const Index d : cat.prefs[p]) {
            if (!taken[d]) {
                taken[d] = 1;
                out.doctor_of[p] = d;
                break;
            }
        }
    }
    return out;
}

Assignment toam_icomp_allocate(const IndexedCategory& cat, RandomSource& src) {
    const auto order = shuffle_order(cat.patient_count(), src);
    return serial_dictatorship(cat, order);
}

Assignment allocate_category(MechanismKind kind, const IndexedCategory& cat, RandomSource& src,
                             Ownership* endowment_out) {
    switch (kind) {
        case MechanismKind::ranpam: return ranpam_allocate(cat, src);
        case MechanismKind::toam: {
            require_square_full(cat, "TOAM");
            Ownership ownership = initialize_endowment(cat, src);
            Assignment out = toam_allocate(cat, ownership);
            if (endowment_out != nullptr) {
                *endowment_out = std::move(ownership);
            }
            return out;
        }
        case MechanismKind::toam_icomp: return toam_icomp_allocate(cat, src);
    }
    throw std::logic_error("unhandled mechanism");
}

// ---------------------------------------------------------------------------

CategoryAllocation ranpam_allocate(const CategoryInstance& cat, RandomSource& src) {
    return with_category(cat.id, [&] { return to_allocation(cat, ranpam_allocate(index_category(cat), src)); });
}

Allocation ranpam_all(const ProblemInstance& instance, RandomSource& src) {
    Allocation out;
    for (const auto& cat : instance.categories) {
        out.categories.push_back(ranpam_allocate(cat, src));
    }
    return out;
}

CategoryEndowment initialize_endowment(const CategoryInstance& cat, RandomSource& src) {
    return with_category(cat.id,
                         [&] { return to_endowment(cat, initialize_endowment(index_category(cat), src)); });
}

CategoryAllocation toam_allocate(const CategoryInstance& cat, const CategoryEndowment& endowment) {
    return with_category(cat.id, [&] {
        return to_allocation(cat, toam_allocate(index_category(cat), to_ownership(cat, endowment)));
    });
}

ToamResult toam_all(const ProblemInstance& instance, RandomSource& src) {
    auto run = run_mechanism(MechanismKind::toam, instance, src);
    return {std::move(run.allocation), std::move(*run.endowment)};
}

std::vector<PatientId> shuffle_order(const CategoryInstance& cat, RandomSource& src) {
    std::vector<PatientId> out;
    out.reserve(cat.patients.size());
    for (const Index p : shuffle_order(static_cast<Index>(cat.patients.size()), src)) {
        out.push_back(cat.patients[p].id);
    }
    return out;
}

CategoryAllocation serial_dictatorship(const CategoryInstance& cat, const std::vector<PatientId>& order) {
    return with_category(cat.id, [&] {
        std::vector<Index> indices;
        indices.reserve(order.size());
        for (const auto& id : order) {
            indices.push_back(patient_index(cat, id));
        }
        return to_allocation(cat, serial_dictatorship(index_category(cat), indices));
    });
}

CategoryAllocation toam_icomp_allocate(const CategoryInstance& cat, RandomSource& src) {
    return with_category(cat.id, [&] { return to_allocation(cat, toam_icomp_allocate(index_category(cat), src)); });
}

Allocation toam_icomp_all(const ProblemInstance& instance, RandomSource& src) {
    Allocation out;
    for (const auto& cat : instance.categories) {
        out.categories.push_back(toam_icomp_allocate(cat, src));
    }
    return out;
}

MechanismRun run_mechanism(MechanismKind kind, const ProblemInstance& instance, RandomSource& src,
                           const std::optional<Endowment>& endowment) {
    if (endowment && kind != MechanismKind::toam) {
        throw PreconditionError("", "an explicit endowment is only meaningful for TOAM");
    }
    MechanismRun run;
    if (kind == MechanismKind::toam) {
        run.endowment.emplace();
    }
    for (const auto& cat : instance.categories) {
        with_category(cat.id, [&] {
            const IndexedCategory indexed = index_category(cat);
            if (kind != MechanismKind::toam) {
                run.allocation.categories.push_back(to_allocation(cat, allocate_category(kind, indexed, src)));
                return 0;
            }
            require_square_full(indexed, "TOAM");
            const Ownership ownership = endowment ? to_ownership(cat, find_category(*endowment, cat.id))
                                                  : initialize_endowment(indexed, src);
            run.allocation.categories.push_back(to_allocation(cat, toam_allocate(indexed, ownership)));
            run.endowment->categories.push_back(to_endowment(cat, ownership));
            return 0;
        });
    }
    return run;
}

}  // namespace matchmech
