#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "matchmech/model.hpp"
#include "matchmech/random.hpp"

namespace matchmech {

enum class MechanismKind { ranpam, toam, toam_icomp };

const char* to_string(MechanismKind kind) noexcept;
/// Accepts "ranpam", "toam" and "toam-icomp".
std::optional<MechanismKind> parse_mechanism(std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Trading graph used by the top-trading-cycles rounds.

/// Which participants are still in the market.
struct Remaining {
    std::vector<char> patients;
    std::vector<char> doctors;

    static Remaining all(Index patients, Index doctors) {
        return {std::vector<char>(patients, 1), std::vector<char>(doctors, 1)};
    }
};

/// Functional digraph over the remaining participants: each patient points to
/// its best remaining doctor and each doctor points to its owner. Removed
/// participants hold kNone.
struct TradingGraph {
    std::vector<Index> patient_target;
    std::vector<Index> doctor_target;
};

/// patients[i] points to doctors[i], which is owned by patients[i + 1]
/// (cyclically). Rotated so that the smallest patient index comes first.
struct TradeCycle {
    std::vector<Index> patients;
    std::vector<Index> doctors;

    friend bool operator==(const TradeCycle&, const TradeCycle&) = default;
};

/// Throws std::logic_error if a remaining patient has no remaining doctor
/// on its list, or a remaining doctor's owner has left the market.
TradingGraph build_trading_graph(const IndexedCategory& cat, const Ownership& ownership,
                                 const Remaining& remaining);

/// All cycles of the graph, node-disjoint, ordered by their first patient.
std::vector<TradeCycle> clear_cycles(const TradingGraph& graph);

// ---------------------------------------------------------------------------
// Index-level kernels. Errors carry no category id; the named overloads
// below attach it.

Assignment ranpam_allocate(const IndexedCategory& cat, RandomSource& src);

Ownership initialize_endowment(const IndexedCategory& cat, RandomSource& src);

struct ToamTrace {
    Assignment assignment;
    std::vector<std::vector<TradeCycle>> rounds;
};

/// Top trading cycles from a fixed endowment, clearing every cycle present
/// in each round.
Assignment toam_allocate(const IndexedCategory& cat, const Ownership& ownership);
ToamTrace toam_trace(const IndexedCategory& cat, const Ownership& ownership);

/// Fisher-Yates over patient indices 0..n-1; position i swaps with a
/// uniform position in [i, n).
std::vector<Index> shuffle_order(Index patients, RandomSource& src);

Assignment serial_dictatorship(const IndexedCategory& cat, std::span<const Index> order);

Assignment toam_icomp_allocate(const IndexedCategory& cat, RandomSource& src);

/// Runs one mechanism on one category. TOAM draws its endowment from `src`
/// and stores it in `endowment_out` when that is non-null.
Assignment allocate_category(MechanismKind kind, const IndexedCategory& cat, RandomSource& src,
                             Ownership* endowment_out = nullptr);

// ---------------------------------------------------------------------------
// Named overloads.

CategoryAllocation ranpam_allocate(const CategoryInstance& cat, RandomSource& src);
Allocation ranpam_all(const ProblemInstance& instance, RandomSource& src);

CategoryEndowment initialize_endowment(const CategoryInstance& cat, RandomSource& src);
CategoryAllocation toam_allocate(const CategoryInstance& cat, const CategoryEndowment& endowment);

struct ToamResult {
    Allocation allocation;
    Endowment endowment;
};
ToamResult toam_all(const ProblemInstance& instance, RandomSource& src);

std::vector<PatientId> shuffle_order(const CategoryInstance& cat, RandomSource& src);
CategoryAllocation serial_dictatorship(const CategoryInstance& cat, const std::vector<PatientId>& order);
CategoryAllocation toam_icomp_allocate(const CategoryInstance& cat, RandomSource& src);
Allocation toam_icomp_all(const ProblemInstance& instance, RandomSource& src);

struct MechanismRun {
    Allocation allocation;
    std::optional<Endowment> endowment;  // set for TOAM only
};

/// Runs `kind` over every category in declared order sharing `src`.
/// A supplied endowment replaces the random one (TOAM only).
MechanismRun run_mechanism(MechanismKind kind, const ProblemInstance& instance, RandomSource& src,
                           const std::optional<Endowment>& endowment = std::nullopt);

}  // namespace matchmech
