// core/include/lpopt/problem.hpp
//
// Loading-pattern problem instances: core geometry with mirror symmetry,
// the fresh-fuel catalog, the burned-assembly inventory, expert tactics, and
// the decode of integer decision vectors into full core maps with guaranteed
// inventory conservation.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpopt/foms.hpp"

namespace lpopt {

using DecisionVector = std::vector<int>;

// ---------------------------------------------------------------------------
// Fuel
// ---------------------------------------------------------------------------

struct FuelType {
    double enrichment = 0.0;  // weight-percent U-235
    int ifba = 0;             // IFBA rod count
    int waba = 0;             // WABA pad count

    bool operator==(const FuelType&) const = default;
};

// The 24-type fresh-fuel catalog: the 6x2x3 cross product of enrichments,
// IFBA and WABA loadings minus all combinations with ifba = 156 and waba > 0.
// Order is enrichment-major, then ifba, then waba.
std::vector<FuelType> build_catalog();

enum class BurnClass { once, twice };

struct BurnedAssembly {
    std::string id;
    BurnClass burn_class = BurnClass::once;
    double k_value = 1.0;  // reactivity proxy
    double bu0 = 0.0;      // initial burnup, GWd/tHm
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

enum class Symmetry { eighth, quarter, none };

enum class LocationClass { periphery, ring, interior, center };

Symmetry symmetry_from_string(const std::string& s);
std::string to_string(Symmetry s);

// A core grid plus everything derived from it: location classes, 4-neighbor
// adjacency, and the symmetry-reduced slot structure. Immutable after
// construction; decode and the surrogate only read it.
struct CoreLayout {
    int rows = 0;
    int cols = 0;
    Symmetry symmetry = Symmetry::none;

    std::vector<int> cell_at;                     // rows*cols -> cell index or -1
    std::vector<std::pair<int, int>> cell_rc;     // cell -> (row, col)
    std::vector<LocationClass> cls;               // per cell
    std::vector<std::array<int, 4>> neighbors;    // per cell; -1 = out of core

    // Reduced map in traversal order: row-major over non-periphery slots,
    // then row-major over periphery slots. Each slot lists its full-core
    // orbit cells sorted row-major; orbit[0] is the representative.
    std::vector<std::vector<int>> slots;

    int n_cells() const { return static_cast<int>(cell_rc.size()); }
    int n_slots() const { return static_cast<int>(slots.size()); }
    int cell(int r, int c) const {
        if (r < 0 || r >= rows || c < 0 || c >= cols) return -1;
        return cell_at[static_cast<std::size_t>(r) * cols + c];
    }
    int multiplicity(int slot) const { return static_cast<int>(slots[slot].size()); }
};

// Builds a layout from ASCII mask rows ('X' or '#' = in-core, '.' or ' ' =
// out of core). The mask must be invariant under the requested symmetry.
CoreLayout make_layout(const std::vector<std::string>& mask_rows, Symmetry sym);

// Test hook: same grid but with wrap-around adjacency (no out-of-core
// neighbors anywhere). Used to check power-map normalization on a uniform
// field.
CoreLayout make_toroidal_layout(int rows, int cols);

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

struct Tactics {
    bool twice_at_periphery = false;
    bool no_fresh_at_periphery = false;
    bool fresh_ring = false;
    bool no_fresh_square = false;
};

// One entry of a slot's ordered choice list.
struct SlotChoice {
    bool is_fresh = true;
    int index = 0;  // catalog index or burned-inventory index

    bool operator==(const SlotChoice&) const = default;
};

struct ProblemInstance {
    std::string name;
    int schema_version = 1;
    CoreLayout layout;
    std::vector<FuelType> catalog;
    std::vector<BurnedAssembly> burned;
    int n_fresh = 0;  // fresh assemblies in the full core
    Tactics tactics;
    ConstraintSet constraints;
    SurrogateCoefficients coeffs;
    std::vector<std::vector<SlotChoice>> slot_spec;  // per reduced slot

    int dim() const { return layout.n_slots(); }
    int cardinality(int slot) const { return static_cast<int>(slot_spec[slot].size()); }
};

// Validates the structural invariants (counts, non-empty slot lists, unique
// burned ids, tactic/class consistency). Throws std::invalid_argument.
void validate_instance(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// Core maps and decode
// ---------------------------------------------------------------------------

// Full-core assignment. Exactly one of fresh_type/burned_index is >= 0 per
// cell.
struct CoreMap {
    std::vector<int> fresh_type;    // catalog index or -1
    std::vector<int> burned_index;  // inventory index or -1

    bool is_fresh(int cell) const { return fresh_type[cell] >= 0; }
};

// Mirrors a reduced per-slot assignment onto the full grid. Restriction picks
// each slot representative's value back out; expand-then-restrict is the
// identity.
template <class T>
std::vector<T> symmetry_expand(const std::vector<T>& reduced, const CoreLayout& layout) {
    std::vector<T> full(static_cast<std::size_t>(layout.n_cells()));
    for (int s = 0; s < layout.n_slots(); ++s)
        for (int cell : layout.slots[s]) full[cell] = reduced[s];
    return full;
}

template <class T>
std::vector<T> symmetry_restrict(const std::vector<T>& full, const CoreLayout& layout) {
    std::vector<T> reduced(static_cast<std::size_t>(layout.n_slots()));
    for (int s = 0; s < layout.n_slots(); ++s) reduced[s] = full[layout.slots[s][0]];
    return reduced;
}

// Decodes a decision vector into a core map. Slots are visited in the fixed
// traversal order; the selected choice is repaired by scanning the slot's
// choice list cyclically until an available, eligible choice is found.
// Eligibility covers inventory conservation, the tactic masks, and the 2x2
// fresh-square check (conservation outranks the square tactic if they ever
// conflict). Throws std::invalid_argument for a malformed vector, citing the
// offending slot.
CoreMap decode(const DecisionVector& v, const ProblemInstance& inst);

struct TacticViolation {
    std::string tactic;
    int cell = -1;
};

// Empty iff all active tactic flags hold on the map.
std::vector<TacticViolation> check_tactics(const CoreMap& core, const ProblemInstance& inst);

}  // namespace lpopt
