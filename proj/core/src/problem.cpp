#include "lpopt/problem.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace lpopt {

std::vector<FuelType> build_catalog() {
    static const double kEnrichments[] = {4.00, 4.20, 4.40, 4.60, 4.80, 4.95};
    static const int kIfba[] = {128, 156};
    static const int kWaba[] = {0, 12, 24};

    std::vector<FuelType> catalog;
    for (double enr : kEnrichments)
        for (int ifba : kIfba)
            for (int waba : kWaba) {
                // High-IFBA assemblies never carry WABA pads on top.
                if (ifba == 156 && waba > 0) continue;
                catalog.push_back(FuelType{enr, ifba, waba});
            }
    return catalog;
}

Symmetry symmetry_from_string(const std::string& s) {
    if (s == "eighth") return Symmetry::eighth;
    if (s == "quarter") return Symmetry::quarter;
    if (s == "none") return Symmetry::none;
    throw std::invalid_argument("unknown symmetry mode: " + s);
}

std::string to_string(Symmetry s) {
    switch (s) {
        case Symmetry::eighth: return "eighth";
        case Symmetry::quarter: return "quarter";
        case Symmetry::none: return "none";
    }
    return "none";
}

namespace {

using Transform = std::pair<int, int> (*)(int, int, int, int);

std::vector<std::pair<int, int> (*)(int, int, int, int)> group_ops(Symmetry sym) {
    using P = std::pair<int, int>;
    static auto id = +[](int r, int c, int, int) { return P{r, c}; };
    static auto fr = +[](int r, int c, int R, int) { return P{R - 1 - r, c}; };
    static auto fc = +[](int r, int c, int, int C) { return P{r, C - 1 - c}; };
    static auto frc = +[](int r, int c, int R, int C) { return P{R - 1 - r, C - 1 - c}; };
    static auto tr = +[](int r, int c, int, int) { return P{c, r}; };
    static auto trfr = +[](int r, int c, int R, int) { return P{R - 1 - c, r}; };
    static auto trfc = +[](int r, int c, int, int C) { return P{c, C - 1 - r}; };
    static auto trfrc = +[](int r, int c, int R, int C) { return P{R - 1 - c, C - 1 - r}; };

    switch (sym) {
        case Symmetry::none:
            return {id};
        case Symmetry::quarter:
            return {id, fr, fc, frc};
        case Symmetry::eighth:
            return {id, fr, fc, frc, tr, trfr, trfc, trfrc};
    }
    return {id};
}

void classify_cells(CoreLayout& layout) {
    const int n = layout.n_cells();
    layout.cls.assign(n, LocationClass::interior);
    for (int cell = 0; cell < n; ++cell) {
        for (int nb : layout.neighbors[cell])
            if (nb < 0) {
                layout.cls[cell] = LocationClass::periphery;
                break;
            }
    }
    for (int cell = 0; cell < n; ++cell) {
        if (layout.cls[cell] == LocationClass::periphery) continue;
        for (int nb : layout.neighbors[cell])
            if (nb >= 0 && layout.cls[nb] == LocationClass::periphery) {
                layout.cls[cell] = LocationClass::ring;
                break;
            }
    }
    if (layout.rows % 2 == 1 && layout.cols % 2 == 1) {
        const int mid = layout.cell(layout.rows / 2, layout.cols / 2);
        if (mid >= 0 && layout.cls[mid] == LocationClass::interior)
            layout.cls[mid] = LocationClass::center;
    }
}

void build_slots(CoreLayout& layout) {
    const auto ops = group_ops(layout.symmetry);
    const int n = layout.n_cells();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> orbits;

    for (int r = 0; r < layout.rows; ++r)
        for (int c = 0; c < layout.cols; ++c) {
            const int cell = layout.cell(r, c);
            if (cell < 0 || seen[cell]) continue;
            std::set<int> orbit;
            for (auto op : ops) {
                auto [ir, ic] = op(r, c, layout.rows, layout.cols);
                const int image = layout.cell(ir, ic);
                if (image < 0)
                    throw std::invalid_argument("grid mask is not invariant under the requested symmetry");
                orbit.insert(image);
            }
            std::vector<int> cells(orbit.begin(), orbit.end());
            for (int member : cells) {
                seen[member] = 1;
                if (layout.cls[member] != layout.cls[cells[0]])
                    throw std::invalid_argument("symmetry orbit mixes location classes");
            }
            orbits.push_back(std::move(cells));
        }

    // Traversal order: row-major over non-periphery slots, then periphery.
    std::stable_sort(orbits.begin(), orbits.end(), [&](const auto& a, const auto& b) {
        const bool pa = layout.cls[a[0]] == LocationClass::periphery;
        const bool pb = layout.cls[b[0]] == LocationClass::periphery;
        if (pa != pb) return !pa;
        return a[0] < b[0];
    });
    layout.slots = std::move(orbits);
}

}  // namespace

CoreLayout make_layout(const std::vector<std::string>& mask_rows, Symmetry sym) {
    if (mask_rows.empty()) throw std::invalid_argument("empty grid mask");
    CoreLayout layout;
    layout.rows = static_cast<int>(mask_rows.size());
    layout.cols = static_cast<int>(mask_rows[0].size());
    layout.symmetry = sym;
    if (sym == Symmetry::eighth && layout.rows != layout.cols)
        throw std::invalid_argument("eighth symmetry requires a square grid");

    layout.cell_at.assign(static_cast<std::size_t>(layout.rows) * layout.cols, -1);
    for (int r = 0; r < layout.rows; ++r) {
        if (static_cast<int>(mask_rows[r].size()) != layout.cols)
            throw std::invalid_argument("ragged grid mask");
        for (int c = 0; c < layout.cols; ++c) {
            const char ch = mask_rows[r][c];
            if (ch == 'X' || ch == '#') {
                layout.cell_at[static_cast<std::size_t>(r) * layout.cols + c] =
                    static_cast<int>(layout.cell_rc.size());
                layout.cell_rc.emplace_back(r, c);
            } else if (ch != '.' && ch != ' ') {
                throw std::invalid_argument(std::string("bad mask character '") + ch + "'");
            }
        }
    }
    if (layout.cell_rc.empty()) throw std::invalid_argument("grid mask has no in-core cells");

    layout.neighbors.resize(layout.cell_rc.size());
    for (int cell = 0; cell < layout.n_cells(); ++cell) {
        const auto [r, c] = layout.cell_rc[cell];
        layout.neighbors[cell] = {layout.cell(r - 1, c), layout.cell(r + 1, c),
                                  layout.cell(r, c - 1), layout.cell(r, c + 1)};
    }

    classify_cells(layout);
    build_slots(layout);
    return layout;
}

CoreLayout make_toroidal_layout(int rows, int cols) {
    std::vector<std::string> mask(static_cast<std::size_t>(rows), std::string(static_cast<std::size_t>(cols), 'X'));
    CoreLayout layout = make_layout(mask, Symmetry::none);
    auto wrap = [&](int r, int c) {
        return layout.cell((r + rows) % rows, (c + cols) % cols);
    };
    for (int cell = 0; cell < layout.n_cells(); ++cell) {
        const auto [r, c] = layout.cell_rc[cell];
        layout.neighbors[cell] = {wrap(r - 1, c), wrap(r + 1, c), wrap(r, c - 1), wrap(r, c + 1)};
    }
    classify_cells(layout);  // no out-of-core neighbors: everything interior
    build_slots(layout);
    return layout;
}

void validate_instance(const ProblemInstance& inst) {
    const CoreLayout& lay = inst.layout;
    if (static_cast<int>(inst.burned.size()) + inst.n_fresh != lay.n_cells())
        throw std::invalid_argument("burned count + n_fresh must equal the full-core location count");
    if (static_cast<int>(inst.slot_spec.size()) != lay.n_slots())
        throw std::invalid_argument("slot_spec size does not match the reduced map");
    if (inst.catalog.empty()) throw std::invalid_argument("empty catalog");

    std::unordered_set<std::string> ids;
    for (const auto& b : inst.burned) {
        if (!ids.insert(b.id).second) throw std::invalid_argument("duplicate burned id: " + b.id);
        if (b.k_value <= 0.0) throw std::invalid_argument("burned k_value must be positive: " + b.id);
        if (b.bu0 < 0.0) throw std::invalid_argument("burned bu0 must be non-negative: " + b.id);
    }

    int burned_capacity = 0;
    for (int s = 0; s < lay.n_slots(); ++s) {
        const auto& choices = inst.slot_spec[s];
        if (choices.empty()) throw std::invalid_argument("empty choice list at slot " + std::to_string(s));
        const LocationClass cls = lay.cls[lay.slots[s][0]];
        bool any_burned = false;
        for (const auto& ch : choices) {
            if (ch.is_fresh) {
                if (ch.index < 0 || ch.index >= static_cast<int>(inst.catalog.size()))
                    throw std::invalid_argument("catalog index out of range at slot " + std::to_string(s));
                if (inst.tactics.no_fresh_at_periphery && cls == LocationClass::periphery)
                    throw std::invalid_argument("fresh choice on a periphery slot with no_fresh_at_periphery");
            } else {
                if (ch.index < 0 || ch.index >= static_cast<int>(inst.burned.size()))
                    throw std::invalid_argument("burned index out of range at slot " + std::to_string(s));
                any_burned = true;
                if (inst.tactics.fresh_ring && cls == LocationClass::ring)
                    throw std::invalid_argument("burned choice on a ring slot with fresh_ring");
                if (inst.tactics.twice_at_periphery && cls != LocationClass::periphery &&
                    inst.burned[ch.index].burn_class == BurnClass::twice)
                    throw std::invalid_argument("twice-burned choice off-periphery with twice_at_periphery");
            }
        }
        if (any_burned) burned_capacity += lay.multiplicity(s);
    }
    if (burned_capacity < static_cast<int>(inst.burned.size()))
        throw std::invalid_argument("slot structure cannot host the burned inventory");
}

namespace {

// Subset-sum feasibility: can some subset of the remaining burned-capable
// slot multiplicities absorb exactly `need` assemblies? Multiplicities are
// tiny (1/2/4/8), so a bitset DP over the need is cheap.
class BurnCapacityTracker {
public:
    BurnCapacityTracker(const ProblemInstance& inst, const std::vector<char>& slot_has_burned) {
        const int n = inst.layout.n_slots();
        suffix_.resize(static_cast<std::size_t>(n) + 1);
        suffix_[n] = {};
        for (int s = n - 1; s >= 0; --s) {
            suffix_[s] = suffix_[s + 1];
            if (slot_has_burned[s]) suffix_[s].push_back(inst.layout.multiplicity(s));
        }
    }

    // True if a subset of multiplicities of burned-capable slots strictly
    // after `slot` sums to exactly `need`.
    bool feasible_after(int slot, int need) const {
        if (need == 0) return true;
        const auto& mults = suffix_[slot + 1];
        std::vector<std::uint64_t> reach((static_cast<std::size_t>(need) >> 6) + 1, 0);
        reach[0] = 1;
        for (int m : mults) {
            if (m > need) continue;
            for (int i = static_cast<int>(reach.size()) - 1; i >= 0; --i) {
                const int shift_words = m >> 6;
                const int shift_bits = m & 63;
                std::uint64_t v = 0;
                if (i - shift_words >= 0) {
                    v = reach[i - shift_words] << shift_bits;
                    if (shift_bits && i - shift_words - 1 >= 0)
                        v |= reach[i - shift_words - 1] >> (64 - shift_bits);
                }
                reach[i] |= v;
            }
            if (reach[static_cast<std::size_t>(need) >> 6] & (1ULL << (need & 63))) return true;
        }
        return (reach[static_cast<std::size_t>(need) >> 6] >> (need & 63)) & 1;
    }

private:
    std::vector<std::vector<int>> suffix_;
};

struct DecodeState {
    std::vector<char> consumed;      // per burned index
    std::vector<char> fresh_cell;    // per full-core cell (committed or ring-reserved)
    int burned_remaining = 0;
};

// Would marking this slot's cells fresh complete a 2x2 all-fresh block
// anywhere on the full map?
bool completes_fresh_square(const CoreLayout& lay, const std::vector<int>& cells,
                            std::vector<char>& fresh_cell) {
    for (int cell : cells) fresh_cell[cell] = 1;
    bool square = false;
    for (int cell : cells) {
        const auto [r, c] = lay.cell_rc[cell];
        for (int dr = -1; dr <= 0 && !square; ++dr)
            for (int dc = -1; dc <= 0 && !square; ++dc) {
                const int a = lay.cell(r + dr, c + dc);
                const int b = lay.cell(r + dr, c + dc + 1);
                const int d = lay.cell(r + dr + 1, c + dc);
                const int e = lay.cell(r + dr + 1, c + dc + 1);
                if (a >= 0 && b >= 0 && d >= 0 && e >= 0 && fresh_cell[a] && fresh_cell[b] &&
                    fresh_cell[d] && fresh_cell[e])
                    square = true;
            }
    }
    for (int cell : cells) fresh_cell[cell] = 0;
    return square;
}

}  // namespace

CoreMap decode(const DecisionVector& v, const ProblemInstance& inst) {
    const CoreLayout& lay = inst.layout;
    const int n_slots = lay.n_slots();
    if (static_cast<int>(v.size()) != n_slots)
        throw std::invalid_argument("decision vector length " + std::to_string(v.size()) +
                                    " does not match slot count " + std::to_string(n_slots));
    for (int s = 0; s < n_slots; ++s)
        if (v[s] < 0 || v[s] >= inst.cardinality(s))
            throw std::invalid_argument("entry out of range at slot " + std::to_string(s));

    std::vector<char> slot_has_burned(static_cast<std::size_t>(n_slots), 0);
    for (int s = 0; s < n_slots; ++s)
        for (const auto& ch : inst.slot_spec[s])
            if (!ch.is_fresh) {
                slot_has_burned[s] = 1;
                break;
            }
    const BurnCapacityTracker capacity(inst, slot_has_burned);

    DecodeState st;
    st.consumed.assign(inst.burned.size(), 0);
    st.fresh_cell.assign(static_cast<std::size_t>(lay.n_cells()), 0);
    st.burned_remaining = static_cast<int>(inst.burned.size());

    // Ring cells are fresh by tactic; reserve them up-front so the 2x2 check
    // sees them before their slots are traversed.
    if (inst.tactics.fresh_ring)
        for (int cell = 0; cell < lay.n_cells(); ++cell)
            if (lay.cls[cell] == LocationClass::ring) st.fresh_cell[cell] = 1;

    CoreMap core;
    core.fresh_type.assign(static_cast<std::size_t>(lay.n_cells()), -1);
    core.burned_index.assign(static_cast<std::size_t>(lay.n_cells()), -1);

    for (int s = 0; s < n_slots; ++s) {
        const auto& choices = inst.slot_spec[s];
        const auto& cells = lay.slots[s];
        const int mult = static_cast<int>(cells.size());
        const LocationClass cls = lay.cls[cells[0]];
        const int card = static_cast<int>(choices.size());

        auto fresh_eligible = [&](bool enforce_square) {
            if (inst.tactics.no_fresh_at_periphery && cls == LocationClass::periphery) return false;
            if (!capacity.feasible_after(s, st.burned_remaining)) return false;
            if (enforce_square && inst.tactics.no_fresh_square && cls != LocationClass::ring &&
                completes_fresh_square(lay, cells, st.fresh_cell))
                return false;
            return true;
        };

        auto burned_eligible = [&](int b) {
            if (st.consumed[b]) return false;
            if (inst.tactics.twice_at_periphery && cls != LocationClass::periphery &&
                inst.burned[b].burn_class == BurnClass::twice)
                return false;
            if (inst.tactics.fresh_ring && cls == LocationClass::ring) return false;
            if (st.burned_remaining < mult) return false;
            // Enough unconsumed ids must be reachable from this slot's list.
            int available = 0;
            for (const auto& ch : choices)
                if (!ch.is_fresh && !st.consumed[ch.index] && ++available >= mult) break;
            if (available < mult) return false;
            return capacity.feasible_after(s, st.burned_remaining - mult);
        };

        int picked = -1;
        // First pass honors the fresh-square tactic; if that leaves nothing,
        // inventory conservation wins and the square check is relaxed.
        for (int pass = 0; pass < 2 && picked < 0; ++pass) {
            for (int t = 0; t < card; ++t) {
                const int idx = (v[s] + t) % card;
                const SlotChoice& ch = choices[idx];
                const bool ok = ch.is_fresh ? fresh_eligible(pass == 0) : burned_eligible(ch.index);
                if (ok) {
                    picked = idx;
                    break;
                }
            }
        }
        if (picked < 0)
            throw std::invalid_argument("no eligible choice at slot " + std::to_string(s) +
                                        " (instance slot structure cannot conserve inventory)");

        const SlotChoice& choice = choices[picked];
        if (choice.is_fresh) {
            for (int cell : cells) {
                core.fresh_type[cell] = choice.index;
                st.fresh_cell[cell] = 1;
            }
        } else {
            // Consume `mult` ids: the selected one, then the next available
            // burned entries of this slot's list in cyclic order. Image cells
            // are filled in row-major order.
            std::vector<int> take;
            take.reserve(static_cast<std::size_t>(mult));
            take.push_back(choice.index);
            st.consumed[choice.index] = 1;
            for (int t = 1; t < card && static_cast<int>(take.size()) < mult; ++t) {
                const SlotChoice& ch = choices[(picked + t) % card];
                if (!ch.is_fresh && !st.consumed[ch.index]) {
                    take.push_back(ch.index);
                    st.consumed[ch.index] = 1;
                }
            }
            st.burned_remaining -= mult;
            for (int i = 0; i < mult; ++i) core.burned_index[cells[i]] = take[i];
        }
    }
    return core;
}

std::vector<TacticViolation> check_tactics(const CoreMap& core, const ProblemInstance& inst) {
    std::vector<TacticViolation> out;
    const CoreLayout& lay = inst.layout;

    for (int cell = 0; cell < lay.n_cells(); ++cell) {
        const LocationClass cls = lay.cls[cell];
        if (inst.tactics.twice_at_periphery && core.burned_index[cell] >= 0 &&
            inst.burned[core.burned_index[cell]].burn_class == BurnClass::twice &&
            cls != LocationClass::periphery)
            out.push_back({"twice_at_periphery", cell});
        if (inst.tactics.no_fresh_at_periphery && core.is_fresh(cell) && cls == LocationClass::periphery)
            out.push_back({"no_fresh_at_periphery", cell});
        if (inst.tactics.fresh_ring && !core.is_fresh(cell) && cls == LocationClass::ring)
            out.push_back({"fresh_ring", cell});
    }

    if (inst.tactics.no_fresh_square) {
        for (int r = 0; r + 1 < lay.rows; ++r)
            for (int c = 0; c + 1 < lay.cols; ++c) {
                const int a = lay.cell(r, c);
                const int b = lay.cell(r, c + 1);
                const int d = lay.cell(r + 1, c);
                const int e = lay.cell(r + 1, c + 1);
                if (a >= 0 && b >= 0 && d >= 0 && e >= 0 && core.is_fresh(a) && core.is_fresh(b) &&
                    core.is_fresh(d) && core.is_fresh(e))
                    out.push_back({"no_fresh_square", a});
            }
    }
    return out;
}

}  // namespace lpopt
