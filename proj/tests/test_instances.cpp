#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "lpopt/instances.hpp"
#include "lpopt/surrogate.hpp"

using namespace lpopt;

namespace {

bool same_instance(const ProblemInstance& a, const ProblemInstance& b) {
    if (a.name != b.name || a.n_fresh != b.n_fresh) return false;
    if (a.layout.rows != b.layout.rows || a.layout.cols != b.layout.cols) return false;
    if (a.layout.symmetry != b.layout.symmetry || a.layout.cell_at != b.layout.cell_at) return false;
    if (a.layout.slots != b.layout.slots) return false;
    if (a.catalog.size() != b.catalog.size() || a.burned.size() != b.burned.size()) return false;
    for (std::size_t i = 0; i < a.catalog.size(); ++i)
        if (!(a.catalog[i] == b.catalog[i])) return false;
    for (std::size_t i = 0; i < a.burned.size(); ++i) {
        if (a.burned[i].id != b.burned[i].id) return false;
        if (a.burned[i].burn_class != b.burned[i].burn_class) return false;
        if (a.burned[i].k_value != b.burned[i].k_value) return false;
        if (a.burned[i].bu0 != b.burned[i].bu0) return false;
    }
    if (a.slot_spec != b.slot_spec) return false;
    if (a.constraints.items.size() != b.constraints.items.size()) return false;
    const SurrogateCoefficients &ca = a.coeffs, &cb = b.coeffs;
    return ca.a0 == cb.a0 && ca.a1 == cb.a1 && ca.nu == cb.nu && ca.a_cy == cb.a_cy &&
           ca.a_cb == cb.a_cb && ca.b_cb == cb.b_cb && ca.dbu == cb.dbu && ca.a_cost == cb.a_cost;
}

}  // namespace

TEST_CASE("builtin instances are well-formed") {
    for (const auto& name : builtin_instance_names()) {
        CAPTURE(name);
        const ProblemInstance inst = builtin_instance(name);
        CHECK(inst.name == name);
        CHECK_NOTHROW(validate_instance(inst));
        CHECK(static_cast<int>(inst.burned.size()) + inst.n_fresh == inst.layout.n_cells());
    }
    CHECK_THROWS(builtin_instance("nope"));
}

TEST_CASE("89-eighth matches the reference core structure") {
    const ProblemInstance inst = builtin_instance("89-eighth");
    CHECK(inst.layout.n_cells() == 193);
    CHECK(inst.n_fresh == 89);
    CHECK(inst.burned.size() == 104);
    CHECK(inst.catalog.size() == 24);

    int once = 0, twice = 0;
    double min_once = 1e9, max_twice = -1e9;
    for (const auto& b : inst.burned) {
        if (b.burn_class == BurnClass::once) {
            ++once;
            min_once = std::min(min_once, b.k_value);
        } else {
            ++twice;
            max_twice = std::max(max_twice, b.k_value);
        }
    }
    CHECK(once == 88);
    CHECK(twice == 16);
    // Twice-burned fuel is strictly less reactive than any once-burned.
    CHECK(max_twice < min_once);

    // Slot multiplicities cover the full core.
    int total = 0;
    for (int s = 0; s < inst.layout.n_slots(); ++s) total += inst.layout.multiplicity(s);
    CHECK(total == 193);
}

TEST_CASE("scenario roles host the inventory exactly") {
    for (const auto& name : {"89-eighth", "81-eighth", "89-quarter", "85-quarter", "81-quarter"}) {
        CAPTURE(name);
        const ProblemInstance inst = builtin_instance(name);
        int burned_capacity = 0;
        for (int s = 0; s < inst.layout.n_slots(); ++s) {
            const bool has_burned = !inst.slot_spec[s].empty() && !inst.slot_spec[s][0].is_fresh;
            bool mixed = false;
            for (const auto& ch : inst.slot_spec[s])
                if (ch.is_fresh != inst.slot_spec[s][0].is_fresh) mixed = true;
            CHECK(!mixed);  // scenario slots are typed all-fresh or all-burned
            if (has_burned) burned_capacity += inst.layout.multiplicity(s);
        }
        CHECK(burned_capacity == static_cast<int>(inst.burned.size()));
    }
}

TEST_CASE("instance save/load round-trip") {
    const std::string path = std::filesystem::temp_directory_path() / "lpopt_roundtrip.ini";
    for (const auto& name : {"toy4", "89-eighth", "85-quarter"}) {
        CAPTURE(name);
        const ProblemInstance inst = builtin_instance(name);
        save_instance(inst, path);
        const ProblemInstance loaded = load_instance(path);
        CHECK(same_instance(inst, loaded));
    }
    std::remove(path.c_str());
}

TEST_CASE("shipped instance files match the builtin definitions") {
    for (const auto& name : builtin_instance_names()) {
        CAPTURE(name);
        const std::string path = std::string(LPOPT_SOURCE_DIR) + "/instances/" + name + ".ini";
        REQUIRE(std::filesystem::exists(path));
        CHECK(same_instance(load_instance(path), builtin_instance(name)));
    }
}
