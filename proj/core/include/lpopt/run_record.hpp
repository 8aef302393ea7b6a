// core/include/lpopt/run_record.hpp
//
// One row per objective evaluation, shared by every optimizer and the harness
// CSV logs.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "lpopt/problem.hpp"
#include "lpopt/surrogate.hpp"

namespace lpopt {

struct RunRecord {
    std::string run_id;
    std::string algo;
    std::uint64_t seed = 0;
    long sample_idx = 0;  // contiguous from 0 within a run
    int worker = 0;
    DecisionVector vector;
    double objective = 0.0;
    bool feasible = true;
    std::optional<FomVector> foms;
};

using RecordSink = std::function<void(const RunRecord&)>;

}  // namespace lpopt
