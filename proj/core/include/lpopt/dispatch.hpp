// core/include/lpopt/dispatch.hpp
//
// Budgeted, logged objective evaluation. Every optimizer funnels its
// candidate batches through one dispatcher per run: the dispatcher truncates
// the final batch at the sample budget, assigns deterministic worker lanes,
// records one RunRecord per evaluation and tracks the best solution seen.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpopt/run_record.hpp"
#include "lpopt/surrogate.hpp"
#include "lpopt/worker_pool.hpp"

namespace lpopt {

struct RunMeta {
    std::string run_id;
    std::string algo;
    std::uint64_t seed = 0;
};

class EvalDispatcher {
public:
    EvalDispatcher(const Objective& obj, WorkerPool& pool, long max_samples, RunMeta meta,
                   RecordSink sink = nullptr);

    // Evaluates the longest prefix of `batch` the budget allows, in parallel.
    // Records and best-tracking happen in batch order. The returned vector
    // may be shorter than the batch; once the budget is exhausted it is
    // empty.
    std::vector<Evaluation> evaluate(const std::vector<DecisionVector>& batch);

    bool exhausted() const { return used_ >= max_samples_; }
    long used() const { return used_; }
    long remaining() const { return max_samples_ - used_; }

    bool has_best() const { return has_best_; }
    double best_objective() const { return best_objective_; }
    const DecisionVector& best_vector() const { return best_vector_; }

private:
    const Objective& obj_;
    WorkerPool& pool_;
    long max_samples_;
    RunMeta meta_;
    RecordSink sink_;
    long used_ = 0;
    bool has_best_ = false;
    double best_objective_ = 0.0;
    DecisionVector best_vector_;
};

// Convenience result bundle returned by every run_* entry point.
struct OptimizerResult {
    DecisionVector best;
    double objective = 0.0;
    long samples = 0;
};

}  // namespace lpopt
