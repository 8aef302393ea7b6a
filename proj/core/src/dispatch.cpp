#include "lpopt/dispatch.hpp"

#include <stdexcept>
#include <utility>

namespace lpopt {

EvalDispatcher::EvalDispatcher(const Objective& obj, WorkerPool& pool, long max_samples,
                               RunMeta meta, RecordSink sink)
    : obj_(obj), pool_(pool), max_samples_(max_samples), meta_(std::move(meta)),
      sink_(std::move(sink)) {
    if (max_samples < 0) throw std::invalid_argument("max_samples must be non-negative");
}

std::vector<Evaluation> EvalDispatcher::evaluate(const std::vector<DecisionVector>& batch) {
    const long take = std::min<long>(static_cast<long>(batch.size()), remaining());
    std::vector<Evaluation> evals(static_cast<std::size_t>(take));
    if (take == 0) return evals;

    pool_.for_each(static_cast<int>(take),
                   [&](int i) { evals[i] = obj_.evaluate(batch[i]); });

    for (long i = 0; i < take; ++i) {
        const Evaluation& e = evals[i];
        if (sink_) {
            RunRecord rec;
            rec.run_id = meta_.run_id;
            rec.algo = meta_.algo;
            rec.seed = meta_.seed;
            rec.sample_idx = used_ + i;
            rec.worker = static_cast<int>(i % pool_.size());
            rec.vector = batch[i];
            rec.objective = e.objective;
            rec.feasible = e.feasible;
            rec.foms = e.foms;
            sink_(rec);
        }
        if (!has_best_ || e.objective > best_objective_) {
            has_best_ = true;
            best_objective_ = e.objective;
            best_vector_ = batch[i];
        }
    }
    used_ += take;
    return evals;
}

}  // namespace lpopt
