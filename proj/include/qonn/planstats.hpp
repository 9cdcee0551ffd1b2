#ifndef QONN_PLANSTATS_HPP
#define QONN_PLANSTATS_HPP

#include <json.hpp>

#include "qonn/plan.hpp"

namespace qonn {

// Term counts, matching counts and a rough flop estimate per expectation,
// for the plan-stats CLI verb.
nlohmann::json plan_stats_json(const ExpectationPlan& plan);

}  // namespace qonn

#endif
