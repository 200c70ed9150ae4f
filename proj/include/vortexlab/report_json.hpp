#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "vortexlab/collisions.hpp"
#include "vortexlab/parallelogram.hpp"
#include "vortexlab/reduced_flow.hpp"
#include "vortexlab/reduction.hpp"

namespace vortexlab {

inline constexpr const char* kReportSchema = "vortexlab.report/1";
inline constexpr const char* kErrorSchema = "vortexlab.error/1";
inline constexpr const char* kReduceSchema = "vortexlab.reduce/1";
inline constexpr const char* kClassifySchema = "vortexlab.classify/1";
inline constexpr const char* kSweepSchema = "vortexlab.sweep/1";

/// Non-finite numbers become null, as JSON has no spelling for them.
nlohmann::json number(double v);

nlohmann::json to_json(const InvariantSet& inv);
nlohmann::json to_json(const DriftSummary& d);
nlohmann::json to_json(const CollisionReport& r);
nlohmann::json to_json(const CollapseCondition& c);
nlohmann::json to_json(const std::vector<CollapseCondition>& cs);
nlohmann::json to_json(const BoundReport& b);
nlohmann::json to_json(const PreservationReport& p);
nlohmann::json to_json(const ParallelogramParams& p);
nlohmann::json to_json(const ReducedChartPoint& rp);
nlohmann::json to_json(const TransformChain& c);
nlohmann::json to_json(const ComparisonReport& c);

/// {"schema": "vortexlab.error/1", "kind": ..., "message": ...}.
nlohmann::json error_json(const std::string& kind, const std::string& message);
/// Exception class name used as the error kind.
std::string error_kind(const std::exception& e);

}  // namespace vortexlab
