#pragma once

#include <string>
#include <vector>

#include "tandem/scheduler.hpp"

namespace tandem {

struct AuditResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Re-checks a solution from first principles: route shape and coverage,
/// sortie/route compatibility, per-UAV sequencing, per-sortie battery,
/// UAV flight times, launch/intercept positions against the truck timeline,
/// the J sum and package mass conservation.
AuditResult audit_solution(const RoutePlan& plan, const Schedule& schedule, const Instance& inst,
                           const TransformedGraph& xf, const TimelineConfig& timeline = {},
                           double service_time_s = 0.0);

}  // namespace tandem
