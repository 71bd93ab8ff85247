#include "coleman/colemandata.hpp"

namespace coleman {

namespace {

ColemanData dispatch(const Curve& curve, const std::vector<PointMod>& points, const DataOptions& opt, DataStats* stats,
                     bool naive) {
  try {
    return with_ring(
        curve.p, curve.working_exponent(),
        [&](const auto& ring) { return detail::run(ring, curve, points, opt, stats, naive); }, opt.backend);
  } catch (const InexactDivision& e) {
    throw PrecisionViolation(std::string("reduction lost precision: ") + e.what());
  } catch (const ExcessValuation& e) {
    throw PrecisionViolation(std::string("reduction lost precision: ") + e.what());
  }
}

}  // namespace

ColemanData coleman_data(const Curve& curve, const std::vector<PointMod>& points, const DataOptions& opt,
                         DataStats* stats) {
  return dispatch(curve, points, opt, stats, false);
}

ColemanData coleman_data_naive(const Curve& curve, const std::vector<PointMod>& points, const DataOptions& opt,
                               DataStats* stats) {
  return dispatch(curve, points, opt, stats, true);
}

}  // namespace coleman
