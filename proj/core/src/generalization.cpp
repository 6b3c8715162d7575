#include "hullscope/hull.hpp"
#include "hullscope/overparam.hpp"
#include "hullscope/parallel.hpp"

namespace hullscope::overparam {

GeneralizationReport decompose_generalization(const boundary::Classifier& clf, const Dataset& train,
                                              const Dataset& test, double dist_tol) {
  if (train.d() != test.d() || test.d() != clf.dim()) {
    throw InvalidArgument("dimension mismatch between classifier, train and test data");
  }
  const std::size_t n = test.n();
  std::vector<hull::MembershipResult> membership(n);
  std::vector<int> predicted(n);
  parallel_for(n, [&](std::size_t i) {
    const Vector x = test.point(i);
    membership[i] = hull::membership(x, train.points(), dist_tol);
    predicted[i] = clf(x);
  });

  GeneralizationReport report;
  report.n_test = n;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    GroupStats* group = &report.unresolved;
    if (membership[i].status == hull::Membership::InHull) group = &report.interpolation;
    if (membership[i].status == hull::Membership::OutOfHull) group = &report.extrapolation;
    const bool ok = predicted[i] == test.labels()[i];
    ++group->count;
    group->correct += ok;
    group->mean_distance += membership[i].distance;
    correct += ok;
  }
  for (GroupStats* g : {&report.interpolation, &report.extrapolation, &report.unresolved}) {
    if (g->count > 0) {
      g->accuracy = static_cast<double>(g->correct) / static_cast<double>(g->count);
      g->mean_distance /= static_cast<double>(g->count);
    }
  }
  report.overall_accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return report;
}

}  // namespace hullscope::overparam
