// Library walkthrough: ring indices, sphere index sum and a ring arrival
// for (x1^2 + x2^2 - 1)·dx/dt = J·(-x2, x1).

#include <cstdio>

#include "degen/analysis.hpp"
#include "degen/deg_index.hpp"
#include "degen/flow.hpp"
#include "degen/sphere.hpp"

int main() {
  using namespace degen;
  const auto f = ScalarField::parse("x1^2 + x2^2 - 1");
  const auto e = VectorField::parse("-x2", "x1");
  const Domain dom{-2.0, 2.0, -2.0, 2.0, 256};

  const ChartAnalysis chart = analyze_chart(f, e, dom);
  for (const RingResult& r : chart.rings)
    if (r.report)
      std::printf("ring: m=%d rind=%d winding=%d %s\n", r.report->m, r.report->rind, r.report->winding,
                  to_string(r.report->classification).c_str());
  for (const Equilibrium& z : chart.zeros)
    std::printf("zero at (%g, %g): index %d, %s\n", z.position.x, z.position.y, z.poincare_index,
                to_string(z.kind));

  const PoincareHopfVerdict v = check_poincare_hopf(analyze_sphere(compactify(f, e), dom));
  std::printf("sphere index sum: %s (%s)\n", v.sum.str().c_str(), v.holds ? "holds" : "does not hold");

  const Trajectory tr = integrate(f, e, {2.0, 0.0}, 10.0, 1e-8, {chart.rings.front().ring});
  std::printf("from (2, 0): %s at t = %.6f\n", to_string(tr.termination), tr.t.back());
  return 0;
}
