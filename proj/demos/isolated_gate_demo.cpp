// Isolated sigma_x/2 gate next to four spectators: modulated drive vs plain sin^2 pulse.
#include <cstdio>

#include "zzcm/zzcm.hpp"

int main() {
  using namespace zzcm;
  const double gamma = find_gamma(std::numbers::pi / 4, 4).gamma;
  std::printf("gamma* = %.5f\n", gamma);

  const Scenario zzcm = scenario_s1(4);
  const Scenario dy = scenario_s1(4, AmplitudeMode::Uncapped, Scheme::Dynamical);
  std::printf("%8s %14s %14s\n", "eta", "1-F (zzcm)", "1-F (dy)");
  for (double eta : {-0.1, -0.05, 0.0, 0.05, 0.1}) {
    const double a = gate_fidelity(zzcm.schedule(eta), zzcm.ideal()).infidelity;
    const double b = gate_fidelity(dy.schedule(eta), dy.ideal()).infidelity;
    std::printf("%8.3f %14.3e %14.3e\n", eta, a, b);
  }
}
