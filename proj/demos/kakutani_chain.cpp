// Coupling -> orbit couple -> Kakutani data -> groupoid homology, for one scenario.
#include "coarse/coarse.hpp"

#include <iostream>

int main(int argc, char **argv) {
  const std::string name = argc > 1 ? argv[1] : "z4-z2-kakutani";
  auto coupling = coarse::coupling_scenario(name);
  auto couple = coarse::coupling_to_couple(coupling);
  std::cout << name << ": |Omega| = " << coupling.size() << ", |X| = " << couple.sys_g.size()
            << ", |Y| = " << couple.sys_h.size() << "\n";
  std::cout << "round trip: " << coarse::roundtrip_iso_check(coupling).to_json()["verdict"].get<std::string>() << "\n";
  auto kd = coarse::couple_to_kakutani(couple);
  std::cout << "Kakutani data: |A| = " << kd.A.size() << ", |B| = " << kd.B.size() << "\n";
  auto rep = coarse::morita_invariance_check(couple.sys_g, couple.sys_h, kd, coarse::Ring::integers(), 1, 2);
  for (std::size_t n = 0; n < rep.whole_x.size(); ++n)
    std::cout << "  H_" << n << ": X " << rep.whole_x[n].format() << ", Y " << rep.whole_y[n].format() << ", X|A "
              << rep.restricted_a[n].format() << ", Y|B " << rep.restricted_b[n].format() << "\n";
  std::cout << "Morita: " << (rep.ok ? "OK" : "MISMATCH") << "\n";
}
