// Builds the quasi-inverse omega of a gallery map and prints its first blocks.
#include "coarse/coarse.hpp"

#include <iostream>

int main(int argc, char **argv) {
  const std::string name = argc > 1 ? argv[1] : "z-double";
  auto phi = coarse::gallery_map(name);
  auto om = coarse::omega(phi, 20);
  const auto &H = phi.target();
  std::cout << "omega for " << name << " (prefix 20)\n";
  std::size_t shown = 0;
  for (const auto &b : om.partition.blocks) {
    if (shown++ == 6) break;
    std::cout << "  block " << b.index << " shift " << H.format(b.shift) << ":";
    for (std::size_t i = 0; i < b.members.size() && i < 8; ++i) std::cout << " " << H.format(b.members[i]);
    if (b.members.size() > 8) std::cout << " ... (" << b.members.size() << " in the prefix ball)";
    std::cout << "\n";
  }
  std::cout << "omega(phi(x)) x^-1 over ball(20):";
  for (const auto &d : om.difference_set) std::cout << " " << phi.source().format(d);
  std::cout << "\n";
  for (const auto &y : H.ball(2)) std::cout << "  omega(" << H.format(y) << ") = " << phi.source().format(om.omega(y)) << "\n";
}
