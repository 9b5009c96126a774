// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "coarse/coarse.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace coarse;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds; // 0 = no time limit
  std::function<Outcome()> run;
};

const std::vector<std::string> kGroups = {"Z", "Z^2", "F2", "Dinf", "Z/6"};

auto rings() -> std::vector<Ring> { return {Ring::integers(), Ring::parse("Q"), Ring::parse("Z/5")}; }

auto boundary_squared() -> Outcome {
  Rng rng(1);
  std::size_t checked = 0;
  for (const auto &name : kGroups) {
    auto G = named_group(name);
    for (const auto &ring : rings())
      for (int n = 2; n <= 3; ++n)
        for (int s = 0; s < 200; ++s) {
          auto c = random_chain(rng, G, ring, 1, n, 4);
          ++checked;
          if (!boundary(boundary(c)).is_zero())
            return {false, name + " " + ring.name() + " degree " + std::to_string(n) + ": " + c.format()};
        }
  }
  return {true, std::to_string(checked) + " chains"};
}

auto chi_naturality() -> Outcome {
  Rng rng(2);
  for (int s = 0; s < 100; ++s) {
    auto G = named_group(kGroups[s % kGroups.size()]);
    auto ring = rings()[s % 3];
    int n = 1 + s % 3;
    auto b = chi_inv(random_chain(rng, G, ring, 2, n, 5));
    if (!(chi(bar_boundary(b)) == boundary(chi(b)))) return {false, "sample " + std::to_string(s)};
    if (!(chi_inv(chi(b)) == b)) return {false, "round trip, sample " + std::to_string(s)};
  }
  return {true, "100 chains"};
}

auto induced_map_laws() -> Outcome {
  Rng rng(3);
  std::vector<CoarseMap> maps;
  for (const auto &e : map_catalog()) maps.push_back(gallery_map(e.name));
  std::size_t pairs = 0;
  for (const auto &phi : maps)
    for (int s = 0; s < 50; ++s) {
      auto c = random_chain(rng, phi.source(), Ring::integers(), 1, 1 + s % 3, 4);
      if (!(boundary(induced_chain_map(phi, c)) == induced_chain_map(phi, boundary(c))))
        return {false, "chain map law fails for " + phi.name()};
    }
  for (const auto &phi : maps)
    for (const auto &psi : maps) {
      if (!(phi.target() == psi.source())) continue;
      ++pairs;
      auto both = compose(psi, phi);
      for (int s = 0; s < 50; ++s) {
        auto c = random_chain(rng, phi.source(), rings()[s % 3], 1, s % 4, 4);
        if (!(induced_chain_map(both, c) == induced_chain_map(psi, induced_chain_map(phi, c))))
          return {false, "functoriality fails for " + psi.name() + " o " + phi.name()};
      }
    }
  return {true, std::to_string(maps.size()) + " maps, " + std::to_string(pairs) + " composable pairs"};
}

auto homotopies() -> Outcome {
  auto cfg = nlohmann::json::parse(R"({
    "experiment": "homotopy-suite", "seed": 4,
    "pairs": [["z-double", "z-double-plus-one"], ["z-id", "z-parity-shift"]],
    "l_maps": ["z-double"], "degrees": 2, "samples": 50, "cochain_points": 500})");
  auto r = run_experiment(cfg);
  std::ostringstream d;
  d << r.body["results"]["sign"].get<std::string>();
  for (const auto &[k, v] : r.body["results"].items())
    if (v.is_object() && v.contains("checked")) d << "; " << k << " " << v["checked"].get<std::size_t>();
  return {r.passed(), d.str()};
}

auto omega_construction() -> Outcome {
  auto phi = gallery_map("z-double");
  auto om = omega(phi, 50);
  const auto G = named_group("Z");
  for (const auto &y : G.ball(50)) {
    auto v = y.nf[0];
    auto expected = v % 2 == 0 ? v / 2 : (v - 1) / 2;
    if (om.omega(y).nf[0] != expected) return {false, "omega(" + std::to_string(v) + ") is wrong"};
  }
  if (om.difference_set.size() != 1 || !G.is_identity(om.difference_set[0]))
    return {false, "difference set is not {0}"};
  return {true, "closed form on ball(50), difference set {0}"};
}

auto finite_homology() -> Outcome {
  for (std::int64_t m : {2, 3, 4, 6}) {
    auto G = named_group("Z/" + std::to_string(m));
    for (int n = 0; n <= 3; ++n)
      if (!(homology_finite(G, CoefficientModule::parse("trivial-Z"), n) == cyclic_homology_oracle(m, n)))
        return {false, "Z/" + std::to_string(m) + " trivial degree " + std::to_string(n)};
    for (int n = 0; n <= 2; ++n) {
      auto h = homology_finite(G, CoefficientModule::parse("group-ring-Z"), n);
      if (h.format() != (n == 0 ? "Z" : "0")) return {false, "Z/" + std::to_string(m) + " group ring degree " + std::to_string(n)};
    }
  }
  auto z2 = named_group("Z/2");
  auto h1 = homology_finite(z2, CoefficientModule::parse("trivial-Z"), 1).format();
  auto h3 = homology_finite(z2, CoefficientModule::parse("trivial-Z"), 3).format();
  return {h1 == "Z/2" && h3 == "Z/2", "H_1(Z/2) = " + h1 + ", H_3(Z/2) = " + h3};
}

auto coarse_invariance() -> Outcome {
  for (const auto &name : {"triv-into-z2", "z2-const-z3"})
    for (int n = 0; n <= 2; ++n) {
      auto r = induced_map_on_homology(gallery_map(name), CoefficientModule::parse("group-ring-Z"), n);
      if (!(r.isomorphism && r.omega_after_phi_identity && r.phi_after_omega_identity))
        return {false, std::string(name) + " degree " + std::to_string(n) + ": " + r.to_json().dump()};
    }
  return {true, "isomorphism in degrees 0..2 for both maps"};
}

auto negative_controls() -> Outcome {
  auto abs = gallery_map("z-abs");
  auto e = check_coarse_embedding(abs, 10);
  if (e.verdict != Verdict::Falsified || !e.witness) return {false, "z-abs not falsified at radius 10"};
  auto [s, t] = *e.witness;
  auto f2 = gallery_map("f2-abelianize");
  const auto &F = f2.source();
  std::map<GroupElement, std::size_t> fiber;
  std::size_t worst = 0;
  for (const auto &x : F.ball(6)) worst = std::max(worst, ++fiber[f2(x)]);
  auto rep = check_coarse_map(f2, 6);
  bool ok = worst >= 13 && rep.proper == Verdict::Falsified;
  return {ok, "z-abs witness (" + abs.source().format(s) + ", " + abs.source().format(t) +
                  "); f2-abelianize largest fiber in ball(6) = " + std::to_string(worst)};
}

auto module_identities() -> Outcome {
  std::size_t checks = 0;
  for (const auto &name : gallery_embeddings()) {
    auto phi = gallery_map(name);
    const auto &G = phi.source();
    for (const auto &x : G.ball(6)) {
      auto d = FinSupFun::delta(G, Ring::integers(), 1, x);
      ++checks;
      if (!pull_push_identity(phi, d, 6).holds) return {false, "pull-push fails for " + name + " at " + G.format(x)};
      for (const auto &h : phi.target().ball(2)) {
        ++checks;
        if (!translate_push_identity(phi, h, d, 6).holds)
          return {false, "translate-push fails for " + name + " at " + G.format(x)};
      }
    }
  }
  for (const auto &name : {"triv-into-z2", "z2-const-z3", "z2-into-z4", "z4-mod-z2"})
    for (const auto &ring : rings()) {
      ++checks;
      if (!pullback_of_preimage_module_is_full(gallery_map(name), ring, 1))
        return {false, std::string("span equality fails for ") + name};
    }
  return {true, std::to_string(checks) + " identities"};
}

auto dynamics() -> Outcome {
  std::size_t roundtrips = 0, mutations = 0;
  for (const auto &entry : scenario_catalog()) {
    auto c = coupling_scenario(entry.name);
    if (!roundtrip_iso_check(c).ok()) return {false, "round trip fails for " + entry.name};
    auto oc = coupling_to_couple(c);
    if (!oc.check().ok) return {false, "cocycle check fails for " + entry.name};
    if (!couple_roundtrip_check(oc).ok) return {false, "couple round trip fails for " + entry.name};
    ++roundtrips;
    for (const auto &sweep : {mutation_sweep(c), mutation_sweep(oc)}) {
      if (!sweep.all_detected()) return {false, "undetected mutation in " + entry.name};
      mutations += sweep.tried;
    }
  }
  auto sg = translation_system(group_table(named_group("Z/4")));
  auto sh = translation_system(group_table(named_group("Z/2")));
  auto kd = couple_to_kakutani(coupling_to_couple(coupling_scenario("z4-z2-kakutani")));
  auto rep = morita_invariance_check(sg, sh, kd, Ring::integers(), 1, 2);
  bool pattern = rep.whole_x.size() == 3 && rep.whole_x[0].format() == "Z" && rep.whole_x[1].format() == "0" &&
                 rep.whole_x[2].format() == "0";
  return {rep.ok && pattern && roundtrips >= 3, std::to_string(roundtrips) + " couplings, " +
                                                    std::to_string(mutations) + " mutations detected, Morita " +
                                                    (rep.ok ? "OK" : "MISMATCH")};
}

auto determinism() -> Outcome {
  auto configs = default_configs();
  configs.push_back(nlohmann::json::parse(R"({"experiment": "chain-suite", "seed": 99, "samples": 40})"));
  for (const auto &cfg : configs) {
    auto a = run_experiment(cfg).body.dump();
    auto b = run_experiment(cfg).body.dump();
    if (a != b) return {false, cfg.dump()};
  }
  return {true, std::to_string(configs.size()) + " configs re-run"};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "boundary squared is zero", 30, boundary_squared},
      {2, "chi naturality", 10, chi_naturality},
      {3, "induced-map laws", 0, induced_map_laws},
      {4, "homotopy identities", 0, homotopies},
      {5, "omega construction", 0, omega_construction},
      {6, "finite-group homology oracle", 60, finite_homology},
      {7, "coarse invariance of homology", 0, coarse_invariance},
      {8, "negative controls", 0, negative_controls},
      {9, "pull-push and span identities", 0, module_identities},
      {10, "dynamics round trips and Morita", 30, dynamics},
      {11, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      out.ok = false;
      out.detail += " (over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget)";
    }
    if (!out.ok) ++failed;
    std::printf("[%2d] %-34s %s  %.2fs  %s\n", c.id, c.name.c_str(), out.ok ? "PASS" : "FAIL", secs,
                out.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
