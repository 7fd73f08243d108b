// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <string>
#include <vector>

#include "pklab/suites.hpp"

namespace {

struct Criterion {
  int id;
  const char* name;
  std::vector<std::string> prefixes;  // check names belonging to this criterion
};

const std::vector<Criterion> kCriteria = {
    {1, "KNS chart bijectivity", {"kns."}},
    {2, "Siegel domain membership", {"bsd."}},
    {3, "flat Higgs bundle structure", {"higgs."}},
    {4, "Burns curvature bounds", {"burns."}},
    {5, "explicit curvature formula", {"curvature."}},
    {6, "trace inequality and equality case", {"trace."}},
    {7, "elliptic family", {"elliptic."}},
    {8, "Poisson-Kahler equivalence", {"pk.equivalence", "pk.expected", "pk.both-directions"}},
    {9, "Hermitian and convex geodesics", {"geodesics."}},
    {10, "Brunn-Minkowski convexity", {"bm.", "mabuchi."}},
    {11, "projective bundles", {"proj."}},
};

bool belongs(const pklab::CheckRecord& c, const Criterion& k) {
  for (const auto& p : k.prefixes)
    if (c.name.starts_with(p)) return true;
  return false;
}

}  // namespace

int main() {
  pklab::SuiteConfig config;
  config.suite = "all";
  int failed = 0;
  auto line = [&](bool ok, int id, const std::string& name, const std::string& detail) {
    std::printf("%s %d %s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    failed += !ok;
  };
  try {
    const auto report = pklab::run_suite(config);
    for (const auto& k : kCriteria) {
      int total = 0;
      std::string detail;
      bool ok = true;
      for (const auto& c : report.checks) {
        if (!belongs(c, k)) continue;
        ++total;
        if (c.status != pklab::Status::pass) {
          ok = false;
          detail += "\n    " + c.name + " = " + std::to_string(c.value);
        }
      }
      if (total == 0) {
        ok = false;
        detail = " (no checks ran)";
      }
      line(ok, k.id, k.name, " [" + std::to_string(total) + " checks]" + detail);
    }

    const auto again = pklab::run_suite(config);
    const bool same = pklab::emit_json(report) == pklab::emit_json(again) && pklab::emit_csv(report) == pklab::emit_csv(again);
    line(same, 12, "deterministic reports", "");
  } catch (const std::exception& e) {
    std::printf("FAIL error: %s\n", e.what());
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
