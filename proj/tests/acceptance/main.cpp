#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>

#include "criteria.hpp"

using namespace acceptance;

namespace {

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "connectivity answers match BFS", connectivityOracle},
    {2, "bipartiteness answers match 2-coloring", bipartitenessOracle},
    {3, "distance-2 component identity, exhaustive to 7 nodes", distance2Components},
    {4, "bipartite iff every base graph is", baseGraphBipartiteness},
    {5, "translated-operation constants", translationConstants},
    {6, "constant depth across sizes", constantDepth},
    {7, "work scaling slopes", workScaling},
    {8, "sub-structure soak and reduction work", substructureSoak},
    {9, "deterministic CSV output", deterministicCsv},
};

}  // namespace

// Usage: acceptance [criterion ids...]. Criterion 5 reads peaks recorded by 1 and 2.
int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.count(5)) wanted.insert({1, 2});
  int failed = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s  [%s] (%.1fs)\n", c.id, outcome.pass ? "PASS" : "FAIL", c.title,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}
