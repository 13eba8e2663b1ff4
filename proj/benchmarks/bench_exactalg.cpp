#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "dofib/gcd.hpp"
#include "dofib/parse.hpp"
#include "dofib/poly.hpp"

using namespace dofib;

namespace {

// Dense random polynomial of the given total degree, coefficients in [-bound, bound].
Poly random_poly(const RingPtr& ring, unsigned degree, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-bound, bound);
  std::string s = "0";
  for (unsigned i = 0; i <= degree; ++i)
    for (unsigned j = 0; i + j <= degree; ++j)
      for (unsigned k = 0; i + j + k <= degree; ++k) {
        s += " + " + std::to_string(coeff(rng)) + "*x^" + std::to_string(i) + "*y^" + std::to_string(j) + "*z^" +
             std::to_string(k);
      }
  return parse_poly(s, ring);
}

void BM_PolyMultiply(benchmark::State& state) {
  auto ring = make_ring({"x", "y", "z"});
  std::mt19937_64 rng(1);
  const auto d = static_cast<unsigned>(state.range(0));
  Poly a = random_poly(ring, d, 100, rng), b = random_poly(ring, d, 100, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PolyMultiply)->Arg(4)->Arg(8)->Arg(12);

// gcd with a planted common factor; large coefficients force several primes.
void BM_GcdPlanted(benchmark::State& state) {
  auto ring = make_ring({"x", "y", "z"});
  std::mt19937_64 rng(2);
  const auto d = static_cast<unsigned>(state.range(0));
  const int bound = static_cast<int>(state.range(1));
  Poly g = random_poly(ring, d, bound, rng);
  Poly a = g * random_poly(ring, d, bound, rng), b = g * random_poly(ring, d, bound, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gcd(a, b));
}
BENCHMARK(BM_GcdPlanted)->Args({2, 10})->Args({3, 10})->Args({3, 1000000})->Unit(benchmark::kMillisecond);

void BM_Resultant(benchmark::State& state) {
  auto ring = make_ring({"x", "y", "z"});
  std::mt19937_64 rng(3);
  Poly a = random_poly(ring, 3, 20, rng), b = random_poly(ring, 3, 20, rng);
  for (auto _ : state) benchmark::DoNotOptimize(resultant(a, b, 0));
}
BENCHMARK(BM_Resultant)->Unit(benchmark::kMillisecond);

}  // namespace
