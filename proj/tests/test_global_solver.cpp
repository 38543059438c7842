#include <doctest.h>

#include "aivf/error.hpp"
#include "aivf/global_solver.hpp"
#include "aivf/tunstall.hpp"
#include "support/oracles.hpp"

using namespace aivf;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}

Rational r(long n, long d = 1) {
  Rational v(n, d);
  v.canonicalize();
  return v;
}

std::uint64_t catalan(std::size_t n) {
  std::uint64_t c = 1;
  for (std::size_t k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

void check_agreement(const SourceModel& src, std::size_t d) {
  SolverResult it = solve_iterative(src, d);
  SolverResult cp = solve_cutting_plane(src, d);
  SolverResult bf = brute_force_optimum(src, d);
  CHECK(it.certified);
  CHECK(cp.certified);
  CHECK(bf.certified);
  CHECK(it.parse_length == bf.parse_length);
  CHECK(cp.parse_length == bf.parse_length);
  CHECK(it.y_star == bf.y_star);
  CHECK(cp.y_star == bf.y_star);
  for (const SolverResult* s : {&it, &cp, &bf}) {
    CHECK(global_parse_length(s->chain, src) == s->parse_length);
    CHECK(s->parse_length == Rational(static_cast<unsigned long>(d)) - s->y_star);
    for (const auto& e : s->certificate) CHECK(e.g == s->y_star);
  }
}

}  // namespace

TEST_CASE("three-symbol example") {
  SourceModel src = oracle::three_symbol_source();
  SolverResult it = solve_iterative(src, 7);
  CHECK(it.parse_length == r(703, 334));
  CHECK(it.y_star == r(1635, 334));
  CHECK(it.x_star[0] == r(-62, 167));
  CHECK(it.chain.trees[0].canonical() == oracle::tree_from_shape(0, "(0(0(0(0())))1(0())2())", 3).canonical());
  CHECK(it.chain.trees[1].canonical() == oracle::tree_from_shape(1, "(1(0(0(0()))1()2())2(0()))", 3).canonical());
  CHECK(it.iterations == it.trace.size() - 1);
  check_agreement(src, 7);
  // Beats the Tunstall code of the same size.
  TunstallCode tun = build_tunstall(src, 2);
  REQUIRE(tun.dict_size() == 7);
  CHECK(tun.expected_length == r(49, 25));
  CHECK(it.parse_length > tun.expected_length);
}

TEST_CASE("uniform source") {
  SourceModel src = SourceModel::from_probs({r(1, 3), r(1, 3), r(1, 3)});
  for (std::size_t d = 2; d <= 6; ++d) {
    CAPTURE(d);
    check_agreement(src, d);
  }
  // D = 3: the complete ternary tree is optimal.
  CHECK(solve_iterative(src, 3).parse_length == 1);
}

TEST_CASE("bounding box") {
  BoundingBox b = bounding_box(oracle::three_symbol_source(), 7);
  CHECK(b.beta == r(1, 10000000));
  CHECK(b.n == 7);
  CHECK(b.c == 70000000);
  BoundingBox h = bounding_box(SourceModel::from_probs({r(1, 2), r(1, 4), r(1, 4)}), 2);
  CHECK(h.c == 32);
  BoundingBox half = bounding_box(SourceModel::from_probs({r(1, 2), r(1, 2)}), 2);
  CHECK(half.c == 8);
  CHECK(b.contains({r(70000000)}));
  CHECK_FALSE(b.contains({r(70000001)}));
  CHECK(b.contains({r(-70000000)}));
}

TEST_CASE("tree counts: recurrence, Catalan numbers and direct enumeration") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const std::size_t dmax = n <= 3 ? 7 : 5;
    auto counts = tree_counts(n, dmax);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (std::size_t d = 1; d <= dmax; ++d) {
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(d);
        CHECK(counts[k][d] == catalan(d - 1));
        if (n <= 4 && d <= 5) {
          auto direct = oracle::structural_trees(n, static_cast<int>(k), d);
          auto generated = enumerate_trees(SourceModel::from_probs(std::vector<Rational>(n, r(1, static_cast<long>(n)))),
                                           d, static_cast<int>(k));
          REQUIRE(direct.size() == generated.size());
          CHECK(direct.size() == counts[k][d]);
          for (std::size_t i = 0; i < direct.size(); ++i) CHECK(direct[i] == generated[i]);
        }
      }
    }
  }
  auto big = tree_counts(3, 80);
  CHECK(big[0][80] == UINT64_MAX);
}

TEST_CASE("random instances: solvers agree and optimum dominates every chain") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 2);
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    SourceModel src = oracle::dyadic_source(rng, n, 6);
    CAPTURE(trial);
    check_agreement(src, d);
    SolverResult it = solve_iterative(src, d);
    for (std::size_t i = 1; i < it.trace.size(); ++i) CHECK(it.trace[i].y <= it.trace[i - 1].y);
    CHECK(bounding_box(src, d).contains(it.x_star));
    // Every chain parses no longer on average.
    std::vector<std::vector<ParseTree>> per_type(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) per_type[k] = oracle::structural_trees(n, static_cast<int>(k), d);
    std::vector<std::size_t> idx(n - 1, 0);
    while (true) {
      Chain c;
      for (std::size_t k = 0; k + 1 < n; ++k) c.trees.push_back(per_type[k][idx[k]]);
      CHECK(global_parse_length(c, src) <= it.parse_length);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == per_type[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    // h never exceeds y* anywhere.
    for (int s = 0; s < 10; ++s) {
      CostVector x = oracle::random_costs(rng, n - 2, 5);
      CHECK(envelope_h(src, d, x, TypeSet::all(n)) <= it.y_star);
    }
  }
}

TEST_CASE("envelopes are lower envelopes of the state hyperplanes") {
  std::mt19937_64 rng(5);
  SourceModel src = SourceModel::from_probs({r(2, 5), r(3, 10), r(1, 5), r(1, 10)});
  const std::size_t d = 4;
  std::vector<std::vector<ParseTree>> per_type(3);
  for (int k = 0; k < 3; ++k) per_type[static_cast<std::size_t>(k)] = oracle::structural_trees(4, k, d);
  for (int trial = 0; trial < 10; ++trial) {
    CostVector a = oracle::random_costs(rng, 2, 6);
    CostVector b = oracle::random_costs(rng, 2, 6);
    CostVector mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
    auto ga = envelope_all(src, d, a, TypeSet::all(4));
    auto gb = envelope_all(src, d, b, TypeSet::all(4));
    auto gm = envelope_all(src, d, mid, TypeSet::all(4));
    for (int k = 0; k < 3; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      CHECK(gm[uk].value >= (ga[uk].value + gb[uk].value) / 2);
      Rational lowest = f_k(mcmc_state(per_type[uk][0], src, d), a);
      for (const auto& t : per_type[uk]) {
        const Rational v = f_k(mcmc_state(t, src, d), a);
        CHECK(ga[uk].value <= v);
        lowest = std::min(lowest, v);
      }
      CHECK(ga[uk].value == lowest);
      CHECK(f_k(mcmc_state(ga[uk].witness, src, d), a) == ga[uk].value);
      CHECK(envelope_g(src, d, k, a, TypeSet::all(4)).value == ga[uk].value);
    }
  }
}

TEST_CASE("certificate rejects points other than the optimum") {
  SourceModel src = oracle::three_symbol_source();
  SolverResult it = solve_iterative(src, 7);
  auto good = certify(src, 7, it.x_star, it.y_star);
  for (const auto& e : good) CHECK(e.equal);
  auto off = certify(src, 7, {it.x_star[0] + r(1, 10)}, it.y_star);
  bool all_equal = true;
  for (const auto& e : off) all_equal = all_equal && e.equal;
  CHECK_FALSE(all_equal);
  auto high = certify(src, 7, it.x_star, it.y_star + 1);
  for (const auto& e : high) CHECK_FALSE(e.equal);
}

TEST_CASE("brute force options") {
  SourceModel src = oracle::three_symbol_source();
  SolverOptions threaded;
  threaded.threads = 4;
  SolverResult a = brute_force_optimum(src, 6);
  SolverResult b = brute_force_optimum(src, 6, threaded);
  CHECK(a.parse_length == b.parse_length);
  CHECK(a.chain.key() == b.chain.key());
  CHECK(a.chains_enumerated == catalan(5) * catalan(5));
  SolverOptions tight;
  tight.max_trees_per_type = 10;
  CHECK(code_of([&] { brute_force_optimum(src, 6, tight); }) == Errc::TooLarge);
  SolverOptions few;
  few.max_chains = 100;
  CHECK(code_of([&] { brute_force_optimum(src, 6, few); }) == Errc::TooLarge);
}

TEST_CASE("binary alphabet reduces to Tunstall") {
  SourceModel src = SourceModel::from_probs({r(7, 10), r(3, 10)});
  for (std::size_t k = 1; k <= 5; ++k) {
    TunstallCode code = build_tunstall(src, k);
    SolverResult it = solve_iterative(src, code.dict_size());
    SolverResult cp = solve_cutting_plane(src, code.dict_size());
    CHECK(it.parse_length == code.expected_length);
    CHECK(cp.parse_length == code.expected_length);
  }
}

TEST_CASE("iteration cap") {
  SolverOptions one;
  one.iteration_cap = 1;
  CHECK(code_of([&] { solve_iterative(oracle::three_symbol_source(), 7, one); }) == Errc::IterationCap);
}
