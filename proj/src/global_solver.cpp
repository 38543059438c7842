#include "aivf/global_solver.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <utility>

#include "aivf/error.hpp"
#include "aivf/lp.hpp"

namespace aivf {

std::vector<EnvelopeValue> envelope_all(const SourceModel& src, std::size_t dict_size, const CostVector& x_in,
                                        const TypeSet& allowed) {
  const CostVector x = canonical_costs(x_in);
  CostVector neg(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) neg[j] = -x[j];
  LocalOptimum lo = dp_optimize(src, dict_size, neg, allowed);
  const Rational d(static_cast<unsigned long>(dict_size));
  std::vector<EnvelopeValue> out;
  for (std::size_t k = 0; k + 1 < src.size(); ++k) {
    Rational value = d - cost_weight(x, k) - lo.value(k);
    out.push_back({std::move(value), lo.tree(k)});
  }
  return out;
}

EnvelopeValue envelope_g(const SourceModel& src, std::size_t dict_size, int k, const CostVector& x_in,
                         const TypeSet& allowed) {
  const CostVector x = canonical_costs(x_in);
  if (k < 0 || static_cast<std::size_t>(k) + 1 >= src.size()) {
    throw Error(Errc::IndexOutOfRange, "no type " + std::to_string(k));
  }
  CostVector neg(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) neg[j] = -x[j];
  LocalOptimum lo = dp_optimize(src, dict_size, neg, allowed);
  const auto kk = static_cast<std::size_t>(k);
  return {Rational(static_cast<unsigned long>(dict_size)) - cost_weight(x, kk) - lo.value(kk), lo.tree(kk)};
}

Rational envelope_h(const SourceModel& src, std::size_t dict_size, const CostVector& x, const TypeSet& allowed) {
  auto env = envelope_all(src, dict_size, x, allowed);
  Rational h = env.front().value;
  for (const auto& e : env) h = std::min(h, e.value);
  return h;
}

bool BoundingBox::contains(const CostVector& x) const {
  return std::all_of(x.begin(), x.end(), [this](const Rational& v) { return v >= -c && v <= c; });
}

BoundingBox bounding_box(const SourceModel& src, std::size_t dict_size) {
  BoundingBox box;
  box.beta = 1;
  for (std::size_t i = 0; i < dict_size; ++i) box.beta *= src.min_prob();
  box.n = static_cast<unsigned long>(dict_size);
  box.c = box.n / box.beta;
  return box;
}

std::vector<CertificateEntry> certify(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                                      const Rational& y) {
  std::vector<CertificateEntry> out;
  auto env = envelope_all(src, dict_size, x, TypeSet::all(src.size()));
  for (std::size_t k = 0; k < env.size(); ++k) out.push_back({static_cast<int>(k), env[k].value, env[k].value == y});
  return out;
}

namespace {

bool all_equal(const std::vector<CertificateEntry>& cert) {
  return std::all_of(cert.begin(), cert.end(), [](const CertificateEntry& e) { return e.equal; });
}

std::vector<CertificateEntry> to_certificate(const std::vector<EnvelopeValue>& env, const Rational& y) {
  std::vector<CertificateEntry> out;
  for (std::size_t k = 0; k < env.size(); ++k) out.push_back({static_cast<int>(k), env[k].value, env[k].value == y});
  return out;
}

std::size_t default_cap(const SourceModel& src, std::size_t dict_size, std::size_t factor) {
  return factor * (src.size() - 1) * dict_size;
}

void check_dict_size(std::size_t dict_size) {
  if (dict_size < 2) throw Error(Errc::TooSmall, "dictionary size must be at least 2");
}

// Runs the fixed-point loop starting from `x`. Trace entries and iteration
// counts are appended to `result`.
void fixed_point(const SourceModel& src, std::size_t dict_size, CostVector x, std::size_t cap,
                 SolverResult& result) {
  const TypeSet all = TypeSet::all(src.size());
  std::vector<EnvelopeValue> env = envelope_all(src, dict_size, x, all);
  std::optional<Chain> prev;
  std::set<std::uint64_t> seen;
  for (std::size_t step = 0;; ++step) {
    Chain chain;
    for (std::size_t k = 0; k < env.size(); ++k) {
      if (prev && f_k(mcmc_state(prev->trees[k], src, dict_size), x) == env[k].value) {
        chain.trees.push_back(prev->trees[k]);
      } else {
        chain.trees.push_back(env[k].witness);
      }
    }
    const std::uint64_t h = chain.hash();
    if (!seen.insert(h).second) {
      throw Error(Errc::CycleDetected, "chain " + std::to_string(h) + " revisited after " +
                                           std::to_string(result.trace.size()) + " steps");
    }
    IntersectionPoint p = multityped_intersection(chain, src, dict_size);
    result.trace.push_back({h, p.y});
    env = envelope_all(src, dict_size, p.x, all);
    result.certificate = to_certificate(env, p.y);
    if (all_equal(result.certificate)) {
      result.chain = std::move(chain);
      result.x_star = std::move(p.x);
      result.y_star = std::move(p.y);
      result.parse_length = Rational(static_cast<unsigned long>(dict_size)) - result.y_star;
      result.certified = true;
      return;
    }
    if (++result.iterations > cap) {
      throw Error(Errc::IterationCap, "no certificate after " + std::to_string(cap) + " iterations");
    }
    x = std::move(p.x);
    prev = std::move(chain);
  }
}

}  // namespace

SolverResult solve_iterative(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts) {
  check_dict_size(dict_size);
  SolverResult result;
  result.solver = "iterative";
  const std::size_t cap = opts.iteration_cap ? opts.iteration_cap : default_cap(src, dict_size, 10);
  fixed_point(src, dict_size, CostVector(src.size() - 2, Rational(0)), cap, result);
  return result;
}

SolverResult solve_cutting_plane(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts) {
  check_dict_size(dict_size);
  const std::size_t m = src.size() - 1;
  const std::size_t cap = opts.iteration_cap ? opts.iteration_cap : default_cap(src, dict_size, 50);
  const BoundingBox box = bounding_box(src, dict_size);
  const TypeSet all = TypeSet::all(src.size());

  // LP variables: u_j = x_j + C in [0, 2C] for j = 1..m-1, then y >= 0.
  RationalMatrix a;
  RationalVector b;
  RationalVector objective(m, Rational(0));
  objective[m - 1] = 1;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    RationalVector row(m, Rational(0));
    row[j] = 1;
    a.push_back(std::move(row));
    b.push_back(2 * box.c);
  }
  std::set<std::pair<int, std::string>> known;
  auto add_cut = [&](const ParseTree& t) {
    if (!known.emplace(t.type(), t.canonical()).second) return false;
    Hyperplane h = mcmc_state(t, src, dict_size);
    // y - sum q_j x_j + [k>0] x_k <= L, rewritten in u.
    RationalVector row(m, Rational(0));
    Rational rhs = h.cost;
    for (std::size_t j = 1; j < m; ++j) {
      row[j - 1] -= h.q[j];
      rhs -= h.q[j] * box.c;
    }
    if (h.type > 0) {
      row[static_cast<std::size_t>(h.type) - 1] += 1;
      rhs += box.c;
    }
    row[m - 1] = 1;
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
    return true;
  };

  SolverResult result;
  result.solver = "cutting-plane";
  for (const auto& e : envelope_all(src, dict_size, CostVector(m - 1, Rational(0)), all)) add_cut(e.witness);

  for (;;) {
    LpSolution lp = lp_maximize(a, b, objective);
    CostVector x(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) x[j] = lp.z[j] - box.c;
    const Rational& y = lp.z[m - 1];
    std::vector<EnvelopeValue> env = envelope_all(src, dict_size, x, all);
    Chain witnesses;
    for (const auto& e : env) witnesses.trees.push_back(e.witness);
    result.trace.push_back({witnesses.hash(), y});

    bool violated = false;
    for (const auto& e : env) {
      if (e.value < y) violated = add_cut(e.witness) || violated;
    }
    if (!violated) {
      result.cuts = a.size() - (m - 1);
      result.certificate = to_certificate(env, y);
      if (all_equal(result.certificate)) {
        result.chain = std::move(witnesses);
        result.x_star = std::move(x);
        result.y_star = y;
        result.parse_length = Rational(static_cast<unsigned long>(dict_size)) - result.y_star;
        result.certified = true;
        return result;
      }
      // y = max h, but the face is flat here so some g_k sit strictly above
      // it; settle on a vertex with the fixed-point loop, which must not move y.
      SolverResult polish;
      fixed_point(src, dict_size, x, default_cap(src, dict_size, 10), polish);
      if (polish.y_star != y) {
        throw Error(Errc::CertificateMismatch, "relaxation height " + to_fraction_string(y) +
                                                   " but the refined chain reaches " +
                                                   to_fraction_string(polish.y_star));
      }
      result.chain = std::move(polish.chain);
      result.x_star = std::move(polish.x_star);
      result.y_star = std::move(polish.y_star);
      result.parse_length = std::move(polish.parse_length);
      result.certificate = std::move(polish.certificate);
      result.certified = true;
      for (auto& t : polish.trace) result.trace.push_back(t);
      return result;
    }
    if (++result.iterations > cap) {
      throw Error(Errc::IterationCap, "cutting planes did not close after " + std::to_string(cap) + " rounds");
    }
  }
}

std::vector<std::vector<std::uint64_t>> tree_counts(std::size_t alphabet_size, std::size_t dict_size) {
  const std::size_t m = alphabet_size - 1;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::vector<std::uint64_t>> cnt(m, std::vector<std::uint64_t>(dict_size + 1, 0));
  for (std::size_t i = 0; i < m && dict_size >= 1; ++i) cnt[i][1] = 1;
  for (std::size_t d = 2; d <= dict_size; ++d) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t right = i + 1 < m ? i + 1 : 0;
      std::uint64_t total = 0;
      for (std::size_t l = 1; l < d; ++l) {
        const std::uint64_t x = cnt[0][l], y = cnt[right][d - l];
        std::uint64_t prod = 0;
        if (x != 0 && y > kMax / x) {
          prod = kMax;
        } else {
          prod = x * y;
        }
        total = prod > kMax - total ? kMax : total + prod;
      }
      cnt[i][d] = total;
    }
  }
  return cnt;
}

namespace {

class TreeGenerator {
 public:
  explicit TreeGenerator(const SourceModel& src) : src_(src), m_(src.size() - 1) {}

  const std::vector<ParseTree>& get(std::size_t type, std::size_t d) {
    auto key = std::make_pair(type, d);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<ParseTree> out;
    if (d == 1) {
      out.push_back(ParseTree::root_only(static_cast<int>(type), src_.size()));
    } else {
      const bool last = type + 1 == m_;
      for (std::size_t l = 1; l < d; ++l) {
        // Copy: get() may rehash memo_ while the right side is generated.
        const std::vector<ParseTree> left = get(0, l);
        const std::vector<ParseTree>& right = get(last ? 0 : type + 1, d - l);
        for (const auto& lt : left) {
          for (const auto& rt : right) {
            out.push_back(last ? tie_last(lt, rt) : tie(static_cast<int>(type), lt, rt));
          }
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const SourceModel& src_;
  std::size_t m_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ParseTree>> memo_;
};

}  // namespace

std::vector<ParseTree> enumerate_trees(const SourceModel& src, std::size_t dict_size, int type,
                                       const std::optional<TypeSet>& allowed, std::uint64_t limit) {
  const std::size_t m = src.size() - 1;
  if (type < 0 || static_cast<std::size_t>(type) >= m) throw Error(Errc::IndexOutOfRange, "no type " + std::to_string(type));
  if (dict_size < 1) throw Error(Errc::TooSmall, "dictionary size must be positive");
  auto counts = tree_counts(src.size(), dict_size);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t d = 1; d <= dict_size; ++d) {
      if (counts[k][d] > limit) {
        throw Error(Errc::TooLarge, std::to_string(counts[k][d]) + " type-" + std::to_string(k) + " trees with " +
                                        std::to_string(d) + " codewords exceed the limit of " + std::to_string(limit));
      }
    }
  }
  TreeGenerator gen(src);
  std::vector<ParseTree> out;
  for (const auto& t : gen.get(static_cast<std::size_t>(type), dict_size)) {
    if (allowed && !std::all_of(t.dictionary().begin(), t.dictionary().end(),
                                [&](const DictEntry& e) { return allowed->contains(e.target); })) {
      continue;
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(),
            [](const ParseTree& a, const ParseTree& b) { return a.canonical() < b.canonical(); });
  return out;
}

namespace {

struct Candidate {
  Rational best;
  std::vector<std::uint64_t> indices;
  bool any = false;
};

// Mixed-radix digits with type 0 most significant.
std::vector<std::size_t> digits_of(std::uint64_t index, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> digits(radix.size());
  for (std::size_t k = radix.size(); k-- > 0;) {
    digits[k] = static_cast<std::size_t>(index % radix[k]);
    index /= radix[k];
  }
  return digits;
}

}  // namespace

SolverResult brute_force_optimum(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts) {
  check_dict_size(dict_size);
  const std::size_t m = src.size() - 1;
  std::vector<std::vector<ParseTree>> trees(m);
  std::vector<std::vector<TreeStats>> stats(m);
  std::vector<std::size_t> radix(m);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < m; ++k) {
    trees[k] = enumerate_trees(src, dict_size, static_cast<int>(k), std::nullopt, opts.max_trees_per_type);
    for (const auto& t : trees[k]) stats[k].push_back(tree_stats(t, src));
    radix[k] = trees[k].size();
    if (opts.max_chains && total > opts.max_chains / radix[k]) {
      throw Error(Errc::TooLarge, "chain count exceeds the limit of " + std::to_string(opts.max_chains));
    }
    total *= radix[k];
  }

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    Candidate c;
    RationalMatrix q(m);
    for (std::uint64_t index = begin; index < end; ++index) {
      auto digits = digits_of(index, radix);
      for (std::size_t k = 0; k < m; ++k) q[k] = stats[k][digits[k]].q;
      RationalVector pi = stationary(q);
      Rational value = 0;
      for (std::size_t k = 0; k < m; ++k) value += pi[k] * stats[k][digits[k]].expected_length;
      if (!c.any || value > c.best) {
        c.best = std::move(value);
        c.indices.assign(1, index);
        c.any = true;
      } else if (value == c.best) {
        c.indices.push_back(index);
      }
    }
    return c;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  std::vector<Candidate> parts(workers);
  if (workers == 1) {
    parts[0] = scan(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t block = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::min<std::uint64_t>(total, w * block);
      const std::uint64_t hi = std::min<std::uint64_t>(total, lo + block);
      pool.emplace_back([&, w, lo, hi] { parts[w] = scan(lo, hi); });
    }
    for (auto& th : pool) th.join();
  }
  Candidate best;
  for (auto& p : parts) {
    if (!p.any) continue;
    if (!best.any || p.best > best.best) {
      best = std::move(p);
    } else if (p.best == best.best) {
      best.indices.insert(best.indices.end(), p.indices.begin(), p.indices.end());
    }
  }
  std::sort(best.indices.begin(), best.indices.end());

  std::vector<std::vector<Hyperplane>> planes(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (const auto& t : trees[k]) planes[k].push_back(mcmc_state(t, src, dict_size));
  }
  for (std::uint64_t index : best.indices) {
    auto digits = digits_of(index, radix);
    Chain chain;
    for (std::size_t k = 0; k < m; ++k) chain.trees.push_back(trees[k][digits[k]]);
    IntersectionPoint p = multityped_intersection(chain, src, dict_size);
    std::vector<CertificateEntry> cert;
    for (std::size_t k = 0; k < m; ++k) {
      Rational g = f_k(planes[k].front(), p.x);
      for (const auto& h : planes[k]) g = std::min(g, f_k(h, p.x));
      cert.push_back({static_cast<int>(k), g, g == p.y});
    }
    if (!all_equal(cert)) continue;
    SolverResult result;
    result.solver = "brute";
    result.chain = std::move(chain);
    result.x_star = std::move(p.x);
    result.y_star = std::move(p.y);
    result.parse_length = best.best;
    result.certificate = std::move(cert);
    result.certified = true;
    result.chains_enumerated = total;
    result.trace.push_back({result.chain.hash(), result.y_star});
    return result;
  }
  throw Error(Errc::CertificateMismatch, "no optimal chain passes the enumeration certificate");
}

}  // namespace aivf
