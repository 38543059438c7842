// aivf: build, inspect and run AIVF / Tunstall variable-to-fixed codes.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aivf/codec.hpp"
#include "aivf/error.hpp"
#include "aivf/global_solver.hpp"
#include "aivf/local_dp.hpp"
#include "aivf/markov.hpp"
#include "aivf/tunstall.hpp"

using namespace aivf;
using nlohmann::json;

namespace {

struct Options {
  std::string probs;
  std::size_t dict_size = 0;
  std::string method = "aivf";
  std::string solver = "iterative";
  std::size_t expansions = 0;
  bool expansions_set = false;
  std::string code;
  std::string input;
  std::string output;
  bool json = false;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool verify = false;
  bool local_only = false;
  std::string x;
  bool bytes = false;
};

std::string show(const Rational& r) { return to_fraction_string(r) + " (" + to_decimal_string(r) + ")"; }

json jrat(const Rational& r) { return {{"exact", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}}; }

json jvec(const RationalVector& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(jrat(r));
  return a;
}

std::string show_vec(const RationalVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_fraction_string(v[i]);
  return s + ")";
}

std::string word_text(const std::vector<Symbol>& word, const SourceModel& src) {
  if (word.empty()) return "<empty>";
  std::string s;
  for (Symbol a : word) s += (s.empty() ? "" : " ") + src.name(a);
  return s;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void print_dictionary(std::ostream& os, const ParseTree& t, const SourceModel& src) {
  os << "  index  target  p_C                        word\n";
  for (const auto& e : occurrence_probs(t, src)) {
    os << "  " << std::setw(5) << e.index << "  " << std::setw(6) << e.target << "  " << std::left << std::setw(26)
       << show(e.occurrence_prob) << std::right << " " << word_text(e.word, src) << '\n';
  }
}

json dictionary_json(const ParseTree& t, const SourceModel& src) {
  json a = json::array();
  for (const auto& e : occurrence_probs(t, src)) {
    json w = json::array();
    for (Symbol s : e.word) w.push_back(src.name(s));
    a.push_back({{"index", e.index}, {"target", e.target}, {"prob", jrat(e.occurrence_prob)}, {"word", w}});
  }
  return a;
}

std::size_t require_dict_size(const Options& o) {
  if (o.dict_size < 2) throw CLI::ValidationError("--dict-size", "a dictionary size of at least 2 is required");
  return o.dict_size;
}

CostVector parse_x(const std::string& text, std::size_t len) {
  CostVector x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) x.push_back(parse_rational(item));
  }
  if (x.size() != len) {
    throw CLI::ValidationError("--x", "expected " + std::to_string(len) + " comma-separated values, got " +
                                          std::to_string(x.size()));
  }
  return x;
}

SolverResult run_solver(const SourceModel& src, std::size_t d, const std::string& name, unsigned threads) {
  SolverOptions so;
  so.threads = threads;
  if (name == "iterative") return solve_iterative(src, d, so);
  if (name == "cutting-plane") return solve_cutting_plane(src, d, so);
  return brute_force_optimum(src, d, so);
}

json solver_json(const SolverResult& r, const SourceModel& src, std::size_t d) {
  json trees = json::array();
  for (const auto& t : r.chain.trees) {
    trees.push_back({{"type", t.type()}, {"shape", t.canonical()}, {"expected_length", jrat(expected_parse_length(t, src))},
                     {"dictionary", dictionary_json(t, src)}});
  }
  json cert = json::array();
  for (const auto& c : r.certificate) cert.push_back({{"type", c.type}, {"g", jrat(c.g)}, {"equal", c.equal}});
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({{"chain", hex64(t.chain_hash)}, {"y", jrat(t.y)}});
  CodingRate rate = coding_rate(r.parse_length, d);
  return {{"solver", r.solver},       {"trees", trees},
          {"parse_length", jrat(r.parse_length)}, {"rate", rate.decimal},
          {"x_star", jvec(r.x_star)}, {"y_star", jrat(r.y_star)},
          {"iterations", r.iterations}, {"cuts", r.cuts},
          {"chains_enumerated", r.chains_enumerated}, {"certified", r.certified},
          {"certificate", cert},      {"trace", trace}};
}

void print_solver(std::ostream& os, const SolverResult& r, const SourceModel& src, std::size_t d) {
  os << "solver: " << r.solver << "\n";
  for (const auto& t : r.chain.trees) {
    os << "tree t" << t.type() << "  " << t.canonical() << "\n";
    os << "  E[L] = " << show(expected_parse_length(t, src)) << "\n";
    print_dictionary(os, t, src);
  }
  os << "E[L_AIVF] = " << show(r.parse_length) << "\n";
  os << "rate log2(D)/E[L] = " << coding_rate(r.parse_length, d).decimal << " bits/symbol\n";
  os << "x* = " << show_vec(r.x_star) << "\n";
  os << "y* = " << show(r.y_star) << "\n";
  os << "iterations: " << r.iterations;
  if (r.solver == "cutting-plane") os << "  cuts: " << r.cuts;
  if (r.solver == "brute") os << "  chains: " << r.chains_enumerated;
  os << "\ncertificate:";
  for (const auto& c : r.certificate) os << "  g_" << c.type << " = " << to_fraction_string(c.g) << (c.equal ? " [=]" : " [!=]");
  os << "\ntrace:\n";
  for (const auto& t : r.trace) os << "  " << hex64(t.chain_hash) << "  y = " << show(t.y) << "\n";
}

int cmd_build(const Options& o) {
  SourceModel src = load_source(o.probs);
  if (o.method == "tunstall") {
    const std::size_t k = o.expansions_set ? o.expansions : tunstall_expansions_for(src.size(), require_dict_size(o));
    TunstallCode code = build_tunstall(src, k);
    CodingRate rate = coding_rate(code.expected_length, code.dict_size());
    if (!o.output.empty()) save_code_system(CodeSystem(src, CodeKind::Tunstall, {code.tree}), o.output);
    if (o.json) {
      std::cout << json{{"method", "tunstall"}, {"dict_size", code.dict_size()}, {"expansions", k},
                        {"dictionary", dictionary_json(code.tree, src)}, {"expected_length", jrat(code.expected_length)},
                        {"rate", rate.decimal}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "Tunstall code, " << k << " expansions, D = " << code.dict_size() << "\n";
      print_dictionary(std::cout, code.tree, src);
      std::cout << "E[L_Tun] = " << show(code.expected_length) << "\n";
      std::cout << "rate log2(D)/E[L] = " << rate.decimal << " bits/symbol\n";
    }
    return 0;
  }

  const std::size_t d = require_dict_size(o);
  if (o.local_only) {
    CostVector x = o.x.empty() ? CostVector(src.size() - 2, Rational(0)) : parse_x(o.x, src.size() - 2);
    LocalOptimum lo = dp_optimize(src, d, x, TypeSet::all(src.size()));
    if (o.json) {
      json trees = json::array();
      for (std::size_t i = 0; i < lo.trees.size(); ++i) {
        trees.push_back({{"type", i}, {"opt", jrat(lo.value(i))}, {"shape", lo.tree(i).canonical()},
                         {"expected_length", jrat(expected_parse_length(lo.tree(i), src))},
                         {"dictionary", dictionary_json(lo.tree(i), src)}});
      }
      std::cout << json{{"method", "local"}, {"x", jvec(x)}, {"trees", trees}}.dump(2) << "\n";
    } else {
      std::cout << "local optimum at x = " << show_vec(x) << "\n" << format_tables(lo.tables);
      for (std::size_t i = 0; i < lo.trees.size(); ++i) {
        std::cout << "tree t" << i << "  " << lo.tree(i).canonical() << "\n  OPT = " << show(lo.value(i))
                  << "\n  E[L] = " << show(expected_parse_length(lo.tree(i), src)) << "\n";
        print_dictionary(std::cout, lo.tree(i), src);
      }
    }
    return 0;
  }

  SolverResult r = run_solver(src, d, o.solver, o.threads);
  if (!o.output.empty()) save_code_system(CodeSystem(src, CodeKind::Aivf, r.chain.trees), o.output);
  json report = solver_json(r, src, d);
  std::string verify_line;
  bool verify_ok = true;
  if (o.verify) {
    SolverOptions so;
    so.threads = o.threads;
    try {
      SolverResult b = brute_force_optimum(src, d, so);
      verify_ok = b.parse_length == r.parse_length;
      verify_line = std::string(verify_ok ? "PASS" : "FAIL") + " brute force E[L_AIVF] = " + to_fraction_string(b.parse_length);
      report["verify"] = {{"brute_force", jrat(b.parse_length)}, {"agree", verify_ok}};
    } catch (const Error& e) {
      if (e.code() != Errc::TooLarge) throw;
      verify_line = std::string("SKIP brute force: ") + e.what();
      report["verify"] = {{"skipped", e.what()}};
    }
  }
  if (o.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_solver(std::cout, r, src, d);
    if (o.verify) std::cout << verify_line << "\n";
  }
  return verify_ok ? 0 : 1;
}

int cmd_analyze(const Options& o) {
  CodeSystem cs = load_code_system(o.code);
  const SourceModel& src = cs.source();
  Chain chain{cs.trees()};
  if (cs.kind() == CodeKind::Tunstall) {
    const Rational el = expected_parse_length(cs.trees().front(), src);
    if (o.json) {
      std::cout << json{{"kind", "tunstall"}, {"expected_length", jrat(el)}}.dump(2) << "\n";
    } else {
      std::cout << "Tunstall code, D = " << cs.dict_size() << "\nE[L] = " << show(el) << "\n";
    }
    return 0;
  }
  RationalMatrix q = transition_matrix(chain, src);
  RationalVector pi = stationary(q);
  Rational el = global_parse_length(chain, src);
  IntersectionPoint p = multityped_intersection(chain, src, cs.dict_size());
  if (o.json) {
    json jq = json::array();
    for (const auto& row : q) jq.push_back(jvec(row));
    std::cout << json{{"kind", "aivf"}, {"Q", jq}, {"pi", jvec(pi)}, {"parse_length", jrat(el)},
                      {"intersection", {{"x", jvec(p.x)}, {"y", jrat(p.y)}}}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "Q =\n";
    for (const auto& row : q) {
      std::cout << " ";
      for (const auto& v : row) std::cout << "  " << show(v);
      std::cout << "\n";
    }
    std::cout << "pi =";
    for (const auto& v : pi) std::cout << "  " << show(v);
    std::cout << "\nE[L_AIVF] = " << show(el) << "\nintersection x = " << show_vec(p.x) << "  y = " << show(p.y) << "\n";
  }
  return 0;
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  return read_file_bytes(path);
}

void write_output(const std::string& path, std::span<const std::uint8_t> bytes) {
  if (path.empty() || path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return;
  }
  write_file_bytes(path, bytes);
}

int cmd_encode(const Options& o) {
  CodeSystem cs = load_code_system(o.code);
  std::vector<std::uint8_t> raw = read_input(o.input);
  std::vector<Symbol> symbols;
  if (o.bytes) {
    symbols = bytes_to_symbols(raw, cs.source());
  } else {
    std::istringstream in(std::string(raw.begin(), raw.end()));
    symbols = read_symbols(in, cs.source());
  }
  write_output(o.output, encode(cs, symbols));
  return 0;
}

int cmd_decode(const Options& o) {
  CodeSystem cs = load_code_system(o.code);
  std::vector<Symbol> symbols = decode(cs, read_input(o.input));
  if (o.bytes) {
    write_output(o.output, symbols_to_bytes(symbols, cs.source()));
  } else {
    std::ostringstream out;
    write_symbols(out, symbols, cs.source());
    const std::string s = out.str();
    write_output(o.output, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }
  return 0;
}

int cmd_rate(const Options& o) {
  CodeSystem cs = load_code_system(o.code);
  const Rational el = cs.kind() == CodeKind::Tunstall ? expected_parse_length(cs.trees().front(), cs.source())
                                                      : global_parse_length(Chain{cs.trees()}, cs.source());
  CodingRate rate = coding_rate(el, cs.dict_size());
  if (o.json) {
    std::cout << json{{"kind", std::string(to_string(cs.kind()))}, {"dict_size", cs.dict_size()},
                      {"expected_length", jrat(el)}, {"rate", rate.decimal}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "D = " << cs.dict_size() << "  E[L] = " << show(el) << "\nR = log2(" << cs.dict_size()
              << ")/E[L] = " << rate.decimal << " bits/symbol\n";
  }
  return 0;
}

int cmd_verify(const Options& o) {
  SourceModel src = load_source(o.probs);
  const std::size_t d = require_dict_size(o);
  const std::size_t m = src.size() - 1;
  SolverOptions so;
  so.threads = o.threads;
  json checks = json::array();
  bool ok = true;
  auto check = [&](const std::string& name, bool pass, const std::string& detail = "") {
    ok = ok && pass;
    checks.push_back({{"check", name}, {"status", pass ? "PASS" : "FAIL"}, {"detail", detail}});
    if (!o.json) std::cout << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail) << "\n";
  };
  auto skip = [&](const std::string& name, const std::string& why) {
    checks.push_back({{"check", name}, {"status", "SKIP"}, {"detail", why}});
    if (!o.json) std::cout << "SKIP " << name << "  " << why << "\n";
  };

  SolverResult it = solve_iterative(src, d, so);
  SolverResult cp = solve_cutting_plane(src, d, so);
  for (const SolverResult* r : {&it, &cp}) {
    auto cert = certify(src, d, r->x_star, r->y_star);
    bool all = std::all_of(cert.begin(), cert.end(), [](const CertificateEntry& c) { return c.equal; });
    check(r->solver + " certificate g_k(x*) = y*", all && r->certified, "y* = " + to_fraction_string(r->y_star));
    check(r->solver + " E[L_AIVF] matches chain", global_parse_length(r->chain, src) == r->parse_length &&
                                                      r->parse_length + r->y_star == Rational(static_cast<unsigned long>(d)));
    check(r->solver + " x* inside bounding box", bounding_box(src, d).contains(r->x_star));
    RationalMatrix q = transition_matrix(r->chain, src);
    RationalVector pi = stationary(q);
    bool fixed = true;
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += pi[i] * q[i][j];
      fixed = fixed && s == pi[j];
    }
    check(r->solver + " stationary pi Q = pi", fixed);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < it.trace.size(); ++i) monotone = monotone && it.trace[i].y <= it.trace[i - 1].y;
  check("iterative trace non-increasing", monotone, std::to_string(it.trace.size()) + " steps");
  check("solvers agree", it.y_star == cp.y_star, to_fraction_string(it.parse_length) + " vs " + to_fraction_string(cp.parse_length));

  try {
    SolverResult bf = brute_force_optimum(src, d, so);
    check("brute force agrees", bf.parse_length == it.parse_length,
          to_fraction_string(bf.parse_length) + " over " + std::to_string(bf.chains_enumerated) + " chains");
  } catch (const Error& e) {
    if (e.code() != Errc::TooLarge) throw;
    skip("brute force agrees", e.what());
  }

  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> num(-40, 40);
  try {
    std::vector<std::vector<ParseTree>> all(m);
    for (std::size_t k = 0; k < m; ++k) all[k] = enumerate_trees(src, d, static_cast<int>(k));
    bool match = true;
    for (int trial = 0; trial < 10; ++trial) {
      CostVector x(m - 1);
      for (auto& v : x) v = Rational(num(rng), 4);
      LocalOptimum lo = dp_optimize(src, d, x, TypeSet::all(src.size()));
      for (std::size_t k = 0; k < m; ++k) {
        Rational best = tree_cost(all[k].front(), src, x);
        for (const auto& t : all[k]) best = std::max(best, tree_cost(t, src, x));
        match = match && best == lo.value(k) && tree_cost(lo.tree(k), src, x) == best;
      }
    }
    check("local DP matches enumeration", match, "10 random weight vectors");
  } catch (const Error& e) {
    if (e.code() != Errc::TooLarge) throw;
    skip("local DP matches enumeration", e.what());
  }

  CodeSystem cs(src, CodeKind::Aivf, it.chain.trees);
  std::uniform_int_distribution<int> sym(0, static_cast<int>(src.size()) - 1);
  bool roundtrip = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Symbol> s(static_cast<std::size_t>(trial * 7));
    for (auto& v : s) v = sym(rng);
    roundtrip = roundtrip && decode(cs, encode(cs, s)) == s;
  }
  check("codec roundtrip", roundtrip, "50 random sequences");

  if (o.json) std::cout << json{{"checks", checks}, {"ok", ok}}.dump(2) << "\n";
  return ok ? 0 : 1;
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::SingularSystem:
    case Errc::CycleDetected:
    case Errc::IterationCap:
    case Errc::LpUnbounded:
    case Errc::LpInfeasible:
    case Errc::CertificateMismatch:
    case Errc::Infeasible:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-to-fixed source codes with multiple parse trees (AIVF) and Tunstall baselines"};
  app.require_subcommand(1);
  Options o;

  auto add_probs = [&](CLI::App* c) {
    c->add_option("--probs", o.probs, "Source file: one '<symbol> <probability>' per line")->required()->check(CLI::ExistingFile);
  };
  auto add_code = [&](CLI::App* c) {
    c->add_option("--code", o.code, "Code-system JSON file")->required()->check(CLI::ExistingFile);
  };

  auto* build = app.add_subcommand("build", "Construct a code and print its report");
  add_probs(build);
  build->add_option("--dict-size", o.dict_size, "Dictionary size D");
  build->add_option("--method", o.method, "tunstall or aivf")->check(CLI::IsMember({"tunstall", "aivf"}));
  build->add_option("--solver", o.solver, "iterative, cutting-plane or brute")
      ->check(CLI::IsMember({"iterative", "cutting-plane", "brute"}));
  build->add_option("--expansions", o.expansions, "Tunstall expansion count (instead of --dict-size)")
      ->each([&](const std::string&) { o.expansions_set = true; });
  build->add_option("--output", o.output, "Write the code-system file here");
  build->add_flag("--verify", o.verify, "Compare against brute force when it is small enough");
  build->add_flag("--local-only", o.local_only, "Only run the per-type DP at a fixed weight vector");
  build->add_option("--x", o.x, "Weights x_1,...,x_{|S|-2} for --local-only (n/d or decimals)");
  build->add_option("--threads", o.threads, "Worker threads for brute force");

  auto* analyze = app.add_subcommand("analyze", "Transition matrix, stationary distribution and intersection point");
  add_code(analyze);

  auto* enc = app.add_subcommand("encode", "Encode a symbol stream");
  auto* dec = app.add_subcommand("decode", "Decode a bitstream");
  for (auto* c : {enc, dec}) {
    add_code(c);
    c->add_option("--input", o.input, "Input file (default stdin)");
    c->add_option("--output", o.output, "Output file (default stdout)");
    c->add_flag("--bytes", o.bytes, "Raw bytes; symbol names are decimal byte values");
  }

  auto* rate = app.add_subcommand("rate", "Coding rate log2(D)/E[L] of a code file");
  add_code(rate);

  auto* verify = app.add_subcommand("verify", "Cross-check the solvers, the DP and the codec");
  add_probs(verify);
  verify->add_option("--dict-size", o.dict_size, "Dictionary size D")->required();
  verify->add_option("--threads", o.threads, "Worker threads for brute force");
  verify->add_option("--seed", o.seed, "Seed for the randomized checks");

  for (auto* c : {build, analyze, rate, verify}) c->add_flag("--json", o.json, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_build(o);
    if (*analyze) return cmd_analyze(o);
    if (*enc) return cmd_encode(o);
    if (*dec) return cmd_decode(o);
    if (*rate) return cmd_rate(o);
    if (*verify) return cmd_verify(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
