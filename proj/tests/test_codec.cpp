#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "aivf/codec.hpp"
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

CodeSystem example_code() {
  return CodeSystem(oracle::three_symbol_source(), CodeKind::Aivf,
                    {oracle::tree_from_shape(0, "(0(0(0(0())))1(0())2())", 3),
                     oracle::tree_from_shape(1, "(1(0(0(0()))1()2())2(0()))", 3)});
}

const TreeNode* child(const TreeNode& n, Symbol s) {
  for (const auto& c : n.children) {
    if (c.label == s) return &c.node;
  }
  return nullptr;
}

// Reference parser: follow edges while possible and emit the deepest codeword
// seen. If input runs out first, add a_0 until a codeword node is reached.
std::vector<ParseStep> reference_parse(const CodeSystem& cs, const std::vector<Symbol>& in) {
  std::vector<ParseStep> out;
  int type = 0;
  std::size_t pos = 0;
  while (pos < in.size()) {
    const ParseTree& t = cs.tree(type);
    const TreeNode* node = &t.root();
    const TreeNode* best = node->codeword ? node : nullptr;
    std::size_t best_len = 0, depth = 0;
    bool padded = false;
    while (true) {
      if (pos + depth == in.size()) padded = true;
      if (padded && node->codeword) {
        best = node;
        best_len = depth;
        break;
      }
      const TreeNode* next = child(*node, padded ? 0 : in[pos + depth]);
      if (!next) break;
      node = next;
      ++depth;
      if (node->codeword) {
        best = node;
        best_len = depth;
      }
    }
    REQUIRE(best != nullptr);
    out.push_back({cs.kind() == CodeKind::Tunstall ? 0 : type, *best->codeword, best_len});
    pos += best_len;
    if (cs.kind() == CodeKind::Aivf) type = best->target;
  }
  return out;
}

std::vector<Symbol> random_symbols(std::mt19937_64& rng, const SourceModel& src, std::size_t n) {
  std::vector<double> w;
  for (const auto& p : src.probs()) w.push_back(p.get_d());
  std::discrete_distribution<int> pick(w.begin(), w.end());
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(rng));
  return out;
}

}  // namespace

TEST_CASE("worked sequence") {
  CodeSystem cs = example_code();
  CHECK(cs.width() == 3);
  const std::vector<Symbol> input{1, 0, 0, 0, 1, 0, 0, 2, 0, 2};
  std::vector<ParseStep> steps;
  auto bytes = encode(cs, input, &steps);
  REQUIRE(steps.size() == 5);
  const int trees[] = {0, 0, 1, 1, 0};
  const int idx[] = {6, 2, 2, 7, 7};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(steps[i].tree == trees[i]);
    CHECK(steps[i].index == idx[i]);
  }
  const std::vector<std::uint8_t> expected{'A', 'I', 'V', 'F', 1, 1, 0, 3, 0, 0, 0, 7,
                                           0,   0,   0,   0,   0, 0, 0, 10, 0xA4, 0xEC};
  CHECK(bytes == expected);
  std::vector<ParseStep> dsteps;
  CHECK(decode(cs, bytes, &dsteps) == input);
  REQUIRE(dsteps.size() == steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(dsteps[i].tree == steps[i].tree);
    CHECK(dsteps[i].index == steps[i].index);
    CHECK(dsteps[i].length == steps[i].length);
  }
  StreamHeader h = read_header(bytes);
  CHECK(h.kind == CodeKind::Aivf);
  CHECK(h.alphabet_size == 3);
  CHECK(h.dict_size == 7);
  CHECK(h.symbol_count == 10);
}

TEST_CASE("empty input and end-of-input padding") {
  CodeSystem cs = example_code();
  auto bytes = encode(cs, std::vector<Symbol>{});
  CHECK(bytes.size() == kHeaderBytes);
  CHECK(decode(cs, bytes).empty());
  for (std::vector<Symbol> in : {std::vector<Symbol>{0}, {0, 0}, {1}, {1, 0, 0}, {2}}) {
    auto enc = encode(cs, in);
    CHECK(decode(cs, enc) == in);
  }
}

TEST_CASE("parser matches a reference parser and round-trips") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
    const std::size_t d = n + 1 + static_cast<std::size_t>(trial % 5);
    SourceModel src = oracle::dyadic_source(rng, n, 6);
    SolverResult opt = solve_iterative(src, d);
    CodeSystem aivf_code(src, CodeKind::Aivf, opt.chain.trees);
    TunstallCode tun = build_tunstall(src, 1 + static_cast<std::size_t>(trial % 3));
    CodeSystem tun_code(src, CodeKind::Tunstall, {tun.tree});
    for (const CodeSystem* cs : {&aivf_code, &tun_code}) {
      for (std::size_t len : {1u, 7u, 200u}) {
        auto in = random_symbols(rng, src, len);
        std::vector<ParseStep> steps;
        auto bytes = encode(*cs, in, &steps);
        auto ref = reference_parse(*cs, in);
        REQUIRE(steps.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
          CHECK(steps[i].tree == ref[i].tree);
          CHECK(steps[i].index == ref[i].index);
          CHECK(steps[i].length == ref[i].length);
        }
        CHECK(bytes.size() == kHeaderBytes + (steps.size() * cs->width() + 7) / 8);
        CHECK(decode(*cs, bytes) == in);
      }
    }
  }
}

TEST_CASE("malformed streams") {
  CodeSystem cs = example_code();
  const std::vector<Symbol> input{1, 0, 0, 0, 1, 0, 0, 2, 0, 2};
  auto good = encode(cs, input);

  auto corrupt = good;
  corrupt[kHeaderBytes] = 0xE0;  // first index 7 + 1 = 8 > D
  CHECK(code_of([&] { decode(cs, corrupt); }) == Errc::IndexOutOfRange);

  auto truncated = good;
  truncated.pop_back();
  CHECK(code_of([&] { decode(cs, truncated); }) == Errc::TruncatedStream);
  CHECK(code_of([&] { decode(cs, std::span(good).first(10)); }) == Errc::TruncatedStream);

  auto magic = good;
  magic[0] = 'X';
  CHECK(code_of([&] { decode(cs, magic); }) == Errc::HeaderMismatch);
  auto dict = good;
  dict[11] = 9;
  CHECK(code_of([&] { decode(cs, dict); }) == Errc::HeaderMismatch);
  auto kind = good;
  kind[5] = 0;
  CHECK(code_of([&] { decode(cs, kind); }) == Errc::HeaderMismatch);
  auto version = good;
  version[4] = 2;
  CHECK(code_of([&] { decode(cs, version); }) == Errc::HeaderMismatch);

  CHECK(code_of([&] { encode(cs, std::vector<Symbol>{3}); }) == Errc::UnknownSymbol);
}

TEST_CASE("code system construction checks") {
  SourceModel src = oracle::three_symbol_source();
  auto t0 = oracle::tree_from_shape(0, "(0(0(0(0())))1(0())2())", 3);
  auto t1 = oracle::tree_from_shape(1, "(1(0(0(0()))1()2())2(0()))", 3);
  CHECK(code_of([&] { CodeSystem(src, CodeKind::Aivf, {t0}); }) == Errc::TypeMismatch);
  CHECK(code_of([&] { CodeSystem(src, CodeKind::Aivf, {t1, t0}); }) == Errc::TypeMismatch);
  auto small = oracle::tree_from_shape(1, "(1()2())", 3);
  CHECK(code_of([&] { CodeSystem(src, CodeKind::Aivf, {t0, small}); }) == Errc::InvalidTree);
  // A Tunstall tree must return to type 0 after every word.
  CHECK(code_of([&] { CodeSystem(src, CodeKind::Tunstall, {t0}); }) == Errc::InvalidTree);
  CHECK(parse_code_kind("tunstall") == CodeKind::Tunstall);
  CHECK(code_of([&] { parse_code_kind("huffman"); }) == Errc::Parse);
}

TEST_CASE("JSON code file") {
  CodeSystem cs = example_code();
  const std::string text = code_system_to_json(cs);
  CodeSystem back = code_system_from_json(text);
  CHECK(back.kind() == cs.kind());
  CHECK(back.dict_size() == 7);
  REQUIRE(back.trees().size() == 2);
  CHECK(back.trees()[0] == cs.trees()[0]);
  CHECK(back.trees()[1] == cs.trees()[1]);
  CHECK(back.source().probs() == cs.source().probs());
  CHECK(code_system_to_json(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "aivf_codec_test.json";
  save_code_system(cs, path);
  CHECK(load_code_system(path).trees()[1] == cs.trees()[1]);
  std::filesystem::remove(path);

  CHECK(code_of([&] { code_system_from_json("{"); }) == Errc::Parse);
  CHECK(code_of([&] { code_system_from_json("{\"format\": \"other\"}"); }) == Errc::Parse);
  std::string tampered = text;
  const auto at = tampered.find("\"index\": 7");
  REQUIRE(at != std::string::npos);
  tampered.replace(at, 10, "\"index\": 8");
  CHECK_THROWS_AS(code_system_from_json(tampered), Error);
}

TEST_CASE("symbol text and byte mode") {
  std::istringstream src_text("65 1/2\n66 1/4\n67 1/4\n");
  SourceModel src = read_source(src_text);
  std::vector<std::uint8_t> raw{'A', 'B', 'C', 'A', 'A', 'C'};
  auto syms = bytes_to_symbols(raw, src);
  CHECK(symbols_to_bytes(syms, src) == raw);
  CHECK(code_of([&] { bytes_to_symbols(std::vector<std::uint8_t>{'D'}, src); }) == Errc::UnknownSymbol);

  TunstallCode tun = build_tunstall(src, 2);
  CodeSystem cs(src, CodeKind::Tunstall, {tun.tree});
  CHECK(symbols_to_bytes(decode(cs, encode(cs, syms)), src) == raw);

  std::istringstream words("66 65\n67");
  auto read = read_symbols(words, src);
  std::ostringstream out;
  write_symbols(out, read, src);
  std::istringstream again(out.str());
  CHECK(read_symbols(again, src) == read);
  std::istringstream bad("65 68");
  CHECK(code_of([&] { read_symbols(bad, src); }) == Errc::UnknownSymbol);
}
