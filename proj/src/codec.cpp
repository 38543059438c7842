#include "aivf/codec.hpp"

#include <json.hpp>

#include <fstream>
#include <iterator>
#include <sstream>

#include "aivf/error.hpp"

namespace aivf {

using nlohmann::json;

std::string_view to_string(CodeKind kind) { return kind == CodeKind::Tunstall ? "tunstall" : "aivf"; }

CodeKind parse_code_kind(std::string_view text) {
  if (text == "tunstall") return CodeKind::Tunstall;
  if (text == "aivf") return CodeKind::Aivf;
  throw Error(Errc::Parse, "unknown code kind '" + std::string(text) + "'");
}

CodeSystem::CodeSystem(SourceModel src, CodeKind kind, std::vector<ParseTree> trees)
    : src_(std::move(src)), kind_(kind), trees_(std::move(trees)) {
  const std::size_t expected = kind_ == CodeKind::Tunstall ? 1 : src_.size() - 1;
  if (trees_.size() != expected) {
    throw Error(Errc::TypeMismatch, std::string(to_string(kind_)) + " code needs " + std::to_string(expected) +
                                        " trees, got " + std::to_string(trees_.size()));
  }
  dict_size_ = trees_.front().codeword_count();
  for (std::size_t k = 0; k < trees_.size(); ++k) {
    const ParseTree& t = trees_[k];
    if (t.type() != static_cast<int>(k)) {
      throw Error(Errc::TypeMismatch, "tree " + std::to_string(k) + " has type " + std::to_string(t.type()));
    }
    require_valid(t, src_);
    if (t.codeword_count() != dict_size_) {
      throw Error(Errc::InvalidTree, "tree " + std::to_string(k) + " has " + std::to_string(t.codeword_count()) +
                                         " codewords, tree 0 has " + std::to_string(dict_size_));
    }
    if (kind_ == CodeKind::Tunstall) {
      for (const auto& e : t.dictionary()) {
        if (e.target != 0) throw Error(Errc::InvalidTree, "Tunstall tree has a word leading to type " + std::to_string(e.target));
      }
    }
  }
  if (dict_size_ < 2) throw Error(Errc::TooSmall, "a code needs at least 2 codewords");
  while ((std::size_t{1} << width_) < dict_size_) ++width_;
}

const ParseTree& CodeSystem::tree(int type) const {
  if (kind_ == CodeKind::Tunstall) return trees_.front();
  if (type < 0 || static_cast<std::size_t>(type) >= trees_.size()) {
    throw Error(Errc::IndexOutOfRange, "no tree of type " + std::to_string(type));
  }
  return trees_[static_cast<std::size_t>(type)];
}

std::vector<ParseStep> parse_symbols(const CodeSystem& cs, std::span<const Symbol> input) {
  const auto n = static_cast<Symbol>(cs.source().size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] < 0 || input[i] >= n) {
      throw Error(Errc::UnknownSymbol, "symbol index " + std::to_string(input[i]) + " at position " + std::to_string(i));
    }
  }
  std::vector<ParseStep> steps;
  int current = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    const ParseTree& t = cs.tree(current);
    const TreeNode* node = &t.root();
    const TreeNode* best = node->codeword ? node : nullptr;
    std::size_t depth = 0, best_depth = 0;
    while (pos + depth < input.size()) {
      const TreeNode* next = node->child(input[pos + depth]);
      if (!next) break;
      node = next;
      ++depth;
      if (node->codeword) {
        best = node;
        best_depth = depth;
      }
    }
    if (pos + depth == input.size()) {
      // Ran out of input mid-word: finish it with a_0 padding.
      while (!node->codeword) {
        node = node->child(0);
        if (!node) throw Error(Errc::InvalidTree, "padding left the tree");
        ++depth;
      }
      steps.push_back({current, *node->codeword, depth});
      pos = input.size();
      break;
    }
    if (!best) throw Error(Errc::InvalidTree, "no dictionary word is a prefix at position " + std::to_string(pos));
    steps.push_back({current, *best->codeword, best_depth});
    pos += best_depth;
    current = cs.kind() == CodeKind::Tunstall ? 0 : best->target;
  }
  return steps;
}

namespace {

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | in[at + static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode(const CodeSystem& cs, std::span<const Symbol> input, std::vector<ParseStep>* steps) {
  std::vector<ParseStep> parsed = parse_symbols(cs, input);
  std::vector<std::uint8_t> out{'A', 'I', 'V', 'F', 0x01, static_cast<std::uint8_t>(cs.kind())};
  put_be(out, cs.source().size(), 2);
  put_be(out, cs.dict_size(), 4);
  put_be(out, input.size(), 8);

  std::uint64_t acc = 0;
  unsigned bits = 0;
  for (const auto& s : parsed) {
    acc = (acc << cs.width()) | static_cast<std::uint64_t>(s.index - 1);
    bits += cs.width();
    while (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> bits));
    }
    acc &= (std::uint64_t{1} << bits) - 1;
  }
  if (bits > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - bits)));
  if (steps) *steps = std::move(parsed);
  return out;
}

StreamHeader read_header(std::span<const std::uint8_t> stream) {
  if (stream.size() < kHeaderBytes) throw Error(Errc::TruncatedStream, "stream shorter than its header");
  if (stream[0] != 'A' || stream[1] != 'I' || stream[2] != 'V' || stream[3] != 'F') {
    throw Error(Errc::HeaderMismatch, "bad magic");
  }
  if (stream[4] != 0x01) throw Error(Errc::HeaderMismatch, "unsupported version " + std::to_string(stream[4]));
  if (stream[5] > 1) throw Error(Errc::HeaderMismatch, "unknown code kind " + std::to_string(stream[5]));
  StreamHeader h;
  h.kind = static_cast<CodeKind>(stream[5]);
  h.alphabet_size = static_cast<std::uint16_t>(get_be(stream, 6, 2));
  h.dict_size = static_cast<std::uint32_t>(get_be(stream, 8, 4));
  h.symbol_count = get_be(stream, 12, 8);
  return h;
}

std::vector<Symbol> decode(const CodeSystem& cs, std::span<const std::uint8_t> stream, std::vector<ParseStep>* steps) {
  const StreamHeader h = read_header(stream);
  if (h.kind != cs.kind() || h.alphabet_size != cs.source().size() || h.dict_size != cs.dict_size()) {
    throw Error(Errc::HeaderMismatch, "stream was written for a " + std::string(to_string(h.kind)) + " code with |S|=" +
                                          std::to_string(h.alphabet_size) + ", D=" + std::to_string(h.dict_size));
  }
  const std::span<const std::uint8_t> payload = stream.subspan(kHeaderBytes);
  const std::uint64_t total_bits = payload.size() * 8ull;
  std::uint64_t bit = 0;
  std::vector<Symbol> out;
  int current = 0;
  while (out.size() < h.symbol_count) {
    if (bit + cs.width() > total_bits) {
      throw Error(Errc::TruncatedStream, "stream ends after " + std::to_string(out.size()) + " of " +
                                             std::to_string(h.symbol_count) + " symbols");
    }
    std::uint64_t v = 0;
    for (unsigned i = 0; i < cs.width(); ++i, ++bit) v = (v << 1) | ((payload[bit / 8] >> (7 - bit % 8)) & 1u);
    const std::uint64_t index = v + 1;
    if (index > cs.dict_size()) {
      throw Error(Errc::IndexOutOfRange, "codeword index " + std::to_string(index) + " exceeds D=" +
                                             std::to_string(cs.dict_size()));
    }
    const DictEntry& e = cs.tree(current).dictionary()[index - 1];
    out.insert(out.end(), e.word.begin(), e.word.end());
    if (steps) steps->push_back({current, e.index, e.length()});
    current = cs.kind() == CodeKind::Tunstall ? 0 : e.target;
  }
  out.resize(h.symbol_count);
  return out;
}

namespace {

json node_to_json(const TreeNode& node, const SourceModel& src) {
  json j = json::object();
  if (node.codeword) {
    j["codeword"] = *node.codeword;
    j["target"] = node.target;
  }
  json children = json::array();
  for (const auto& c : node.children) children.push_back({{"label", src.name(c.label)}, {"node", node_to_json(c.node, src)}});
  j["children"] = std::move(children);
  return j;
}

TreeNode node_from_json(const json& j, const SourceModel& src) {
  TreeNode node;
  if (j.contains("codeword")) {
    node.codeword = j.at("codeword").get<int>();
    node.target = j.at("target").get<int>();
  }
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) {
      node.children.push_back({src.index_of(c.at("label").get<std::string>()), node_from_json(c.at("node"), src)});
    }
  }
  return node;
}

}  // namespace

std::string code_system_to_json(const CodeSystem& cs) {
  const SourceModel& src = cs.source();
  json doc;
  doc["format"] = "aivf-code";
  doc["version"] = 1;
  doc["kind"] = std::string(to_string(cs.kind()));
  doc["dict_size"] = cs.dict_size();
  json source = json::array();
  for (std::size_t i = 0; i < src.size(); ++i) {
    source.push_back({{"symbol", src.symbols()[i]}, {"prob", to_fraction_string(src.probs()[i])}});
  }
  doc["source"] = std::move(source);
  json trees = json::array();
  for (const auto& t : cs.trees()) {
    json dict = json::array();
    for (const auto& e : occurrence_probs(t, src)) {
      json word = json::array();
      for (Symbol s : e.word) word.push_back(src.name(s));
      dict.push_back({{"index", e.index}, {"word", std::move(word)}, {"prob", to_fraction_string(e.occurrence_prob)},
                      {"target", e.target}});
    }
    trees.push_back({{"type", t.type()}, {"root", node_to_json(t.root(), src)}, {"dictionary", std::move(dict)}});
  }
  doc["trees"] = std::move(trees);
  return doc.dump(2) + "\n";
}

CodeSystem code_system_from_json(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "aivf-code") throw Error(Errc::Parse, "not an aivf-code document");
    if (doc.at("version").get<int>() != 1) throw Error(Errc::Parse, "unsupported code file version");
    std::vector<SymbolProb> entries;
    for (const auto& s : doc.at("source")) {
      entries.push_back({s.at("symbol").get<std::string>(), parse_rational(s.at("prob").get<std::string>())});
    }
    SourceModel src(std::move(entries));
    const CodeKind kind = parse_code_kind(doc.at("kind").get<std::string>());
    std::vector<ParseTree> trees;
    for (const auto& jt : doc.at("trees")) {
      trees.emplace_back(jt.at("type").get<int>(), node_from_json(jt.at("root"), src), src.size());
    }
    CodeSystem cs(std::move(src), kind, std::move(trees));
    if (doc.at("dict_size").get<std::size_t>() != cs.dict_size()) {
      throw Error(Errc::Parse, "dict_size field disagrees with the trees");
    }
    // The dictionary listing is redundant; it must agree with the trees.
    for (std::size_t k = 0; k < cs.trees().size(); ++k) {
      const json& jt = doc.at("trees").at(k);
      if (!jt.contains("dictionary")) continue;
      const auto& dict = cs.trees()[k].dictionary();
      const json& jd = jt.at("dictionary");
      if (jd.size() != dict.size()) throw Error(Errc::Parse, "dictionary listing of tree " + std::to_string(k) + " has the wrong size");
      for (std::size_t i = 0; i < dict.size(); ++i) {
        std::vector<Symbol> word;
        for (const auto& s : jd.at(i).at("word")) word.push_back(cs.source().index_of(s.get<std::string>()));
        if (jd.at(i).at("index").get<int>() != dict[i].index || word != dict[i].word ||
            jd.at(i).at("target").get<int>() != dict[i].target) {
          throw Error(Errc::Parse, "dictionary listing of tree " + std::to_string(k) + " disagrees at index " +
                                       std::to_string(dict[i].index));
        }
      }
    }
    return cs;
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("code file: ") + e.what());
  }
}

void save_code_system(const CodeSystem& cs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << code_system_to_json(cs);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

CodeSystem load_code_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return code_system_from_json(text.str());
}

std::vector<Symbol> read_symbols(std::istream& in, const SourceModel& src) {
  std::vector<Symbol> out;
  std::string token;
  while (in >> token) out.push_back(src.index_of(token));
  return out;
}

void write_symbols(std::ostream& out, std::span<const Symbol> symbols, const SourceModel& src) {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out << ' ';
    out << src.name(symbols[i]);
  }
  out << '\n';
}

std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> bytes, const SourceModel& src) {
  std::vector<Symbol> table(256, -1);
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::string& name = src.symbols()[i];
    if (name.empty() || name.size() > 3 || name.find_first_not_of("0123456789") != std::string::npos) continue;
    const int v = std::stoi(name);
    if (v < 256) table[static_cast<std::size_t>(v)] = static_cast<Symbol>(i);
  }
  std::vector<Symbol> out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const Symbol s = table[bytes[i]];
    if (s < 0) throw Error(Errc::UnknownSymbol, "byte " + std::to_string(bytes[i]) + " at offset " + std::to_string(i) + " is not in the alphabet");
    out.push_back(s);
  }
  return out;
}

std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, const SourceModel& src) {
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    const std::string& name = src.name(s);
    if (name.empty() || name.size() > 3 || name.find_first_not_of("0123456789") != std::string::npos || std::stoi(name) > 255) {
      throw Error(Errc::UnknownSymbol, "symbol '" + name + "' has no byte value");
    }
    out.push_back(static_cast<std::uint8_t>(std::stoi(name)));
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace aivf
