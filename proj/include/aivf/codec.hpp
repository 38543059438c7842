#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aivf/parse_tree.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

enum class CodeKind : std::uint8_t { Tunstall = 0, Aivf = 1 };

std::string_view to_string(CodeKind kind);
/// Accepts "tunstall" or "aivf"; throws Parse.
CodeKind parse_code_kind(std::string_view text);

/// A complete set of parse trees ready for encoding: one type-0 tree for a
/// Tunstall code, one tree per type for an AIVF code, all with D codewords.
class CodeSystem {
 public:
  /// Validates every tree against the source. Throws InvalidTree or TypeMismatch.
  CodeSystem(SourceModel src, CodeKind kind, std::vector<ParseTree> trees);

  const SourceModel& source() const { return src_; }
  CodeKind kind() const { return kind_; }
  std::size_t dict_size() const { return dict_size_; }
  /// Bits per codeword, ceil(log2 D).
  unsigned width() const { return width_; }
  const std::vector<ParseTree>& trees() const { return trees_; }
  /// The tree used in state `type`; for a Tunstall code that is always tree 0.
  const ParseTree& tree(int type) const;

 private:
  SourceModel src_;
  CodeKind kind_;
  std::vector<ParseTree> trees_;
  std::size_t dict_size_ = 0;
  unsigned width_ = 0;
};

/// One parsed word: tree used, 1-based codeword index, word length.
struct ParseStep {
  int tree = 0;
  int index = 0;
  std::size_t length = 0;
};

struct StreamHeader {
  CodeKind kind = CodeKind::Aivf;
  std::uint16_t alphabet_size = 0;
  std::uint32_t dict_size = 0;
  std::uint64_t symbol_count = 0;
};

inline constexpr std::size_t kHeaderBytes = 20;

/// Greedy longest-prefix parse with tree switching. At end of input an
/// unfinished word is completed by a_0 padding.
std::vector<ParseStep> parse_symbols(const CodeSystem& cs, std::span<const Symbol> input);

/// Header plus w-bit indices (index - 1), MSB first, last byte zero-padded.
/// Throws UnknownSymbol for symbols outside the alphabet.
std::vector<std::uint8_t> encode(const CodeSystem& cs, std::span<const Symbol> input,
                                 std::vector<ParseStep>* steps = nullptr);

StreamHeader read_header(std::span<const std::uint8_t> stream);

/// Throws HeaderMismatch, IndexOutOfRange or TruncatedStream.
std::vector<Symbol> decode(const CodeSystem& cs, std::span<const std::uint8_t> stream,
                           std::vector<ParseStep>* steps = nullptr);

/// JSON code-system file.
std::string code_system_to_json(const CodeSystem& cs);
/// Throws Parse for malformed documents and InvalidTree for bad trees.
CodeSystem code_system_from_json(const std::string& text);
void save_code_system(const CodeSystem& cs, const std::filesystem::path& path);
CodeSystem load_code_system(const std::filesystem::path& path);

/// Whitespace-separated symbol names. Throws UnknownSymbol.
std::vector<Symbol> read_symbols(std::istream& in, const SourceModel& src);
void write_symbols(std::ostream& out, std::span<const Symbol> symbols, const SourceModel& src);

/// Byte mode: every input byte b is the symbol named by its decimal value
/// ("0".."255"). Throws UnknownSymbol.
std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> bytes, const SourceModel& src);
std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, const SourceModel& src);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace aivf
