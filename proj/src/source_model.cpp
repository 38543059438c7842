#include "aivf/source_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "aivf/error.hpp"

namespace aivf {

SourceModel::SourceModel(std::vector<SymbolProb> entries) {
  if (entries.size() < 2) {
    throw Error(Errc::TooSmall, "a source needs at least 2 symbols, got " + std::to_string(entries.size()));
  }
  std::unordered_set<std::string> seen;
  Rational total = 0;
  for (auto& e : entries) {
    e.prob.canonicalize();
    if (sgn(e.prob) <= 0) {
      throw Error(Errc::NonPositive, "probability of '" + e.name + "' is " + to_fraction_string(e.prob));
    }
    if (!seen.insert(e.name).second) throw Error(Errc::Parse, "duplicate symbol '" + e.name + "'");
    total += e.prob;
  }
  if (total != 1) {
    throw Error(Errc::SumNotOne, "probabilities sum to " + to_fraction_string(total));
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SymbolProb& a, const SymbolProb& b) { return a.prob > b.prob; });

  for (auto& e : entries) {
    bits_ = std::max(bits_, bit_size(e.prob));
    symbols_.push_back(std::move(e.name));
    probs_.push_back(std::move(e.prob));
  }
  tail_sums_.resize(probs_.size());
  Rational acc = 0;
  for (std::size_t i = probs_.size(); i-- > 0;) {
    acc += probs_[i];
    tail_sums_[i] = acc;
  }
}

SourceModel SourceModel::from_probs(const std::vector<Rational>& probs) {
  std::vector<SymbolProb> entries;
  entries.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) entries.push_back({"a" + std::to_string(i), probs[i]});
  return SourceModel(std::move(entries));
}

const std::string& SourceModel::name(Symbol s) const {
  if (s < 0 || static_cast<std::size_t>(s) >= size()) {
    throw Error(Errc::IndexOutOfRange, "symbol index " + std::to_string(s));
  }
  return symbols_[static_cast<std::size_t>(s)];
}

const Rational& SourceModel::prob(Symbol s) const {
  if (s < 0 || static_cast<std::size_t>(s) >= size()) {
    throw Error(Errc::UnknownSymbol, "symbol index " + std::to_string(s) + " outside alphabet of size " +
                                         std::to_string(size()));
  }
  return probs_[static_cast<std::size_t>(s)];
}

const Rational& SourceModel::tail_sum(std::size_t i) const {
  if (i >= size()) throw Error(Errc::IndexOutOfRange, "tail sum index " + std::to_string(i));
  return tail_sums_[i];
}

Rational SourceModel::alpha(std::size_t i) const {
  if (i + 2 > size()) {
    throw Error(Errc::IndexOutOfRange,
                "alpha index " + std::to_string(i) + " outside [0, " + std::to_string(size() - 2) + "]");
  }
  return probs_[i] / tail_sums_[i];
}

Symbol SourceModel::index_of(const std::string& name) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), name);
  if (it == symbols_.end()) throw Error(Errc::UnknownSymbol, "'" + name + "' is not in the alphabet");
  return static_cast<Symbol>(it - symbols_.begin());
}

SourceModel read_source(std::istream& in) {
  std::vector<SymbolProb> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name) || name.front() == '#') continue;
    std::string value;
    std::string extra;
    if (!(ls >> value) || (ls >> extra && extra.front() != '#')) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": expected '<symbol> <probability>'");
    }
    try {
      entries.push_back({name, parse_rational(value)});
    } catch (const Error& e) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return SourceModel(std::move(entries));
}

SourceModel load_source(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open probability file " + path.string());
  return read_source(in);
}

}  // namespace aivf
