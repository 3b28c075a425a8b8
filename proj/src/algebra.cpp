#include "tempra/algebra.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <ostream>

namespace tempra {

namespace {

constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "before",       "after",      "meets",    "met_by",     "overlaps",
    "overlapped_by", "starts",    "started_by", "during",   "contains",
    "finishes",     "finished_by", "equals",
};

constexpr std::array<AllenRelation, kRelationCount> kConverse = {
    AllenRelation::After,        AllenRelation::Before,
    AllenRelation::MetBy,        AllenRelation::Meets,
    AllenRelation::OverlappedBy, AllenRelation::Overlaps,
    AllenRelation::StartedBy,    AllenRelation::Starts,
    AllenRelation::Contains,     AllenRelation::During,
    AllenRelation::FinishedBy,   AllenRelation::Finishes,
    AllenRelation::Equals,
};

}  // namespace

std::string_view to_string(AllenRelation r) {
  return kRelationNames[static_cast<unsigned>(r)];
}

AllenRelation relation_from_string(std::string_view name) {
  for (int i = 0; i < kRelationCount; ++i) {
    if (kRelationNames[i] == name) return static_cast<AllenRelation>(i);
  }
  throw std::invalid_argument("unknown relation name: '" + std::string(name) + "'");
}

AllenRelation converse(AllenRelation r) {
  return kConverse[static_cast<unsigned>(r)];
}

int RelationSet::size() const { return std::popcount(bits_); }

AllenRelation RelationSet::single() const {
  if (!is_singleton()) {
    throw std::logic_error("RelationSet::single on a set of size " +
                           std::to_string(size()));
  }
  return static_cast<AllenRelation>(std::countr_zero(bits_));
}

RelationSet RelationSet::converse() const {
  RelationSet out;
  for (int i = 0; i < kRelationCount; ++i) {
    if (bits_ & (1u << i)) out |= RelationSet(kConverse[i]);
  }
  return out;
}

std::vector<AllenRelation> RelationSet::members() const {
  std::vector<AllenRelation> out;
  for (int i = 0; i < kRelationCount; ++i) {
    if (bits_ & (1u << i)) out.push_back(static_cast<AllenRelation>(i));
  }
  return out;
}

std::vector<std::string> RelationSet::sorted_names() const {
  std::vector<std::string> names;
  for (AllenRelation r : members()) names.emplace_back(tempra::to_string(r));
  std::sort(names.begin(), names.end());
  return names;
}

std::string RelationSet::to_string() const {
  std::string out;
  for (const std::string& n : sorted_names()) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

RelationSet RelationSet::from_string(std::string_view text) {
  RelationSet out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view name = text.substr(pos, comma - pos);
    if (!name.empty()) out |= RelationSet(relation_from_string(name));
    pos = comma + 1;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const RelationSet& s) {
  return os << (s.full() ? std::string("ALL") : s.to_string());
}

AllenRelation relate(const PointInterval& a, const PointInterval& b) {
  if (a.end < b.start) return AllenRelation::Before;
  if (b.end < a.start) return AllenRelation::After;
  if (a.end == b.start) return AllenRelation::Meets;
  if (b.end == a.start) return AllenRelation::MetBy;
  if (a.start == b.start && a.end == b.end) return AllenRelation::Equals;
  if (a.start == b.start) {
    return a.end < b.end ? AllenRelation::Starts : AllenRelation::StartedBy;
  }
  if (a.end == b.end) {
    return a.start > b.start ? AllenRelation::Finishes : AllenRelation::FinishedBy;
  }
  if (b.start < a.start && a.end < b.end) return AllenRelation::During;
  if (a.start < b.start && b.end < a.end) return AllenRelation::Contains;
  return a.start < b.start ? AllenRelation::Overlaps : AllenRelation::OverlappedBy;
}

const std::vector<PointInterval>& oracle_universe() {
  static const std::vector<PointInterval> universe = [] {
    std::vector<PointInterval> out;
    for (int s = 0; s <= 7; ++s) {
      for (int e = s + 1; e <= 7; ++e) out.emplace_back(s, e);
    }
    return out;
  }();
  return universe;
}

RelationSet compose_oracle(AllenRelation a, AllenRelation b) {
  const auto& universe = oracle_universe();
  RelationSet out;
  for (const PointInterval& x : universe) {
    for (const PointInterval& y : universe) {
      if (relate(x, y) != a) continue;
      for (const PointInterval& z : universe) {
        if (relate(y, z) != b) continue;
        out |= RelationSet(relate(x, z));
      }
    }
  }
  return out;
}

namespace {

// Transitivity table, indexed [a][b] in enumerator order. Generated from
// compose_oracle over the {0..7} endpoint universe; the equivalence is
// re-checked exhaustively in the test suite.
constexpr std::array<std::array<std::uint16_t, 13>, 13> kCompositionTable = {{
    // before
    {{0x0001, 0x1fff, 0x0001, 0x0155, 0x0001, 0x0155, 0x0001,
      0x0001, 0x0155, 0x0001, 0x0155, 0x0001, 0x0001}},
    // after
    {{0x1fff, 0x0002, 0x052a, 0x0002, 0x052a, 0x0002, 0x052a,
      0x0002, 0x052a, 0x0002, 0x0002, 0x0002, 0x0002}},
    // meets
    {{0x0001, 0x02aa, 0x0001, 0x1c00, 0x0001, 0x0150, 0x0004,
      0x0004, 0x0150, 0x0001, 0x0150, 0x0001, 0x0004}},
    // met_by
    {{0x0a15, 0x0002, 0x10c0, 0x0002, 0x0520, 0x0002, 0x0520,
      0x0002, 0x0520, 0x0002, 0x0008, 0x0008, 0x0008}},
    // overlaps
    {{0x0001, 0x02aa, 0x0001, 0x02a0, 0x0015, 0x1ff0, 0x0010,
      0x0a10, 0x0150, 0x0a15, 0x0150, 0x0015, 0x0010}},
    // overlapped_by
    {{0x0a15, 0x0002, 0x0a10, 0x0002, 0x1ff0, 0x002a, 0x0520,
      0x002a, 0x0520, 0x02aa, 0x0020, 0x02a0, 0x0020}},
    // starts
    {{0x0001, 0x0002, 0x0001, 0x0008, 0x0015, 0x0520, 0x0040,
      0x10c0, 0x0100, 0x0a15, 0x0100, 0x0015, 0x0040}},
    // started_by
    {{0x0a15, 0x0002, 0x0a10, 0x0008, 0x0a10, 0x0020, 0x10c0,
      0x0080, 0x0520, 0x0200, 0x0020, 0x0200, 0x0080}},
    // during
    {{0x0001, 0x0002, 0x0001, 0x0002, 0x0155, 0x052a, 0x0100,
      0x052a, 0x0100, 0x1fff, 0x0100, 0x0155, 0x0100}},
    // contains
    {{0x0a15, 0x02aa, 0x0a10, 0x02a0, 0x0a10, 0x02a0, 0x0a10,
      0x0200, 0x1ff0, 0x0200, 0x02a0, 0x0200, 0x0200}},
    // finishes
    {{0x0001, 0x0002, 0x0004, 0x0002, 0x0150, 0x002a, 0x0100,
      0x002a, 0x0100, 0x02aa, 0x0400, 0x1c00, 0x0400}},
    // finished_by
    {{0x0001, 0x02aa, 0x0004, 0x02a0, 0x0010, 0x02a0, 0x0010,
      0x0200, 0x0150, 0x0200, 0x1c00, 0x0800, 0x0800}},
    // equals
    {{0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040,
      0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000}},
}};

}  // namespace

RelationSet compose_basic(AllenRelation a, AllenRelation b) {
  return RelationSet::from_bits(
      kCompositionTable[static_cast<unsigned>(a)][static_cast<unsigned>(b)]);
}

RelationSet compose(RelationSet r1, RelationSet r2) {
  RelationSet out;
  for (int i = 0; i < kRelationCount; ++i) {
    if (!(r1.bits() & (1u << i))) continue;
    for (int j = 0; j < kRelationCount; ++j) {
      if (!(r2.bits() & (1u << j))) continue;
      out |= RelationSet::from_bits(kCompositionTable[i][j]);
    }
  }
  return out;
}

}  // namespace tempra
