#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tempra {

/// One of Allen's thirteen basic relations between proper time intervals.
/// The enumerator order fixes the bit layout of RelationSet.
enum class AllenRelation : std::uint8_t {
  Before,
  After,
  Meets,
  MetBy,
  Overlaps,
  OverlappedBy,
  Starts,
  StartedBy,
  During,
  Contains,
  Finishes,
  FinishedBy,
  Equals,
};

inline constexpr int kRelationCount = 13;
inline constexpr std::uint16_t kAllRelationsMask = (1u << kRelationCount) - 1;

std::string_view to_string(AllenRelation r);

/// Parses one of the 13 lowercase relation names. Throws std::invalid_argument
/// on anything else.
AllenRelation relation_from_string(std::string_view name);

AllenRelation converse(AllenRelation r);

/// A subset of the 13 basic relations, acting as a disjunctive constraint on
/// an interval pair. The empty set is inconsistency; the full set is
/// "no information".
class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr RelationSet(AllenRelation r) : bits_(bit(r)) {}
  constexpr RelationSet(std::initializer_list<AllenRelation> rs) {
    for (AllenRelation r : rs) bits_ |= bit(r);
  }

  static constexpr RelationSet none() { return RelationSet(); }
  static constexpr RelationSet all() { return from_bits(kAllRelationsMask); }
  static constexpr RelationSet from_bits(std::uint16_t bits) {
    RelationSet s;
    s.bits_ = static_cast<std::uint16_t>(bits & kAllRelationsMask);
    return s;
  }

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool full() const { return bits_ == kAllRelationsMask; }
  int size() const;
  constexpr bool contains(AllenRelation r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool is_singleton() const { return bits_ != 0 && (bits_ & (bits_ - 1)) == 0; }

  /// The sole member of a singleton set. Throws std::logic_error otherwise.
  AllenRelation single() const;

  constexpr bool is_subset_of(RelationSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr RelationSet operator|(RelationSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr RelationSet operator&(RelationSet o) const { return from_bits(bits_ & o.bits_); }
  RelationSet& operator|=(RelationSet o) { bits_ |= o.bits_; return *this; }
  RelationSet& operator&=(RelationSet o) { bits_ &= o.bits_; return *this; }
  constexpr bool operator==(const RelationSet&) const = default;

  /// Elementwise converse; an involution.
  RelationSet converse() const;

  /// Members in enumerator order.
  std::vector<AllenRelation> members() const;

  /// Relation names sorted lexicographically (the serialization order).
  std::vector<std::string> sorted_names() const;

  /// Comma-joined sorted names, e.g. "before,meets". Empty set -> "".
  std::string to_string() const;

  /// Inverse of to_string. Throws std::invalid_argument on unknown names.
  static RelationSet from_string(std::string_view text);

 private:
  static constexpr std::uint16_t bit(AllenRelation r) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(r));
  }
  std::uint16_t bits_ = 0;
};

std::ostream& operator<<(std::ostream& os, const RelationSet& s);

/// Composition via the transitivity table: the union over all pairs
/// (a in r1, b in r2) of the basic-relation table entry. Empty in, empty out.
RelationSet compose(RelationSet r1, RelationSet r2);

/// Table entry for a single basic pair.
RelationSet compose_basic(AllenRelation a, AllenRelation b);

/// A proper interval over integer time points, start strictly before end.
/// Oracle helper; not part of the reasoning surface.
struct PointInterval {
  int start;
  int end;
  PointInterval(int s, int e) : start(s), end(e) {
    if (s >= e) throw std::invalid_argument("PointInterval requires start < end");
  }
};

/// The unique basic relation between two proper intervals, by endpoint
/// comparison. Total: exactly one relation holds for every valid pair.
AllenRelation relate(const PointInterval& a, const PointInterval& b);

/// Brute-force composition: enumerate all triples of intervals with endpoints
/// in {0..7} and collect relate(X,Z) over triples where relate(X,Y)=a and
/// relate(Y,Z)=b. Eight points realize every endpoint ordering of three
/// intervals, so this is exact. Used to generate and to check the table.
RelationSet compose_oracle(AllenRelation a, AllenRelation b);

/// All 28 proper intervals with endpoints in {0..7}.
const std::vector<PointInterval>& oracle_universe();

}  // namespace tempra
