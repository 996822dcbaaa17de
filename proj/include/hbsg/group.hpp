#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hbsg {

/// An element in canonical form. Residues for Z_m, the integer itself for
/// windows, and for Z_p^d the mixed-radix code sum(c_i * p^(d-1-i)) so that
/// ordering codes orders coordinate vectors lexicographically.
struct GroupElem {
  std::int64_t value = 0;

  friend constexpr auto operator<=>(const GroupElem&, const GroupElem&) = default;
};

/// Descriptor of the finite abelian group (or bounded integer window) that a
/// set lives in.
class GroupSpec {
 public:
  enum class Kind { cyclic, vector_space, integer_window };

  static GroupSpec cyclic(std::int64_t modulus);
  static GroupSpec vector_space(std::int64_t prime, int dimension);
  static GroupSpec integer_window(std::int64_t lo, std::int64_t hi);

  Kind kind() const { return kind_; }
  std::int64_t modulus() const { return first_; }
  std::int64_t prime() const { return first_; }
  int dimension() const { return dimension_; }
  std::int64_t lo() const { return first_; }
  std::int64_t hi() const { return second_; }

  /// Group order; empty for integer windows, which are not closed.
  std::optional<std::uint64_t> order() const;

  bool is_canonical(GroupElem element) const;
  /// Canonicalizes a raw value: residues are reduced mod m, vector codes and
  /// window integers are range-checked.
  GroupElem element(std::int64_t raw) const;
  GroupElem from_coordinates(std::span<const std::int64_t> coords) const;
  std::vector<std::int64_t> coordinates(GroupElem element) const;

  /// Throws WindowOverflow when an integer-window result leaves [lo, hi].
  GroupElem add(GroupElem a, GroupElem b) const;
  GroupElem subtract(GroupElem a, GroupElem b) const;
  /// Sum of `times` copies of `a`.
  GroupElem multiply(GroupElem a, std::int64_t times) const;

  std::string describe() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(Kind kind, std::int64_t first, std::int64_t second, int dimension)
      : kind_(kind), first_(first), second_(second), dimension_(dimension) {}

  Kind kind_;
  std::int64_t first_;
  std::int64_t second_;
  int dimension_;
};

/// Finite set of group elements, always held in sorted canonical order.
/// Copies share the underlying storage.
class ElemSet {
 public:
  using const_iterator = std::vector<GroupElem>::const_iterator;

  explicit ElemSet(GroupSpec spec);
  /// Sorts and deduplicates; throws InvalidArgument on non-canonical input.
  ElemSet(GroupSpec spec, std::vector<GroupElem> elements);

  /// Each raw value goes through GroupSpec::element.
  static ElemSet from_values(GroupSpec spec, std::span<const std::int64_t> raw);
  static ElemSet from_values(GroupSpec spec, std::initializer_list<std::int64_t> raw);

  const GroupSpec& spec() const { return spec_; }
  std::span<const GroupElem> elements() const { return *elements_; }
  std::size_t size() const { return elements_->size(); }
  bool empty() const { return elements_->empty(); }
  GroupElem operator[](std::size_t i) const { return (*elements_)[i]; }
  const_iterator begin() const { return elements_->begin(); }
  const_iterator end() const { return elements_->end(); }

  bool contains(GroupElem element) const;
  std::optional<std::size_t> index_of(GroupElem element) const;
  bool is_subset_of(const ElemSet& other) const;

  /// Raw values in canonical order (vector codes for Z_p^d).
  std::vector<std::int64_t> values() const;
  ElemSet translate(GroupElem shift) const;
  /// The first `count` elements in canonical order.
  ElemSet truncate(std::size_t count) const;

  friend bool operator==(const ElemSet& a, const ElemSet& b);

 private:
  struct SortedTag {};
  ElemSet(GroupSpec spec, std::vector<GroupElem> sorted, SortedTag);

  GroupSpec spec_;
  std::shared_ptr<const std::vector<GroupElem>> elements_;

  friend ElemSet make_sorted_set(GroupSpec spec, std::vector<GroupElem> sorted);
};

/// Wraps an already sorted, deduplicated, canonical vector without
/// re-validating it. Internal kernels use this.
ElemSet make_sorted_set(GroupSpec spec, std::vector<GroupElem> sorted);

void require_same_spec(const ElemSet& a, const ElemSet& b, const char* op);

}  // namespace hbsg
