#include "hbsg/group.hpp"

#include "hbsg/errors.hpp"

#include <algorithm>
#include <limits>

namespace hbsg {

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

std::int64_t checked_window_value(__int128 value, std::int64_t lo, std::int64_t hi) {
  if (value < lo || value > hi) {
    throw WindowOverflow("integer window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] overflowed");
  }
  return static_cast<std::int64_t>(value);
}

}  // namespace

GroupSpec GroupSpec::cyclic(std::int64_t modulus) {
  if (modulus < 2) throw InvalidArgument("cyclic modulus must be at least 2");
  return GroupSpec(Kind::cyclic, modulus, 0, 1);
}

GroupSpec GroupSpec::vector_space(std::int64_t prime, int dimension) {
  if (!is_prime(prime)) throw InvalidArgument("vector space characteristic must be prime");
  if (dimension < 1) throw InvalidArgument("vector space dimension must be at least 1");
  __int128 order = 1;
  for (int i = 0; i < dimension; ++i) {
    order *= prime;
    if (order > (static_cast<__int128>(1) << 62)) {
      throw InvalidArgument("vector space too large to encode");
    }
  }
  return GroupSpec(Kind::vector_space, prime, static_cast<std::int64_t>(order), dimension);
}

GroupSpec GroupSpec::integer_window(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InvalidArgument("integer window needs lo <= hi");
  return GroupSpec(Kind::integer_window, lo, hi, 1);
}

std::optional<std::uint64_t> GroupSpec::order() const {
  switch (kind_) {
    case Kind::cyclic:
      return static_cast<std::uint64_t>(first_);
    case Kind::vector_space:
      return static_cast<std::uint64_t>(second_);
    case Kind::integer_window:
      return std::nullopt;
  }
  return std::nullopt;
}

bool GroupSpec::is_canonical(GroupElem element) const {
  switch (kind_) {
    case Kind::cyclic:
      return element.value >= 0 && element.value < first_;
    case Kind::vector_space:
      return element.value >= 0 && element.value < second_;
    case Kind::integer_window:
      return element.value >= first_ && element.value <= second_;
  }
  return false;
}

GroupElem GroupSpec::element(std::int64_t raw) const {
  if (kind_ == Kind::cyclic) {
    std::int64_t r = raw % first_;
    return GroupElem{r < 0 ? r + first_ : r};
  }
  GroupElem e{raw};
  if (!is_canonical(e)) {
    throw InvalidArgument("value " + std::to_string(raw) + " is not an element of " + describe());
  }
  return e;
}

GroupElem GroupSpec::from_coordinates(std::span<const std::int64_t> coords) const {
  if (kind_ != Kind::vector_space) {
    if (coords.size() != 1) throw InvalidArgument("expected a scalar element");
    return element(coords[0]);
  }
  if (coords.size() != static_cast<std::size_t>(dimension_)) {
    throw InvalidArgument("coordinate vector has wrong dimension");
  }
  std::int64_t code = 0;
  for (std::int64_t c : coords) {
    std::int64_t r = c % first_;
    if (r < 0) r += first_;
    code = code * first_ + r;
  }
  return GroupElem{code};
}

std::vector<std::int64_t> GroupSpec::coordinates(GroupElem element) const {
  if (kind_ != Kind::vector_space) return {element.value};
  std::vector<std::int64_t> coords(static_cast<std::size_t>(dimension_));
  std::int64_t code = element.value;
  for (int i = dimension_ - 1; i >= 0; --i) {
    coords[static_cast<std::size_t>(i)] = code % first_;
    code /= first_;
  }
  return coords;
}

GroupElem GroupSpec::add(GroupElem a, GroupElem b) const {
  switch (kind_) {
    case Kind::cyclic: {
      __int128 s = static_cast<__int128>(a.value) + b.value;
      if (s >= first_) s -= first_;
      return GroupElem{static_cast<std::int64_t>(s)};
    }
    case Kind::vector_space: {
      std::int64_t code = 0;
      std::int64_t scale = 1;
      std::int64_t x = a.value;
      std::int64_t y = b.value;
      for (int i = 0; i < dimension_; ++i) {
        std::int64_t digit = (x % first_ + y % first_) % first_;
        code += digit * scale;
        scale *= first_;
        x /= first_;
        y /= first_;
      }
      return GroupElem{code};
    }
    case Kind::integer_window:
      return GroupElem{checked_window_value(static_cast<__int128>(a.value) + b.value, first_,
                                            second_)};
  }
  return a;
}

GroupElem GroupSpec::subtract(GroupElem a, GroupElem b) const {
  switch (kind_) {
    case Kind::cyclic: {
      std::int64_t d = a.value - b.value;
      if (d < 0) d += first_;
      return GroupElem{d};
    }
    case Kind::vector_space: {
      std::int64_t code = 0;
      std::int64_t scale = 1;
      std::int64_t x = a.value;
      std::int64_t y = b.value;
      for (int i = 0; i < dimension_; ++i) {
        std::int64_t digit = ((x % first_) - (y % first_) + first_) % first_;
        code += digit * scale;
        scale *= first_;
        x /= first_;
        y /= first_;
      }
      return GroupElem{code};
    }
    case Kind::integer_window:
      return GroupElem{checked_window_value(static_cast<__int128>(a.value) - b.value, first_,
                                            second_)};
  }
  return a;
}

GroupElem GroupSpec::multiply(GroupElem a, std::int64_t times) const {
  if (times < 1) throw InvalidArgument("multiply needs a positive count");
  GroupElem total = a;
  for (std::int64_t i = 1; i < times; ++i) total = add(total, a);
  return total;
}

std::string GroupSpec::describe() const {
  switch (kind_) {
    case Kind::cyclic:
      return "Z_" + std::to_string(first_);
    case Kind::vector_space:
      return "(Z_" + std::to_string(first_) + ")^" + std::to_string(dimension_);
    case Kind::integer_window:
      return "Z[" + std::to_string(first_) + ", " + std::to_string(second_) + "]";
  }
  return "?";
}

ElemSet::ElemSet(GroupSpec spec)
    : spec_(spec), elements_(std::make_shared<const std::vector<GroupElem>>()) {}

ElemSet::ElemSet(GroupSpec spec, std::vector<GroupElem> elements) : spec_(spec) {
  for (GroupElem e : elements) {
    if (!spec.is_canonical(e)) {
      throw InvalidArgument("element " + std::to_string(e.value) + " is not canonical in " +
                            spec.describe());
    }
  }
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  elements_ = std::make_shared<const std::vector<GroupElem>>(std::move(elements));
}

ElemSet::ElemSet(GroupSpec spec, std::vector<GroupElem> sorted, SortedTag)
    : spec_(spec), elements_(std::make_shared<const std::vector<GroupElem>>(std::move(sorted))) {}

ElemSet make_sorted_set(GroupSpec spec, std::vector<GroupElem> sorted) {
  return ElemSet(spec, std::move(sorted), ElemSet::SortedTag{});
}

ElemSet ElemSet::from_values(GroupSpec spec, std::span<const std::int64_t> raw) {
  std::vector<GroupElem> elements;
  elements.reserve(raw.size());
  for (std::int64_t v : raw) elements.push_back(spec.element(v));
  return ElemSet(spec, std::move(elements));
}

ElemSet ElemSet::from_values(GroupSpec spec, std::initializer_list<std::int64_t> raw) {
  return from_values(spec, std::span<const std::int64_t>(raw.begin(), raw.size()));
}

bool ElemSet::contains(GroupElem element) const {
  return std::binary_search(elements_->begin(), elements_->end(), element);
}

std::optional<std::size_t> ElemSet::index_of(GroupElem element) const {
  auto it = std::lower_bound(elements_->begin(), elements_->end(), element);
  if (it == elements_->end() || *it != element) return std::nullopt;
  return static_cast<std::size_t>(it - elements_->begin());
}

bool ElemSet::is_subset_of(const ElemSet& other) const {
  if (!(spec_ == other.spec_)) return false;
  return std::includes(other.begin(), other.end(), begin(), end());
}

std::vector<std::int64_t> ElemSet::values() const {
  std::vector<std::int64_t> out;
  out.reserve(size());
  for (GroupElem e : *elements_) out.push_back(e.value);
  return out;
}

ElemSet ElemSet::translate(GroupElem shift) const {
  std::vector<GroupElem> shifted;
  shifted.reserve(size());
  for (GroupElem e : *elements_) shifted.push_back(spec_.add(e, shift));
  return ElemSet(spec_, std::move(shifted));
}

ElemSet ElemSet::truncate(std::size_t count) const {
  if (count >= size()) return *this;
  return make_sorted_set(spec_, std::vector<GroupElem>(begin(), begin() + static_cast<std::ptrdiff_t>(count)));
}

bool operator==(const ElemSet& a, const ElemSet& b) {
  return a.spec_ == b.spec_ && *a.elements_ == *b.elements_;
}

void require_same_spec(const ElemSet& a, const ElemSet& b, const char* op) {
  if (!(a.spec() == b.spec())) {
    throw SpecMismatch(std::string(op) + ": operands live in " + a.spec().describe() + " and " +
                       b.spec().describe());
  }
}

}  // namespace hbsg
