#pragma once

#include "hbsg/group.hpp"
#include "hbsg/strings.hpp"

#include <map>
#include <string>
#include <variant>

namespace hbsg {

/// Named snapshots of the sets a pipeline run touched. Keys are
/// "<name>@<sequence>" and never reused, so ledger entries can refer to the
/// exact set they measured.
class SetStore {
 public:
  using Value = std::variant<ElemSet, StringSet, AString>;

  std::string put(const std::string& name, Value value);
  const Value& get(const std::string& key) const;
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, Value>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  const ElemSet& elem_set(const std::string& key) const;
  const StringSet& string_set(const std::string& key) const;
  const AString& string(const std::string& key) const;

 private:
  std::map<std::string, Value> values_;
  std::size_t next_ = 0;
};

}  // namespace hbsg
