#include "hbsg/set_store.hpp"

#include "hbsg/errors.hpp"

namespace hbsg {

std::string SetStore::put(const std::string& name, Value value) {
  std::string key = name + "@" + std::to_string(next_++);
  values_.emplace(key, std::move(value));
  return key;
}

const SetStore::Value& SetStore::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("unknown set key " + key);
  return it->second;
}

const ElemSet& SetStore::elem_set(const std::string& key) const {
  if (auto* v = std::get_if<ElemSet>(&get(key))) return *v;
  throw InvalidArgument(key + " is not an element set");
}

const StringSet& SetStore::string_set(const std::string& key) const {
  if (auto* v = std::get_if<StringSet>(&get(key))) return *v;
  throw InvalidArgument(key + " is not a string set");
}

const AString& SetStore::string(const std::string& key) const {
  if (auto* v = std::get_if<AString>(&get(key))) return *v;
  throw InvalidArgument(key + " is not a string");
}

}  // namespace hbsg
