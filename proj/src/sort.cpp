#include "efmct/sort.hpp"

#include <algorithm>
#include <set>

namespace efmct {

Sort Sort::enumeration(std::string name, std::vector<std::string> values) {
  if (values.empty())
    throw SortError("enumeration sort '" + name + "' has no values");
  std::set<std::string> seen;
  for (const auto& v : values)
    if (!seen.insert(v).second)
      throw SortError("enumeration sort '" + name + "' repeats value '" + v + "'");
  return Sort(Kind::Enumeration, std::move(name), std::move(values));
}

bool Sort::has_value(const std::string& literal) const { return index_of(literal) >= 0; }

int Sort::index_of(const std::string& literal) const {
  auto it = std::find(values_.begin(), values_.end(), literal);
  return it == values_.end() ? -1 : static_cast<int>(it - values_.begin());
}

const Sort& group_type_sort() {
  static const Sort sort = Sort::enumeration("GroupType", {"ALT", "OR", "OPT", "MAN"});
  return sort;
}

} // namespace efmct
