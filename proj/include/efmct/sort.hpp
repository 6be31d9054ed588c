#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace efmct {

/// Raised when terms of incompatible sorts are combined.
class SortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Value domain of an attribute slot or a bound variable.
class Sort {
public:
  enum class Kind { Boolean, Real, Natural, Enumeration };

  static Sort boolean() { return Sort(Kind::Boolean, "Boolean", {}); }
  static Sort real() { return Sort(Kind::Real, "Real", {}); }
  static Sort natural() { return Sort(Kind::Natural, "Natural", {}); }
  /// Throws SortError when `values` is empty or contains duplicates.
  static Sort enumeration(std::string name, std::vector<std::string> values);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& values() const { return values_; }

  bool is_numeric() const { return kind_ == Kind::Real || kind_ == Kind::Natural; }
  bool has_value(const std::string& literal) const;
  /// Position of `literal` in the value list; -1 when absent.
  int index_of(const std::string& literal) const;

  friend bool operator==(const Sort&, const Sort&) = default;

private:
  Sort(Kind kind, std::string name, std::vector<std::string> values)
      : kind_(kind), name_(std::move(name)), values_(std::move(values)) {}

  Kind kind_;
  std::string name_;
  std::vector<std::string> values_;
};

/// A sorted symbolic variable. Identity is the id; the sort travels along.
struct Variable {
  std::string id;
  Sort sort = Sort::boolean();

  friend bool operator==(const Variable&, const Variable&) = default;
  friend bool operator<(const Variable& a, const Variable& b) { return a.id < b.id; }
};

/// The EFM group-type enumeration {ALT, OR, OPT, MAN}.
const Sort& group_type_sort();

} // namespace efmct
