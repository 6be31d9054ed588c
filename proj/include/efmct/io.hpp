#pragma once

#include "efmct/rule.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace efmct::io {

inline constexpr const char* kModelFormat = "efmct-model/1";
inline constexpr const char* kRuleFormat = "efmct-rule/1";
inline constexpr const char* kAssignmentFormat = "efmct-assignment/1";

/// Malformed document. `locus` is "line L, column C" for syntax errors, a JSON
/// pointer for schema problems, or a pointer plus term offset for formulas.
class DocumentError : public std::runtime_error {
public:
  DocumentError(std::string locus, const std::string& message)
      : std::runtime_error(locus.empty() ? message : locus + ": " + message), locus_(std::move(locus)) {}
  const std::string& locus() const { return locus_; }

private:
  std::string locus_;
};

/// Parses one SMT-LIB2 term over `vars`. Numerals take the sort their
/// context demands (Natural when unconstrained); enumeration literals are
/// resolved against `enums`. Throws DocumentError with the term offset.
Formula parse_term(const std::string& text, const std::map<std::string, Variable>& vars,
                   const std::vector<Sort>& enums = {group_type_sort()});

/// Sort by document name: Bool, Real, Nat, or an enumeration of `enums`.
Sort parse_sort(const std::string& name, const std::vector<Sort>& enums);
std::string sort_name(const Sort& s);

SymbolicGraph parse_model(const std::string& text);
/// Canonical form: keys sorted, elements sorted by id, two-space indent.
std::string serialize_model(const SymbolicGraph& g);

SymbolicRule parse_rule(const std::string& text);
std::string serialize_rule(const SymbolicRule& r);

/// Slot values for `g`: {"format": ..., "values": {var: true | 12 | "3/2" | "ALT"}}.
Assignment parse_assignment(const std::string& text, const SymbolicGraph& g);
std::string serialize_assignment(const Assignment& a);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace efmct::io
