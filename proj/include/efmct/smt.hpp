#pragma once

#include "efmct/formula.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace efmct::smt {

enum class EnumEncoding { Datatype, Integer };

struct SolverConfig {
  std::vector<std::string> command{"z3", "-in", "-smt2"};
  std::chrono::milliseconds timeout{10000};
  /// Empty string omits set-logic.
  std::string logic = "ALL";
  EnumEncoding enum_encoding = EnumEncoding::Datatype;
  std::optional<unsigned> seed;

  /// Throws std::invalid_argument for an empty command or non-positive timeout.
  void validate() const;
  std::string command_line() const;
};

/// Splits a shell-like command string on whitespace.
std::vector<std::string> split_command(const std::string& text);

/// Command from EFMCT_SOLVER when set, otherwise `fallback`.
std::vector<std::string> solver_command_from_env(const std::vector<std::string>& fallback);

enum class Status { Sat, Unsat, Unknown, Timeout, SolverError };

struct SmtVerdict {
  Status status = Status::Unknown;
  std::string diagnostic; // stderr or parse problem for SolverError
  std::string model;      // solver output after the verdict line, if any
  std::chrono::milliseconds wall{0};
};

enum class Validity { Valid, Invalid, Unknown, Timeout, SolverError };

struct ValidityVerdict {
  Validity validity = Validity::Unknown;
  std::string countermodel;
  std::string diagnostic;
  std::chrono::milliseconds wall{0};
};

const char* to_string(Status s);
const char* to_string(Validity v);

class UndeclaredVariable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ScriptOptions {
  std::string logic = "ALL";
  EnumEncoding enum_encoding = EnumEncoding::Datatype;
  std::optional<unsigned> seed;
  bool request_model = false;
};

/// Deterministic SMT-LIB2 script: datatype/sort declarations, one
/// declare-const per variable, Natural range assertions, one assert of `f`
/// and check-sat. Throws UndeclaredVariable when free_vars(f) ⊄ decls.
std::string emit_smtlib(const Formula& f, const std::set<Variable>& decls, const ScriptOptions& opts = {});

/// Solver front end used by the engine. Implementations must be callable
/// from several threads.
class Solver {
public:
  virtual ~Solver() = default;
  /// Satisfiability of `f` with its free variables as constants.
  virtual SmtVerdict check_sat(const Formula& f) = 0;
  /// check_sat of the negation, reported as validity.
  ValidityVerdict check_validity(const Formula& f);
  virtual std::string describe() const = 0;
};

/// Runs one solver process per query, SMT-LIB2 over stdin/stdout.
class ProcessSolver final : public Solver {
public:
  explicit ProcessSolver(SolverConfig cfg);
  SmtVerdict check_sat(const Formula& f) override;
  /// Runs an already emitted script.
  SmtVerdict run_script(const std::string& script) const;
  std::string describe() const override;
  const SolverConfig& config() const { return cfg_; }

private:
  SolverConfig cfg_;
};

/// Memoizes verdicts by formula text. Timeouts and errors are not cached.
class CachingSolver final : public Solver {
public:
  explicit CachingSolver(std::shared_ptr<Solver> inner) : inner_(std::move(inner)) {}
  SmtVerdict check_sat(const Formula& f) override;
  std::string describe() const override { return inner_->describe(); }
  std::size_t queries() const;
  std::size_t hits() const;

private:
  std::shared_ptr<Solver> inner_;
  mutable std::mutex mutex_;
  std::map<std::string, SmtVerdict> cache_;
  std::size_t queries_ = 0;
  std::size_t hits_ = 0;
};

SmtVerdict check_sat(const Formula& f, const SolverConfig& cfg);
ValidityVerdict check_validity(const Formula& f, const SolverConfig& cfg);

} // namespace efmct::smt
