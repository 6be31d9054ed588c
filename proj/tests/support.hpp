#pragma once

#include "efmct/conflict.hpp"
#include "efmct/efm.hpp"
#include "efmct/io.hpp"

#include <atomic>
#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <memory>
#include <random>
#include <string>

#ifndef EFMCT_FIXTURE_DIR
#error "EFMCT_FIXTURE_DIR must be defined"
#endif
#ifndef EFMCT_TEST_SOLVER
#define EFMCT_TEST_SOLVER ""
#endif

namespace efmct::test {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(EFMCT_FIXTURE_DIR) / rel; }

inline SymbolicGraph load_model(const std::string& rel) { return io::parse_model(io::read_file(fixture(rel))); }
inline SymbolicRule load_rule(const std::string& name) {
  return io::parse_rule(io::read_file(fixture("rules/" + name + ".rule")));
}

inline bool have_solver() { return std::string(EFMCT_TEST_SOLVER).size() > 0; }

inline smt::SolverConfig solver_config(int timeout_ms = 10000) {
  smt::SolverConfig cfg;
  cfg.command = {EFMCT_TEST_SOLVER, "-in", "-smt2"};
  cfg.timeout = std::chrono::milliseconds(timeout_ms);
  return cfg;
}

inline std::shared_ptr<smt::Solver> make_solver(int timeout_ms = 10000) {
  return std::make_shared<smt::CachingSolver>(std::make_shared<smt::ProcessSolver>(solver_config(timeout_ms)));
}

/// Returns a fixed verdict without spawning anything; counts calls.
class ScriptedSolver final : public smt::Solver {
public:
  explicit ScriptedSolver(smt::Status s) : status_(s) {}
  smt::SmtVerdict check_sat(const Formula&) override {
    ++calls;
    smt::SmtVerdict v;
    v.status = status_;
    return v;
  }
  std::string describe() const override { return "scripted"; }
  std::atomic<std::size_t> calls{0};

private:
  smt::Status status_;
};

/// Forwards to `inner` but turns every k-th verdict (by call order) into Unknown.
class DegradingSolver final : public smt::Solver {
public:
  DegradingSolver(std::shared_ptr<smt::Solver> inner, std::size_t every) : inner_(std::move(inner)), every_(every) {}
  smt::SmtVerdict check_sat(const Formula& f) override {
    auto n = ++calls_;
    auto v = inner_->check_sat(f);
    if (every_ && n % every_ == 0)
      v.status = smt::Status::Unknown;
    return v;
  }
  std::string describe() const override { return "degraded " + inner_->describe(); }

private:
  std::shared_ptr<smt::Solver> inner_;
  std::size_t every_;
  std::atomic<std::size_t> calls_{0};
};

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

} // namespace efmct::test
