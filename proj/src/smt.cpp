#include "efmct/smt.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

extern char** environ;

namespace efmct::smt {

void SolverConfig::validate() const {
  if (command.empty())
    throw std::invalid_argument("solver command is empty");
  if (timeout.count() <= 0)
    throw std::invalid_argument("solver timeout must be positive");
}

std::string SolverConfig::command_line() const {
  std::string out;
  for (const auto& part : command)
    out += (out.empty() ? "" : " ") + part;
  return out;
}

std::vector<std::string> split_command(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string word; in >> word;)
    out.push_back(word);
  return out;
}

std::vector<std::string> solver_command_from_env(const std::vector<std::string>& fallback) {
  if (const char* env = std::getenv("EFMCT_SOLVER")) {
    auto cmd = split_command(env);
    if (!cmd.empty())
      return cmd;
  }
  return fallback;
}

const char* to_string(Status s) {
  switch (s) {
  case Status::Sat: return "sat";
  case Status::Unsat: return "unsat";
  case Status::Unknown: return "unknown";
  case Status::Timeout: return "timeout";
  case Status::SolverError: return "error";
  }
  return "?";
}

const char* to_string(Validity v) {
  switch (v) {
  case Validity::Valid: return "valid";
  case Validity::Invalid: return "invalid";
  case Validity::Unknown: return "unknown";
  case Validity::Timeout: return "timeout";
  case Validity::SolverError: return "error";
  }
  return "?";
}

// -------------------------------------------------------------- emission

namespace {

void collect_enums(const Formula& f, std::map<std::string, Sort>& out) {
  if ((f.op() == Op::EnumConst || f.op() == Op::Var) && f.leaf_sort().kind() == Sort::Kind::Enumeration)
    out.emplace(f.leaf_sort().name(), f.leaf_sort());
  for (const auto& b : f.bound())
    if (b.sort.kind() == Sort::Kind::Enumeration)
      out.emplace(b.sort.name(), b.sort);
  for (const auto& a : f.args())
    collect_enums(a, out);
}

} // namespace

std::string emit_smtlib(const Formula& f, const std::set<Variable>& decls, const ScriptOptions& opts) {
  std::map<std::string, Variable> declared;
  for (const auto& v : decls)
    declared.emplace(v.id, v);
  for (const auto& v : free_vars(f)) {
    auto it = declared.find(v.id);
    if (it == declared.end())
      throw UndeclaredVariable("free variable '" + v.id + "' is not declared");
    if (!(it->second.sort == v.sort))
      throw SortError("variable '" + v.id + "' declared as " + it->second.sort.name() + " but used as " +
                      v.sort.name());
  }

  const bool enum_int = opts.enum_encoding == EnumEncoding::Integer;
  PrintOptions print{enum_int, true};

  std::map<std::string, Sort> enums;
  collect_enums(f, enums);
  for (const auto& [id, v] : declared)
    if (v.sort.kind() == Sort::Kind::Enumeration)
      enums.emplace(v.sort.name(), v.sort);

  std::ostringstream out;
  if (opts.seed)
    out << "(set-option :random-seed " << *opts.seed << ")\n";
  if (opts.request_model)
    out << "(set-option :produce-models true)\n";
  if (!opts.logic.empty())
    out << "(set-logic " << opts.logic << ")\n";
  if (!enum_int) {
    for (const auto& [name, sort] : enums) {
      out << "(declare-datatypes ((" << smtlib_symbol(name) << " 0)) ((";
      for (std::size_t i = 0; i < sort.values().size(); ++i)
        out << (i ? " " : "") << "(" << smtlib_symbol(sort.values()[i]) << ")";
      out << ")))\n";
    }
  }
  for (const auto& [id, v] : declared)
    out << "(declare-const " << smtlib_symbol(id) << " " << smtlib_sort(v.sort, print) << ")\n";
  for (const auto& [id, v] : declared) {
    if (v.sort.kind() == Sort::Kind::Natural)
      out << "(assert (>= " << smtlib_symbol(id) << " 0))\n";
    else if (enum_int && v.sort.kind() == Sort::Kind::Enumeration)
      out << "(assert (and (>= " << smtlib_symbol(id) << " 0) (< " << smtlib_symbol(id) << " "
          << v.sort.values().size() << ")))\n";
  }
  out << "(assert " << to_smtlib(f, print) << ")\n";
  out << "(check-sat)\n";
  if (opts.request_model)
    out << "(get-model)\n";
  return out.str();
}

// -------------------------------------------------------------- processes

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe(fd) != 0)
      throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_end(0);
    close_end(1);
  }
  void close_end(int i) {
    if (fd[i] >= 0) {
      ::close(fd[i]);
      fd[i] = -1;
    }
  }
};

void ignore_sigpipe() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

SmtVerdict parse_output(const std::string& out, const std::string& err) {
  SmtVerdict v;
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos)
      continue;
    auto e = line.find_last_not_of(" \t\r");
    auto token = line.substr(b, e - b + 1);
    std::string rest((std::istreambuf_iterator<char>(lines)), std::istreambuf_iterator<char>());
    if (token == "sat") {
      v.status = Status::Sat;
      v.model = rest;
    } else if (token == "unsat") {
      v.status = Status::Unsat;
    } else if (token == "unknown") {
      v.status = Status::Unknown;
      v.model = rest;
    } else {
      v.status = Status::SolverError;
      v.diagnostic = token + "\n" + rest + err;
    }
    return v;
  }
  v.status = Status::SolverError;
  v.diagnostic = err.empty() ? "solver produced no verdict" : err;
  return v;
}

} // namespace

ProcessSolver::ProcessSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  ignore_sigpipe();
}

std::string ProcessSolver::describe() const {
  return cfg_.command_line() + " (timeout " + std::to_string(cfg_.timeout.count()) + " ms, logic " +
         (cfg_.logic.empty() ? std::string("auto") : cfg_.logic) + ")";
}

SmtVerdict ProcessSolver::check_sat(const Formula& f) {
  ScriptOptions opts{cfg_.logic, cfg_.enum_encoding, cfg_.seed, true};
  auto decls = free_vars(f);
  return run_script(emit_smtlib(f, decls, opts));
}

SmtVerdict ProcessSolver::run_script(const std::string& script) const {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto elapsed = [&] { return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start); };

  Pipe in, out, err;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.fd[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out.fd[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err.fd[1], STDERR_FILENO);
  for (int fd : {in.fd[0], in.fd[1], out.fd[0], out.fd[1], err.fd[0], err.fd[1]})
    posix_spawn_file_actions_addclose(&actions, fd);

  std::vector<char*> argv;
  for (const auto& a : cfg_.command)
    argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid = -1;
  int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    SmtVerdict v;
    v.status = Status::SolverError;
    v.diagnostic = "cannot start solver '" + cfg_.command_line() + "': " + std::strerror(rc);
    v.wall = elapsed();
    return v;
  }
  in.close_end(0);
  out.close_end(1);
  err.close_end(1);

  std::string stdout_text, stderr_text;
  std::size_t written = 0;
  bool timed_out = false;
  char buffer[4096];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    auto left = cfg_.timeout - elapsed();
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (in.fd[1] >= 0)
      fds.push_back({in.fd[1], POLLOUT, 0});
    if (out.fd[0] >= 0)
      fds.push_back({out.fd[0], POLLIN, 0});
    if (err.fd[0] >= 0)
      fds.push_back({err.fd[0], POLLIN, 0});
    int ready = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(left.count(), 100)));
    if (ready < 0 && errno != EINTR)
      break;
    for (const auto& p : fds) {
      if (!p.revents)
        continue;
      if (p.fd == in.fd[1]) {
        ssize_t n = ::write(p.fd, script.data() + written, script.size() - written);
        if (n > 0)
          written += static_cast<std::size_t>(n);
        if (n < 0 || written == script.size())
          in.close_end(1);
      } else {
        ssize_t n = ::read(p.fd, buffer, sizeof buffer);
        if (n <= 0) {
          (p.fd == out.fd[0] ? out : err).close_end(0);
        } else {
          (p.fd == out.fd[0] ? stdout_text : stderr_text).append(buffer, static_cast<std::size_t>(n));
        }
      }
    }
  }
  if (timed_out)
    ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);

  SmtVerdict v;
  if (timed_out) {
    v.status = Status::Timeout;
    v.diagnostic = stderr_text;
  } else {
    v = parse_output(stdout_text, stderr_text);
  }
  v.wall = elapsed();
  return v;
}

ValidityVerdict Solver::check_validity(const Formula& f) {
  auto sat = check_sat(lnot(f));
  ValidityVerdict out;
  out.wall = sat.wall;
  out.diagnostic = sat.diagnostic;
  switch (sat.status) {
  case Status::Unsat: out.validity = Validity::Valid; break;
  case Status::Sat:
    out.validity = Validity::Invalid;
    out.countermodel = sat.model;
    break;
  case Status::Unknown: out.validity = Validity::Unknown; break;
  case Status::Timeout: out.validity = Validity::Timeout; break;
  case Status::SolverError: out.validity = Validity::SolverError; break;
  }
  return out;
}

SmtVerdict CachingSolver::check_sat(const Formula& f) {
  const auto key = emit_smtlib(f, free_vars(f));
  {
    std::lock_guard lock(mutex_);
    ++queries_;
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto verdict = inner_->check_sat(f);
  if (verdict.status == Status::Sat || verdict.status == Status::Unsat || verdict.status == Status::Unknown) {
    std::lock_guard lock(mutex_);
    cache_.emplace(key, verdict);
  }
  return verdict;
}

std::size_t CachingSolver::queries() const {
  std::lock_guard lock(mutex_);
  return queries_;
}

std::size_t CachingSolver::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

SmtVerdict check_sat(const Formula& f, const SolverConfig& cfg) { return ProcessSolver(cfg).check_sat(f); }

ValidityVerdict check_validity(const Formula& f, const SolverConfig& cfg) {
  return ProcessSolver(cfg).check_validity(f);
}

} // namespace efmct::smt
