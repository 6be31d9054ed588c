#include "efmct/rule.hpp"

#include "efmct/matching.hpp"

namespace efmct {

std::set<Variable> SymbolicRule::variables() const {
  std::set<Variable> out;
  for (const auto& [id, v] : lhs.variables())
    out.insert(v);
  for (const auto& [id, v] : rhs.variables())
    out.insert(v);
  return out;
}

std::vector<std::string> SymbolicRule::deleted_objects() const {
  std::vector<std::string> out;
  for (const auto& [id, o] : lhs.objects())
    if (!preserve.objects.count(id))
      out.push_back(id);
  return out;
}

std::vector<std::string> SymbolicRule::deleted_links() const {
  std::vector<std::string> out;
  for (const auto& [id, l] : lhs.links())
    if (!preserve.links.count(id))
      out.push_back(id);
  return out;
}

std::vector<std::pair<std::string, std::string>> SymbolicRule::reassigned_slots() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [l, r] : preserve.objects) {
    const auto* lo = lhs.object(l);
    const auto* ro = rhs.object(r);
    if (!lo || !ro)
      continue;
    for (const auto& [attr, v] : lo->slots) {
      auto it = ro->slots.find(attr);
      if (it != ro->slots.end() && it->second.id != v.id)
        out.emplace_back(l, attr);
    }
  }
  return out;
}

std::vector<std::string> validate_rule(const SymbolicRule& r) {
  std::vector<std::string> out;
  for (const auto& v : validate_graph(r.lhs))
    out.push_back("lhs: " + v);
  for (const auto& v : validate_graph(r.rhs))
    out.push_back("rhs: " + v);
  if (!r.lhs.same_type_graph(r.rhs))
    out.push_back("lhs and rhs are typed over different type graphs");
  if (!r.lhs.formula().is_true() || !r.rhs.formula().is_true())
    out.push_back("rule patterns must carry the formula true");

  for (const auto& [id, v] : r.lhs.variables()) {
    const auto* other = r.rhs.variable(id);
    if (other && !(other->sort == v.sort))
      out.push_back("variable '" + id + "' has different sorts in lhs and rhs");
  }

  std::set<std::string> images;
  for (const auto& [l, rr] : r.preserve.objects) {
    const auto* lo = r.lhs.object(l);
    const auto* ro = r.rhs.object(rr);
    if (!lo || !ro) {
      out.push_back("preserved object pair (" + l + ", " + rr + ") refers to a missing object");
      continue;
    }
    if (lo->type != ro->type)
      out.push_back("preserve maps " + lo->type + " '" + l + "' to " + ro->type + " '" + rr + "'");
    if (!images.insert(rr).second)
      out.push_back("preserve is not injective on '" + rr + "'");
  }
  images.clear();
  for (const auto& [l, rr] : r.preserve.links) {
    const auto* ll = r.lhs.link(l);
    const auto* rl = r.rhs.link(rr);
    if (!ll || !rl) {
      out.push_back("preserved link pair (" + l + ", " + rr + ") refers to a missing link");
      continue;
    }
    if (ll->type != rl->type)
      out.push_back("preserve maps link '" + l + "' to a link of another type");
    auto s = r.preserve.objects.find(ll->source);
    auto t = r.preserve.objects.find(ll->target);
    if (s == r.preserve.objects.end() || t == r.preserve.objects.end() || s->second != rl->source ||
        t->second != rl->target)
      out.push_back("preserved link '" + l + "' is inconsistent with its endpoints");
    if (!images.insert(rr).second)
      out.push_back("preserve is not injective on link '" + rr + "'");
  }

  const auto vars = r.variables();
  try {
    check_well_sorted(r.phi);
    for (const auto& v : free_vars(r.phi)) {
      auto it = vars.find(v);
      if (it == vars.end())
        out.push_back("phi variable '" + v.id + "' is not housed in lhs or rhs");
      else if (!(it->sort == v.sort))
        out.push_back("phi uses '" + v.id + "' with sort " + v.sort.name());
    }
  } catch (const SortError& e) {
    out.push_back(std::string("phi is ill-sorted: ") + e.what());
  }
  return out;
}

const char* to_string(Admissibility a) {
  switch (a) {
  case Admissibility::Admissible: return "admissible";
  case Admissibility::Inadmissible: return "inadmissible";
  case Admissibility::Unknown: return "unknown";
  }
  return "?";
}

AdmissibilityReport check_admissibility(const SymbolicRule& r, smt::Solver& solver) {
  AdmissibilityReport report;
  std::set<std::string> lhs_vars;
  for (const auto& [id, v] : r.lhs.variables())
    lhs_vars.insert(id);
  for (const auto& c : conjuncts(r.phi)) {
    auto fv = free_vars(c);
    bool lhs_only = std::all_of(fv.begin(), fv.end(), [&](const Variable& v) { return lhs_vars.count(v.id) > 0; });
    (lhs_only ? report.application_conditions : report.effect_constraints).push_back(c);
  }
  Formula effect = land(report.effect_constraints);
  std::vector<Variable> universal, fresh;
  for (const auto& v : free_vars(effect))
    (lhs_vars.count(v.id) ? universal : fresh).push_back(v);
  report.query = forall(universal, exists(fresh, effect));
  if (report.effect_constraints.empty()) {
    report.verdict = Admissibility::Admissible;
    report.solver.validity = smt::Validity::Valid;
    return report;
  }
  report.solver = solver.check_validity(report.query);
  switch (report.solver.validity) {
  case smt::Validity::Valid: report.verdict = Admissibility::Admissible; break;
  case smt::Validity::Invalid: report.verdict = Admissibility::Inadmissible; break;
  default: report.verdict = Admissibility::Unknown; break;
  }
  return report;
}

std::vector<Morphism> find_rule_matches(const SymbolicRule& r, const SymbolicGraph& host) {
  return find_matches(r.lhs, host);
}

const char* to_string(ApplicationStatus s) {
  switch (s) {
  case ApplicationStatus::Applied: return "applied";
  case ApplicationStatus::InvalidDangling: return "invalid-dangling";
  case ApplicationStatus::InvalidUnsat: return "invalid-unsat";
  case ApplicationStatus::UnknownSat: return "unknown-sat";
  }
  return "?";
}

namespace {

template <class Map>
std::string fresh_id(const std::string& rule, const std::string& local, const Map& taken) {
  const std::string base = rule + ":" + local;
  std::string id = base;
  for (int n = 2; taken.count(id); ++n)
    id = base + "#" + std::to_string(n);
  return id;
}

} // namespace

ApplicationResult apply(const SymbolicRule& r, const Morphism& m, const SymbolicGraph& host, smt::Solver& solver) {
  if (!r.lhs.same_type_graph(host))
    throw TypeGraphMismatch("rule '" + r.name + "' and host are typed over different type graphs");
  if (auto problems = check_morphism(m, r.lhs, host); !problems.empty())
    throw InvalidMatch("not a match of rule '" + r.name + "': " + problems.front());

  ApplicationResult result(host);

  std::set<std::string> doomed_objects, doomed_links;
  for (const auto& id : r.deleted_objects())
    doomed_objects.insert(m.objects.at(id));
  for (const auto& id : r.deleted_links())
    doomed_links.insert(m.links.at(id));
  for (const auto& [id, l] : host.links())
    if (!doomed_links.count(id) && (doomed_objects.count(l.source) || doomed_objects.count(l.target)))
      result.dangling.push_back(id);
  if (!result.dangling.empty()) {
    result.status = ApplicationStatus::InvalidDangling;
    result.diagnostic = "link '" + result.dangling.front() + "' would dangle";
    return result;
  }

  SymbolicGraph out = host;
  for (const auto& id : doomed_links)
    out.remove_link(id);
  for (const auto& id : doomed_objects)
    out.remove_object(id);

  Substitution sigma = induced_substitution(m, r.lhs, host);
  std::set<std::string> allocated;
  const auto image = [&](const Variable& v) {
    if (const auto* to = sigma.find(v.id))
      return *to;
    std::map<std::string, int> taken;
    for (const auto& [id, existing] : out.variables())
      taken.emplace(id, 0);
    for (const auto& id : allocated)
      taken.emplace(id, 0);
    Variable fresh{fresh_id(r.name, v.id, taken), v.sort};
    allocated.insert(fresh.id);
    out.add_variable(fresh);
    sigma.add(v, fresh);
    return fresh;
  };

  std::set<std::string> preserved_rhs;
  for (const auto& [l, rr] : r.preserve.objects) {
    preserved_rhs.insert(rr);
    const auto& host_id = m.objects.at(l);
    result.comatch.objects[rr] = host_id;
    const auto& lo = *r.lhs.object(l);
    for (const auto& [attr, rv] : r.rhs.object(rr)->slots) {
      auto lv = lo.slots.find(attr);
      if (lv != lo.slots.end() && lv->second.id == rv.id)
        continue;
      out.set_slot(host_id, attr, image(rv));
    }
  }
  for (const auto& [id, o] : r.rhs.objects()) {
    if (preserved_rhs.count(id))
      continue;
    Object added{fresh_id(r.name, id, out.objects()), o.type, {}};
    for (const auto& [attr, rv] : o.slots)
      added.slots.emplace(attr, image(rv));
    result.comatch.objects[id] = added.id;
    out.add_object(std::move(added));
  }

  std::set<std::string> preserved_rhs_links;
  for (const auto& [l, rr] : r.preserve.links) {
    preserved_rhs_links.insert(rr);
    result.comatch.links[rr] = m.links.at(l);
  }
  for (const auto& [id, l] : r.rhs.links()) {
    if (preserved_rhs_links.count(id))
      continue;
    Link added{fresh_id(r.name, id, out.links()), l.type, result.comatch.objects.at(l.source),
               result.comatch.objects.at(l.target)};
    result.comatch.links[id] = added.id;
    out.add_link(std::move(added));
  }

  for (const auto& v : r.variables())
    image(v);
  for (const auto& v : free_vars(r.phi))
    image(v);

  const Formula instantiated = substitute(r.phi, sigma);
  out.set_formula(land({host.formula(), instantiated}));
  result.sigma = sigma;
  result.graph = std::move(out);

  if (host.formula().is_true() && instantiated.is_true()) {
    result.sat = smt::Status::Sat;
    return result;
  }
  auto verdict = solver.check_sat(result.graph.formula());
  result.sat = verdict.status;
  switch (verdict.status) {
  case smt::Status::Sat: result.status = ApplicationStatus::Applied; break;
  case smt::Status::Unsat: result.status = ApplicationStatus::InvalidUnsat; break;
  default:
    result.status = ApplicationStatus::UnknownSat;
    result.diagnostic = std::string("solver returned ") + smt::to_string(verdict.status);
    if (!verdict.diagnostic.empty())
      result.diagnostic += ": " + verdict.diagnostic;
    break;
  }
  return result;
}

SymbolicRule identity_rule(const std::string& name, const SymbolicGraph& pattern) {
  SymbolicRule r{name, pattern, pattern, {}, Formula::boolean(true)};
  r.lhs.set_formula(Formula::boolean(true));
  r.rhs.set_formula(Formula::boolean(true));
  for (const auto& [id, o] : pattern.objects())
    r.preserve.objects.emplace(id, id);
  for (const auto& [id, l] : pattern.links())
    r.preserve.links.emplace(id, id);
  return r;
}

} // namespace efmct
