#include "hahnlab/ramification.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {

// ---------------------------------------------------------------------------
// Symbolic expressions

namespace {

bool coef_known_zero(const HahnSeries& c) {
  return c.known_finite() && c.first_terms(1).empty();
}

// Sorts by monomial, merges duplicates, drops finitely-known-zero
// coefficients.  Lazy coefficients are never pruned.
SymExpr collect(SeriesCtxPtr ctx, std::vector<SymTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const SymTerm& a, const SymTerm& b) { return a.mono < b.mono; });
  SymExpr out{std::move(ctx), {}};
  for (SymTerm& t : terms) {
    for (auto it = t.mono.begin(); it != t.mono.end();) {
      if (it->second == 0)
        it = t.mono.erase(it);
      else if (it->second < 0)
        throw std::invalid_argument("negative power in symbolic monomial");
      else
        ++it;
    }
    if (!out.terms.empty() && out.terms.back().mono == t.mono)
      out.terms.back().coef = out.terms.back().coef + t.coef;
    else
      out.terms.push_back(std::move(t));
  }
  std::vector<SymTerm> kept;
  for (SymTerm& t : out.terms)
    if (!coef_known_zero(t.coef)) kept.push_back(std::move(t));
  out.terms = std::move(kept);
  return out;
}

void require_same_ctx(const SymExpr& a, const SymExpr& b) {
  if (a.ctx != b.ctx)
    throw std::invalid_argument("symbolic expressions from different series contexts");
}

}  // namespace

SymExpr sym_zero(SeriesCtxPtr ctx) { return SymExpr{std::move(ctx), {}}; }

SymExpr sym_const(HahnSeries c) {
  SeriesCtxPtr ctx = c.ctx();
  return collect(ctx, {SymTerm{{}, std::move(c)}});
}

SymExpr sym_symbol(SeriesCtxPtr ctx, const std::string& name) {
  HahnSeries one = HahnSeries::monomial(ctx, FFElem::one(ctx->field), Exponent::zero(ctx->basis));
  return SymExpr{std::move(ctx), {SymTerm{{{name, 1}}, std::move(one)}}};
}

SymExpr sym_add(const SymExpr& a, const SymExpr& b) {
  require_same_ctx(a, b);
  std::vector<SymTerm> terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return collect(a.ctx, std::move(terms));
}

SymExpr sym_neg(const SymExpr& a) {
  std::vector<SymTerm> terms = a.terms;
  for (SymTerm& t : terms) t.coef = -t.coef;
  return SymExpr{a.ctx, std::move(terms)};
}

SymExpr sym_sub(const SymExpr& a, const SymExpr& b) { return sym_add(a, sym_neg(b)); }

SymExpr sym_mul(const SymExpr& a, const SymExpr& b) {
  require_same_ctx(a, b);
  std::vector<SymTerm> terms;
  for (const SymTerm& x : a.terms)
    for (const SymTerm& y : b.terms) {
      SymMonomial mono = x.mono;
      for (const auto& [s, k] : y.mono) mono[s] += k;
      terms.push_back(SymTerm{std::move(mono), x.coef.mul(y.coef)});
    }
  return collect(a.ctx, std::move(terms));
}

HahnSeries sym_eval(const SymExpr& e, const std::map<std::string, HahnSeries>& env) {
  HahnSeries acc = HahnSeries::zero(e.ctx);
  for (const SymTerm& t : e.terms) {
    HahnSeries val = t.coef;
    for (const auto& [s, k] : t.mono) {
      auto it = env.find(s);
      if (it == env.end()) throw std::invalid_argument("unbound symbol " + s);
      for (int i = 0; i < k; ++i) val = val.mul(it->second);
    }
    acc = acc + val;
  }
  return acc;
}

std::string sym_str(const SymExpr& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (const SymTerm& t : e.terms) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (const auto& [s, k] : t.mono) {
      if (!mono.empty()) mono += "*";
      mono += s;
      if (k > 1) mono += "^" + std::to_string(k);
    }
    std::string coef = t.coef.str();
    if (mono.empty())
      out += coef;
    else if (coef == "1*t^(0)")
      out += mono;
    else
      out += "(" + coef + ")*" + mono;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group models

GroupModelPtr GaloisGroupModel::finish(std::shared_ptr<GaloisGroupModel> model) {
  for (const auto& [gen, table] : model->shifts_) {
    if (std::find(model->generator_names_.begin(), model->generator_names_.end(), gen) ==
        model->generator_names_.end())
      throw std::invalid_argument("shift table for unknown generator " + gen);
    for (const auto& [sym, delta] : table) {
      (void)delta;
      if (!model->field_symbols_.count(sym))
        throw std::invalid_argument("shift on undeclared symbol " + sym);
    }
  }
  return model;
}

GroupModelPtr GaloisGroupModel::elementary_abelian(
    int n, int p, std::vector<std::string> generator_names, std::set<std::string> field_symbols,
    std::map<std::string, std::map<std::string, SymExpr>> shifts) {
  if (n < 1 || p < 2) throw std::invalid_argument("elementary abelian model needs n >= 1, p >= 2");
  if (static_cast<int>(generator_names.size()) != n)
    throw std::invalid_argument("generator name count must match the rank");
  auto model = std::shared_ptr<GaloisGroupModel>(new GaloisGroupModel());
  model->family_ = Family::elementary_abelian;
  model->p_ = p;
  model->generator_names_ = std::move(generator_names);
  model->field_symbols_ = std::move(field_symbols);
  model->shifts_ = std::move(shifts);
  return finish(std::move(model));
}

GroupModelPtr GaloisGroupModel::heisenberg(
    int p, std::vector<std::string> generator_names, std::set<std::string> field_symbols,
    std::map<std::string, std::map<std::string, SymExpr>> shifts) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("the order-p^3 Heisenberg model needs an odd prime");
  if (generator_names.size() != 3)
    throw std::invalid_argument("Heisenberg model takes the three normal-form generators");
  auto model = std::shared_ptr<GaloisGroupModel>(new GaloisGroupModel());
  model->family_ = Family::heisenberg;
  model->p_ = p;
  model->generator_names_ = std::move(generator_names);
  model->field_symbols_ = std::move(field_symbols);
  model->shifts_ = std::move(shifts);
  return finish(std::move(model));
}

const std::map<std::string, SymExpr>* GaloisGroupModel::shifts_of(
    const std::string& generator) const {
  auto it = shifts_.find(generator);
  return it == shifts_.end() ? nullptr : &it->second;
}

namespace {

int mod_p(long x, int p) {
  long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

void require_rank(const GaloisGroupModel& model, const GroupElement& g) {
  if (static_cast<int>(g.exps.size()) != model.rank())
    throw std::invalid_argument("group element rank does not match the model");
}

}  // namespace

GroupElement group_identity(const GaloisGroupModel& model) {
  return GroupElement{std::vector<int>(model.rank(), 0)};
}

bool group_is_identity(const GroupElement& g) {
  return std::all_of(g.exps.begin(), g.exps.end(), [](int e) { return e == 0; });
}

GroupElement group_mul(const GaloisGroupModel& model, const GroupElement& g,
                       const GroupElement& h) {
  require_rank(model, g);
  require_rank(model, h);
  int p = model.p();
  GroupElement out{std::vector<int>(model.rank(), 0)};
  for (int i = 0; i < model.rank(); ++i) out.exps[i] = mod_p(g.exps[i] + h.exps[i], p);
  if (model.family() == GaloisGroupModel::Family::heisenberg) {
    // (iota^a tau^b sigma^c)(iota^a' tau^b' sigma^c') picks up iota^{-2 c b'}
    // when sigma^c moves past tau^b'.
    out.exps[0] = mod_p(out.exps[0] - 2L * g.exps[2] * h.exps[1], p);
  }
  return out;
}

GroupElement group_inverse(const GaloisGroupModel& model, const GroupElement& g) {
  require_rank(model, g);
  int p = model.p();
  GroupElement out{std::vector<int>(model.rank(), 0)};
  for (int i = 0; i < model.rank(); ++i) out.exps[i] = mod_p(-g.exps[i], p);
  if (model.family() == GaloisGroupModel::Family::heisenberg)
    out.exps[0] = mod_p(out.exps[0] - 2L * g.exps[2] * g.exps[1], p);
  return out;
}

std::vector<GroupElement> group_elements(const GaloisGroupModel& model) {
  std::vector<GroupElement> out;
  GroupElement cur = group_identity(model);
  int p = model.p();
  while (true) {
    out.push_back(cur);
    int i = model.rank() - 1;
    while (i >= 0 && cur.exps[i] == p - 1) cur.exps[i--] = 0;
    if (i < 0) break;
    ++cur.exps[i];
  }
  return out;
}

std::string element_str(const GaloisGroupModel& model, const GroupElement& g) {
  require_rank(model, g);
  std::string out;
  for (int i = 0; i < model.rank(); ++i) {
    if (g.exps[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += model.generator_names()[i];
    if (g.exps[i] > 1) out += "^" + std::to_string(g.exps[i]);
  }
  return out.empty() ? "id" : out;
}

namespace {

std::vector<GroupElement> closure(const GaloisGroupModel& model,
                                  const std::vector<GroupElement>& gens) {
  std::set<GroupElement> seen{group_identity(model)};
  std::deque<GroupElement> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    GroupElement x = frontier.front();
    frontier.pop_front();
    for (const GroupElement& g : gens) {
      GroupElement y = group_mul(model, g, x);
      if (seen.insert(y).second) frontier.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

std::vector<Subgroup> subgroup_enumerate(const GaloisGroupModel& model) {
  std::vector<GroupElement> all = group_elements(model);
  double order = 1;
  for (int i = 0; i < model.rank(); ++i) order *= model.p();
  if (order > 1e4) throw std::invalid_argument("group too large to enumerate subgroups");

  // Grow the subgroup lattice by closing each known subgroup with one more
  // element; every subgroup arises this way from the trivial one.
  std::map<std::vector<GroupElement>, Subgroup> found;
  Subgroup trivial{{}, {group_identity(model)}};
  found.emplace(trivial.elements, trivial);
  std::deque<Subgroup> work{trivial};
  while (!work.empty()) {
    Subgroup s = work.front();
    work.pop_front();
    for (const GroupElement& g : all) {
      if (std::binary_search(s.elements.begin(), s.elements.end(), g)) continue;
      std::vector<GroupElement> gens = s.generators;
      gens.push_back(g);
      Subgroup bigger{gens, closure(model, gens)};
      if (found.emplace(bigger.elements, bigger).second) work.push_back(bigger);
    }
  }
  std::vector<Subgroup> out;
  for (auto& [key, s] : found) out.push_back(s);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Automorphism action

namespace {

// g(term) - term for a single generator application, expanded telescopically:
// prod (x_i + d_i) - prod x_i = sum_i x_1..x_{i-1} d_i (x_{i+1}+d_{i+1})...
// No equal-series subtraction ever forms, so lazy coefficients stay safe.
SymExpr generator_diff(const GaloisGroupModel& model, const std::string& gen,
                       const SymExpr& expr) {
  const auto* table = model.shifts_of(gen);
  SymExpr total = sym_zero(expr.ctx);
  if (!table) return total;
  for (const SymTerm& t : expr.terms) {
    // Flatten the monomial into one factor per power.
    std::vector<std::string> factors;
    for (const auto& [s, k] : t.mono) {
      if (!model.field_symbols().count(s))
        throw std::invalid_argument("expression uses undeclared symbol " + s);
      for (int i = 0; i < k; ++i) factors.push_back(s);
    }
    SymExpr prefix = sym_const(t.coef);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      auto dit = table->find(factors[i]);
      if (dit != table->end()) {
        SymExpr piece = sym_mul(prefix, dit->second);
        for (std::size_t j = i + 1; j < factors.size(); ++j) {
          SymExpr shifted = sym_symbol(expr.ctx, factors[j]);
          auto djt = table->find(factors[j]);
          if (djt != table->end()) shifted = sym_add(shifted, djt->second);
          piece = sym_mul(piece, shifted);
        }
        total = sym_add(total, piece);
      }
      prefix = sym_mul(prefix, sym_symbol(expr.ctx, factors[i]));
    }
  }
  return total;
}

void validate_symbols(const GaloisGroupModel& model, const SymExpr& expr) {
  for (const SymTerm& t : expr.terms)
    for (const auto& [s, k] : t.mono) {
      (void)k;
      if (!model.field_symbols().count(s))
        throw std::invalid_argument("expression uses undeclared symbol " + s);
    }
}

// Applies g factor by factor (rightmost normal-form generator first),
// accumulating both the moved expression and the total difference g b - b.
std::pair<SymExpr, SymExpr> apply_with_diff(const GaloisGroupModel& model, const GroupElement& g,
                                            const SymExpr& expr) {
  validate_symbols(model, expr);
  SymExpr cur = expr;
  SymExpr total = sym_zero(expr.ctx);
  for (int i = model.rank() - 1; i >= 0; --i) {
    for (int rep = 0; rep < g.exps[i]; ++rep) {
      SymExpr d = generator_diff(model, model.generator_names()[i], cur);
      total = sym_add(total, d);
      cur = sym_add(cur, d);
    }
  }
  return {std::move(cur), std::move(total)};
}

}  // namespace

SymExpr apply_automorphism(const GaloisGroupModel& model, const GroupElement& g,
                           const SymExpr& expr) {
  require_rank(model, g);
  return apply_with_diff(model, g, expr).first;
}

std::vector<Exponent> i_sigma_witnesses(const GaloisGroupModel& model, const GroupElement& g,
                                        const std::vector<SymExpr>& tests,
                                        const std::map<std::string, HahnSeries>& env,
                                        const std::optional<Exponent>& window) {
  require_rank(model, g);
  std::vector<Exponent> out;
  for (const SymExpr& b : tests) {
    SymExpr diff = apply_with_diff(model, g, b).second;
    Exponent vn = val_in_window(sym_eval(diff, env), window, "numerator g b - b");
    Exponent vd = val_in_window(sym_eval(b, env), window, "test element b");
    out.push_back(vn - vd);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Segments and the comparison report

RamSegment i_h_formula(const BasisPtr& basis, const std::vector<Exponent>& s_values,
                       const DistanceWitnesses& d1, const WitnessCutOptions& d1_opts,
                       std::vector<RamEvidence> evidence, bool equality_hypotheses) {
  if (s_values.empty()) throw std::invalid_argument("empty conjugate-difference value set");
  if (d1.values.empty()) throw std::invalid_argument("empty distance witness family");
  Exponent min_s = s_values[0];
  for (const Exponent& v : s_values)
    if (v.cmp(min_s) < 0) min_s = v;
  Cut d = distance_cut(basis, d1, d1_opts);
  RamSegment out{point_minus_initial(min_s, d), std::move(evidence), equality_hypotheses};
  for (const RamEvidence& e : out.evidence)
    if (!ideal_contains(out.segment, e.value))
      throw std::invalid_argument("evidence value for " + e.element + " on " + e.test +
                                  " falls outside the segment");
  return out;
}

HCReport hc_check(const Exponent& min_s, const HahnSeries& theta,
                  const std::vector<Approximant>& samples,
                  const std::optional<Exponent>& window) {
  HCReport rep;
  rep.ok = true;
  rep.strict = true;
  for (const Approximant& a : samples) {
    Exponent value = min_s - val_in_window(theta - a.series, window, "difference theta - " + a.label);
    int sign = value.sign();
    if (sign < 0) rep.ok = false;
    if (sign <= 0) rep.strict = false;
    rep.values.emplace_back(a.label, std::move(value));
  }
  return rep;
}

RamComparison ram_set_and_compare(const std::vector<std::optional<RamSegment>>& per_subgroup,
                                  int depth, int s_theta_count) {
  RamComparison out;
  out.depth = depth;
  out.s_theta_count = s_theta_count;
  for (std::size_t i = 0; i < per_subgroup.size(); ++i) {
    if (!per_subgroup[i])
      throw std::invalid_argument("subgroup " + std::to_string(i) + " lacks a segment");
    const FinalSegment& s = per_subgroup[i]->segment;
    bool known = false;
    for (const FinalSegment& have : out.ram) known = known || have.same(s);
    if (!known) out.ram.push_back(s);
  }
  out.depth_less_than_ram = depth < static_cast<int>(out.ram.size());
  return out;
}

}  // namespace hahnlab
