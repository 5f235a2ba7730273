#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hahnlab/exponent.hpp"
#include "hahnlab/finite_field.hpp"

namespace hahnlab {

// One term c * t^e with c nonzero.
struct Term {
  Exponent exp;
  FFElem coef;
};

// Shared environment for a family of series: the exponent basis, the
// coefficient field, and enumeration budgets.  Budgets bound the work a
// single enumeration may perform; exceeding one raises BudgetExceededError,
// which is a legitimate outcome for streams with infinite support below a
// bound, not a crash.
struct SeriesContext {
  BasisPtr basis;
  FieldPtr field;
  long term_budget = 10000;       // max terms materialized per enumeration
  long work_budget = 200000;      // max merge/convolution steps per enumeration
  int refine_budget = kDefaultRefineBudget;

  static std::shared_ptr<const SeriesContext> make(BasisPtr basis, FieldPtr field);
  static std::shared_ptr<const SeriesContext> make(BasisPtr basis, FieldPtr field,
                                                   long term_budget, long work_budget);
};

using SeriesCtxPtr = std::shared_ptr<const SeriesContext>;

class HahnSeries;

namespace detail {
class SeriesNode;
std::shared_ptr<const SeriesNode> node_of(const HahnSeries& s);
}

// Result of counting support below a bound.
struct SupportCount {
  long count = 0;
  bool overflow = false;  // more than the requested maximum
};

// Generalized power series with well-ordered support, represented as a lazy,
// restartable stream of terms in strictly increasing exponent order with
// nonzero coefficients.  Values are immutable; every operation builds a new
// description and evaluation happens on enumeration.
//
// Enumeration below a bound terminates whenever the true support below that
// bound is finite (budgets permitting).  Unbounded enumeration of streams
// whose terms cancel indefinitely ends in BudgetExceededError.
class HahnSeries {
 public:
  static HahnSeries zero(SeriesCtxPtr ctx);
  static HahnSeries monomial(const SeriesCtxPtr& ctx, FFElem coef, Exponent exp);
  // Validates strictly increasing exponents and nonzero coefficients.
  static HahnSeries from_terms(SeriesCtxPtr ctx, std::vector<Term> terms);
  // sum of children k = 0, 1, ... (stop at nullopt); children must be nonzero
  // with strictly increasing valuations.  The stream is checked lazily.
  static HahnSeries sum_many(SeriesCtxPtr ctx,
                             std::function<std::optional<HahnSeries>(int)> child);

  const SeriesCtxPtr& ctx() const { return ctx_; }

  HahnSeries operator+(const HahnSeries& o) const;
  HahnSeries operator-(const HahnSeries& o) const;
  HahnSeries operator-() const;
  HahnSeries scale(const FFElem& c) const;  // c may be zero (gives the zero series)

  // Product.  A window is required unless both operands are known finite or
  // one is a monomial; without it the convolution cannot be proven to
  // terminate.
  HahnSeries mul(const HahnSeries& o, const std::optional<Exponent>& below = std::nullopt) const;

  // Terms with exponent < below, as a lazy series.
  HahnSeries truncate(const Exponent& below) const;

  // Termwise maps; exact because the coefficient field is perfect and
  // char = p: (sum c t^e)^p = sum c^p t^{pe}.
  HahnSeries pth_root() const;
  HahnSeries pth_power_termwise() const;

  // Least exponent of the support, or nullopt for the zero series.
  std::optional<Exponent> val() const;
  std::optional<Term> leading() const;

  // Materializations.
  std::vector<Term> terms_below(const Exponent& below) const;
  std::vector<Term> first_terms(int n) const;
  SupportCount support_count_below(const Exponent& below, long max_count) const;

  bool known_finite() const;

  // "2*t^(-1) + t^(-1/3)"; at most max_terms are shown, then " + ...".
  std::string str(int max_terms = 8) const;

 private:
  HahnSeries(SeriesCtxPtr ctx, std::shared_ptr<const detail::SeriesNode> node)
      : ctx_(std::move(ctx)), node_(std::move(node)) {}

  friend std::shared_ptr<const detail::SeriesNode> detail::node_of(const HahnSeries& s);

  SeriesCtxPtr ctx_;
  std::shared_ptr<const detail::SeriesNode> node_;
};

// a^p - a restricted below the window bound.  The subtraction telescopes for
// the towers this kernel is used on, so the windowed stream is finite.
HahnSeries as_operator(const HahnSeries& a, const Exponent& below);

// Termwise equality of the materialized windows.
bool equal_below(const HahnSeries& a, const HahnSeries& b, const Exponent& below);

void require_same_series_ctx(const HahnSeries& a, const HahnSeries& b);

}  // namespace hahnlab
