#include "hahnlab/series.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {

std::shared_ptr<const SeriesContext> SeriesContext::make(BasisPtr basis, FieldPtr field) {
  return make(std::move(basis), std::move(field), 10000, 200000);
}

std::shared_ptr<const SeriesContext> SeriesContext::make(BasisPtr basis, FieldPtr field,
                                                         long term_budget, long work_budget) {
  auto ctx = std::make_shared<SeriesContext>();
  ctx->basis = std::move(basis);
  ctx->field = std::move(field);
  ctx->term_budget = term_budget;
  ctx->work_budget = work_budget;
  return ctx;
}

namespace detail {

// Per-enumeration state threaded through the cursor tree: the requested
// upper bound and a shared work meter.
struct EnumConfig {
  std::optional<Exponent> bound;
  std::shared_ptr<long> work;
  const SeriesContext* ctx = nullptr;
};

static void tick(const EnumConfig& cfg) {
  if (--(*cfg.work) < 0)
    throw BudgetExceededError("series enumeration exceeded its work budget");
}

static std::optional<Exponent> tighter_bound(const std::optional<Exponent>& a,
                                             const std::optional<Exponent>& b, int budget) {
  if (!a) return b;
  if (!b) return a;
  return a->cmp(*b, budget) <= 0 ? a : b;
}

class TermCursor {
 public:
  virtual ~TermCursor() = default;
  virtual std::optional<Term> next() = 0;
};

class SeriesNode {
 public:
  virtual ~SeriesNode() = default;
  virtual std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const = 0;
  virtual bool known_finite() const { return false; }
  // Single-term series expose their term for product folding.
  virtual const Term* as_monomial() const { return nullptr; }
};

using NodePtr = std::shared_ptr<const SeriesNode>;

// ---------------------------------------------------------------------------
// Finite, fully materialized support.

class FiniteNode final : public SeriesNode {
 public:
  explicit FiniteNode(std::vector<Term> terms) : terms_(std::move(terms)) {}
  const std::vector<Term>& terms() const { return terms_; }
  bool known_finite() const override { return true; }
  const Term* as_monomial() const override { return terms_.size() == 1 ? &terms_[0] : nullptr; }

  class Cursor final : public TermCursor {
   public:
    Cursor(const FiniteNode* n, EnumConfig cfg) : node_(n), cfg_(std::move(cfg)) {}
    std::optional<Term> next() override {
      tick(cfg_);
      if (i_ >= node_->terms_.size()) return std::nullopt;
      const Term& t = node_->terms_[i_];
      if (cfg_.bound && t.exp.cmp(*cfg_.bound, cfg_.ctx->refine_budget) >= 0) return std::nullopt;
      ++i_;
      return t;
    }

   private:
    const FiniteNode* node_;
    EnumConfig cfg_;
    std::size_t i_ = 0;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Pointwise sum of two streams, merged lazily.  Equal exponents combine and
// may cancel; the bound keeps runs of cancellations finite.

class AddNode final : public SeriesNode {
 public:
  AddNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  bool known_finite() const override { return a_->known_finite() && b_->known_finite(); }

  class Cursor final : public TermCursor {
   public:
    Cursor(const AddNode* n, const EnumConfig& cfg)
        : cfg_(cfg), ca_(n->a_->cursor(cfg)), cb_(n->b_->cursor(cfg)) {
      ta_ = ca_->next();
      tb_ = cb_->next();
    }
    std::optional<Term> next() override {
      while (true) {
        tick(cfg_);
        if (!ta_ && !tb_) return std::nullopt;
        if (ta_ && (!tb_ || ta_->exp.cmp(tb_->exp, cfg_.ctx->refine_budget) < 0)) {
          Term r = *ta_;
          ta_ = ca_->next();
          return r;
        }
        if (tb_ && (!ta_ || tb_->exp.cmp(ta_->exp, cfg_.ctx->refine_budget) < 0)) {
          Term r = *tb_;
          tb_ = cb_->next();
          return r;
        }
        Term r{ta_->exp, ta_->coef + tb_->coef};
        ta_ = ca_->next();
        tb_ = cb_->next();
        if (!r.coef.is_zero()) return r;
      }
    }

   private:
    EnumConfig cfg_;
    std::unique_ptr<TermCursor> ca_, cb_;
    std::optional<Term> ta_, tb_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  NodePtr a_, b_;
};

// ---------------------------------------------------------------------------
// Scalar multiple by a nonzero field constant.

class ScaleNode final : public SeriesNode {
 public:
  ScaleNode(FFElem c, NodePtr inner) : c_(std::move(c)), inner_(std::move(inner)) {}
  bool known_finite() const override { return inner_->known_finite(); }

  class Cursor final : public TermCursor {
   public:
    Cursor(const ScaleNode* n, const EnumConfig& cfg) : node_(n), in_(n->inner_->cursor(cfg)) {}
    std::optional<Term> next() override {
      auto t = in_->next();
      if (!t) return std::nullopt;
      return Term{t->exp, t->coef * node_->c_};
    }

   private:
    const ScaleNode* node_;
    std::unique_ptr<TermCursor> in_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  FFElem c_;
  NodePtr inner_;
};

// ---------------------------------------------------------------------------
// Product by a single monomial: an exponent shift plus scalar factor.  Works
// lazily on infinite operands with no window.

class MonomialMulNode final : public SeriesNode {
 public:
  MonomialMulNode(Term t, NodePtr inner) : t_(std::move(t)), inner_(std::move(inner)) {}
  bool known_finite() const override { return inner_->known_finite(); }

  class Cursor final : public TermCursor {
   public:
    Cursor(const MonomialMulNode* n, const EnumConfig& cfg) : node_(n) {
      EnumConfig inner = cfg;
      if (inner.bound) inner.bound = *inner.bound - node_->t_.exp;
      in_ = node_->inner_->cursor(inner);
    }
    std::optional<Term> next() override {
      auto t = in_->next();
      if (!t) return std::nullopt;
      return Term{t->exp + node_->t_.exp, t->coef * node_->t_.coef};
    }

   private:
    const MonomialMulNode* node_;
    std::unique_ptr<TermCursor> in_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  Term t_;
  NodePtr inner_;
};

// ---------------------------------------------------------------------------
// Termwise p-th root (e, c) -> (e/p, c^{1/p}) and p-th power (e, c) -> (pe, c^p).
// Both are field isomorphisms in characteristic p, so termwise is exact.

class PthRootNode final : public SeriesNode {
 public:
  explicit PthRootNode(NodePtr inner) : inner_(std::move(inner)) {}
  bool known_finite() const override { return inner_->known_finite(); }

  class Cursor final : public TermCursor {
   public:
    Cursor(const PthRootNode* n, const EnumConfig& cfg) {
      unsigned p = cfg.ctx->field->p();
      EnumConfig inner = cfg;
      if (inner.bound) inner.bound = inner.bound->scaled(p);
      in_ = n->inner_->cursor(inner);
      p_ = p;
    }
    std::optional<Term> next() override {
      auto t = in_->next();
      if (!t) return std::nullopt;
      return Term{t->exp.scaled(mpq_class(1, p_)), t->coef.frobenius_inverse()};
    }

   private:
    std::unique_ptr<TermCursor> in_;
    unsigned p_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  NodePtr inner_;
};

class PthPowNode final : public SeriesNode {
 public:
  explicit PthPowNode(NodePtr inner) : inner_(std::move(inner)) {}
  bool known_finite() const override { return inner_->known_finite(); }

  class Cursor final : public TermCursor {
   public:
    Cursor(const PthPowNode* n, const EnumConfig& cfg) {
      p_ = cfg.ctx->field->p();
      EnumConfig inner = cfg;
      if (inner.bound) inner.bound = inner.bound->scaled(mpq_class(1, p_));
      in_ = n->inner_->cursor(inner);
    }
    std::optional<Term> next() override {
      auto t = in_->next();
      if (!t) return std::nullopt;
      return Term{t->exp.scaled(p_), t->coef.frobenius()};
    }

   private:
    std::unique_ptr<TermCursor> in_;
    unsigned p_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  NodePtr inner_;
};

// ---------------------------------------------------------------------------
// Restriction to exponents < below.

class TruncateNode final : public SeriesNode {
 public:
  TruncateNode(NodePtr inner, Exponent below) : inner_(std::move(inner)), below_(std::move(below)) {}
  bool known_finite() const override { return inner_->known_finite(); }

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    EnumConfig inner = cfg;
    inner.bound = tighter_bound(inner.bound, below_, cfg.ctx->refine_budget);
    return inner_->cursor(inner);
  }

 private:
  NodePtr inner_;
  Exponent below_;
};

// ---------------------------------------------------------------------------
// Windowed convolution of two streams, enumerated in increasing order of the
// pair sums (Young-tableau frontier).  Every pair below the window is visited
// exactly once; pairs with equal sums pop in one batch, so cancellation is
// detected locally.

class MulNode final : public SeriesNode {
 public:
  MulNode(NodePtr a, NodePtr b, Exponent below)
      : a_(std::move(a)), b_(std::move(b)), below_(std::move(below)) {}

  class Cursor final : public TermCursor {
   public:
    Cursor(const MulNode* n, const EnumConfig& cfg)
        : cfg_(cfg), bound_(*tighter_bound(cfg.bound, n->below_, cfg.ctx->refine_budget)) {
      // Peek the leading terms; either stream empty means an empty product.
      EnumConfig probe = cfg_;
      probe.bound.reset();
      auto pa = n->a_->cursor(probe);
      auto pb = n->b_->cursor(probe);
      auto a0 = pa->next();
      auto b0 = pb->next();
      if (!a0 || !b0) {
        done_ = true;
        return;
      }
      // Draw a-terms only while they can contribute below the bound, and
      // symmetrically for b.
      EnumConfig acfg = cfg_;
      acfg.bound = bound_ - b0->exp;
      EnumConfig bcfg = cfg_;
      bcfg.bound = bound_ - a0->exp;
      ca_ = n->a_->cursor(acfg);
      cb_ = n->b_->cursor(bcfg);
      if (!ensure_a(0) || !ensure_b(0)) {
        done_ = true;
        return;
      }
      frontier_.push_back(P{0, 0, aterms_[0].exp + bterms_[0].exp});
    }

    std::optional<Term> next() override {
      while (!done_) {
        tick(cfg_);
        if (frontier_.empty()) {
          done_ = true;
          break;
        }
        // Minimal pair sum; batch everything identical to it.
        std::size_t min_at = 0;
        for (std::size_t k = 1; k < frontier_.size(); ++k)
          if (frontier_[k].sum.cmp(frontier_[min_at].sum, cfg_.ctx->refine_budget) < 0) min_at = k;
        Exponent sum = frontier_[min_at].sum;
        if (sum.cmp(bound_, cfg_.ctx->refine_budget) >= 0) {
          done_ = true;
          break;
        }
        FFElem coef = FFElem::zero(cfg_.ctx->field);
        std::vector<P> batch;
        for (std::size_t k = 0; k < frontier_.size();) {
          if (frontier_[k].sum.identical(sum)) {
            batch.push_back(frontier_[k]);
            frontier_[k] = frontier_.back();
            frontier_.pop_back();
          } else {
            ++k;
          }
        }
        for (const P& p : batch) {
          coef = coef + aterms_[p.i].coef * bterms_[p.j].coef;
          if (ensure_b(p.j + 1))
            frontier_.push_back(P{p.i, p.j + 1, aterms_[p.i].exp + bterms_[p.j + 1].exp});
          if (p.j == 0 && ensure_a(p.i + 1))
            frontier_.push_back(P{p.i + 1, 0, aterms_[p.i + 1].exp + bterms_[0].exp});
        }
        if (!coef.is_zero()) return Term{sum, coef};
      }
      return std::nullopt;
    }

   private:
    struct P {
      std::size_t i, j;
      Exponent sum;
    };

    bool ensure_a(std::size_t i) {
      while (aterms_.size() <= i && !a_done_) {
        auto t = ca_->next();
        if (t) aterms_.push_back(*t);
        else a_done_ = true;
      }
      return i < aterms_.size();
    }
    bool ensure_b(std::size_t j) {
      while (bterms_.size() <= j && !b_done_) {
        auto t = cb_->next();
        if (t) bterms_.push_back(*t);
        else b_done_ = true;
      }
      return j < bterms_.size();
    }

    EnumConfig cfg_;
    Exponent bound_;
    std::unique_ptr<TermCursor> ca_, cb_;
    std::vector<Term> aterms_, bterms_;
    bool a_done_ = false, b_done_ = false;
    std::vector<P> frontier_;
    bool done_ = false;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  NodePtr a_, b_;
  Exponent below_;
};

// ---------------------------------------------------------------------------
// Sum of a (possibly unbounded) family of child series whose valuations
// strictly increase.  A child is admitted to the merge once its valuation
// could influence the next emission; increasing valuations make that check
// finite.

class SumManyNode final : public SeriesNode {
 public:
  SumManyNode(SeriesCtxPtr ctx, std::function<std::optional<HahnSeries>(int)> gen)
      : ctx_(std::move(ctx)), gen_(std::move(gen)) {}

  class Cursor final : public TermCursor {
   public:
    Cursor(const SumManyNode* n, const EnumConfig& cfg) : node_(n), cfg_(cfg) { peek(); }

    std::optional<Term> next() override {
      while (true) {
        tick(cfg_);
        // Admit children whose valuation is at or below the current minimum.
        while (!children_done_ &&
               (active_.empty() ||
                head_->exp.cmp(active_[min_at()].term.exp, cfg_.ctx->refine_budget) <= 0)) {
          active_.push_back(Entry{*head_, std::move(head_node_), std::move(head_cursor_)});
          peek();
        }
        if (active_.empty()) return std::nullopt;
        std::size_t m = min_at();
        Exponent e = active_[m].term.exp;
        FFElem coef = FFElem::zero(cfg_.ctx->field);
        for (std::size_t k = 0; k < active_.size();) {
          if (active_[k].term.exp.identical(e)) {
            coef = coef + active_[k].term.coef;
            auto t = active_[k].cur->next();
            if (t) {
              active_[k].term = *t;
              ++k;
            } else {
              active_[k] = std::move(active_.back());
              active_.pop_back();
            }
          } else {
            ++k;
          }
        }
        if (!coef.is_zero()) return Term{e, coef};
      }
    }

   private:
    struct Entry {
      Term term;
      NodePtr node;  // anchors the child; cur holds raw pointers into it
      std::unique_ptr<TermCursor> cur;
    };

    std::size_t min_at() const {
      std::size_t m = 0;
      for (std::size_t k = 1; k < active_.size(); ++k)
        if (active_[k].term.exp.cmp(active_[m].term.exp, cfg_.ctx->refine_budget) < 0) m = k;
      return m;
    }

    // Draw the head of the next child, if any.  An empty bounded cursor means
    // the child's valuation is at or past the bound; increasing valuations
    // let us stop admitting entirely.
    void peek() {
      head_.reset();
      head_node_.reset();
      head_cursor_.reset();
      while (!children_done_) {
        tick(cfg_);
        auto s = node_->gen_(next_child_++);
        if (!s) {
          children_done_ = true;
          return;
        }
        if (s->ctx() != node_->ctx_)
          throw ContextMismatchError("sum_many child from a different series context");
        NodePtr child = node_of(*s);
        auto cur = child->cursor(cfg_);
        auto t = cur->next();
        if (!t) {
          if (cfg_.bound) {
            children_done_ = true;
            return;
          }
          throw SeriesFormatError("sum_many child stream is empty");
        }
        if (last_val_ && t->exp.cmp(*last_val_, cfg_.ctx->refine_budget) <= 0)
          throw SeriesFormatError("sum_many child valuations must strictly increase");
        last_val_ = t->exp;
        head_ = t;
        head_node_ = std::move(child);
        head_cursor_ = std::move(cur);
        return;
      }
    }

    const SumManyNode* node_;
    EnumConfig cfg_;
    int next_child_ = 0;
    bool children_done_ = false;
    std::optional<Term> head_;
    NodePtr head_node_;
    std::unique_ptr<TermCursor> head_cursor_;
    std::optional<Exponent> last_val_;
    std::vector<Entry> active_;
  };

  std::unique_ptr<TermCursor> cursor(const EnumConfig& cfg) const override {
    return std::make_unique<Cursor>(this, cfg);
  }

 private:
  SeriesCtxPtr ctx_;
  std::function<std::optional<HahnSeries>(int)> gen_;
};

// ---------------------------------------------------------------------------
// Contract enforcement at the public boundary: strictly increasing exponents,
// nonzero coefficients, and the term budget.

class ValidatingCursor final : public TermCursor {
 public:
  ValidatingCursor(std::unique_ptr<TermCursor> in, const EnumConfig& cfg)
      : in_(std::move(in)), cfg_(cfg), remaining_(cfg.ctx->term_budget) {}
  std::optional<Term> next() override {
    auto t = in_->next();
    if (!t) return t;
    if (--remaining_ < 0)
      throw BudgetExceededError("series enumeration exceeded its term budget");
    if (t->coef.is_zero()) throw SeriesFormatError("zero coefficient emitted");
    if (last_ && t->exp.cmp(*last_, cfg_.ctx->refine_budget) <= 0)
      throw SeriesFormatError("term exponents must strictly increase");
    last_ = t->exp;
    return t;
  }

 private:
  std::unique_ptr<TermCursor> in_;
  EnumConfig cfg_;
  long remaining_;
  std::optional<Exponent> last_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// HahnSeries: construction folds finite inputs eagerly; infinite inputs get
// lazy nodes.

using detail::EnumConfig;
using detail::FiniteNode;
using detail::NodePtr;

namespace {

const FiniteNode* finite_node(const NodePtr& n) { return dynamic_cast<const FiniteNode*>(n.get()); }

std::unique_ptr<detail::TermCursor> open_cursor(const SeriesCtxPtr& ctx, const NodePtr& node,
                                                std::optional<Exponent> bound) {
  EnumConfig cfg{std::move(bound), std::make_shared<long>(ctx->work_budget), ctx.get()};
  return std::make_unique<detail::ValidatingCursor>(node->cursor(cfg), cfg);
}

}  // namespace

namespace detail {
NodePtr node_of(const HahnSeries& s) { return s.node_; }
}  // namespace detail

void require_same_series_ctx(const HahnSeries& a, const HahnSeries& b) {
  if (a.ctx() != b.ctx()) throw ContextMismatchError("series from different contexts");
}

HahnSeries HahnSeries::zero(SeriesCtxPtr ctx) {
  return HahnSeries(std::move(ctx), std::make_shared<FiniteNode>(std::vector<Term>{}));
}

HahnSeries HahnSeries::monomial(const SeriesCtxPtr& ctx, FFElem coef, Exponent exp) {
  if (coef.field() != ctx->field) throw ContextMismatchError("coefficient from a different field");
  if (exp.ctx() != ctx->basis) throw ContextMismatchError("exponent from a different basis");
  if (coef.is_zero()) return zero(ctx);
  std::vector<Term> t{Term{std::move(exp), std::move(coef)}};
  return HahnSeries(ctx, std::make_shared<FiniteNode>(std::move(t)));
}

HahnSeries HahnSeries::from_terms(SeriesCtxPtr ctx, std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coef.field() != ctx->field)
      throw ContextMismatchError("coefficient from a different field");
    if (terms[i].exp.ctx() != ctx->basis)
      throw ContextMismatchError("exponent from a different basis");
    if (terms[i].coef.is_zero()) throw SeriesFormatError("zero coefficient in term list");
    if (i > 0 && terms[i].exp.cmp(terms[i - 1].exp, ctx->refine_budget) <= 0)
      throw SeriesFormatError("term list exponents must strictly increase");
  }
  return HahnSeries(std::move(ctx), std::make_shared<FiniteNode>(std::move(terms)));
}

HahnSeries HahnSeries::sum_many(SeriesCtxPtr ctx,
                                std::function<std::optional<HahnSeries>(int)> child) {
  auto node = std::make_shared<detail::SumManyNode>(ctx, std::move(child));
  return HahnSeries(std::move(ctx), std::move(node));
}

bool HahnSeries::known_finite() const { return node_->known_finite(); }

HahnSeries HahnSeries::operator+(const HahnSeries& o) const {
  require_same_series_ctx(*this, o);
  const FiniteNode* fa = finite_node(node_);
  const FiniteNode* fb = finite_node(o.node_);
  if (fa && fb) {
    // Eager two-way merge.
    std::vector<Term> out;
    std::size_t i = 0, j = 0;
    const auto& a = fa->terms();
    const auto& b = fb->terms();
    while (i < a.size() || j < b.size()) {
      int c;
      if (i >= a.size()) c = 1;
      else if (j >= b.size()) c = -1;
      else c = a[i].exp.cmp(b[j].exp, ctx_->refine_budget);
      if (c < 0) out.push_back(a[i++]);
      else if (c > 0) out.push_back(b[j++]);
      else {
        FFElem s = a[i].coef + b[j].coef;
        if (!s.is_zero()) out.push_back(Term{a[i].exp, s});
        ++i, ++j;
      }
    }
    return HahnSeries(ctx_, std::make_shared<FiniteNode>(std::move(out)));
  }
  return HahnSeries(ctx_, std::make_shared<detail::AddNode>(node_, o.node_));
}

HahnSeries HahnSeries::scale(const FFElem& c) const {
  if (c.field() != ctx_->field) throw ContextMismatchError("scalar from a different field");
  if (c.is_zero()) return zero(ctx_);
  if (const FiniteNode* f = finite_node(node_)) {
    std::vector<Term> out = f->terms();
    for (auto& t : out) t.coef = t.coef * c;
    return HahnSeries(ctx_, std::make_shared<FiniteNode>(std::move(out)));
  }
  return HahnSeries(ctx_, std::make_shared<detail::ScaleNode>(c, node_));
}

HahnSeries HahnSeries::operator-() const { return scale(-FFElem::one(ctx_->field)); }

HahnSeries HahnSeries::operator-(const HahnSeries& o) const { return *this + (-o); }

HahnSeries HahnSeries::mul(const HahnSeries& o, const std::optional<Exponent>& below) const {
  require_same_series_ctx(*this, o);
  const FiniteNode* fa = finite_node(node_);
  const FiniteNode* fb = finite_node(o.node_);
  if (fa && fb) {
    // Dense convolution, then fold equal exponents.
    std::vector<Term> prods;
    for (const Term& ta : fa->terms())
      for (const Term& tb : fb->terms()) prods.push_back(Term{ta.exp + tb.exp, ta.coef * tb.coef});
    std::sort(prods.begin(), prods.end(), [&](const Term& x, const Term& y) {
      return x.exp.cmp(y.exp, ctx_->refine_budget) < 0;
    });
    std::vector<Term> out;
    for (Term& t : prods) {
      if (!out.empty() && out.back().exp.identical(t.exp)) {
        out.back().coef = out.back().coef + t.coef;
        if (out.back().coef.is_zero()) out.pop_back();
      } else if (!t.coef.is_zero()) {
        out.push_back(std::move(t));
      }
    }
    HahnSeries r(ctx_, std::make_shared<FiniteNode>(std::move(out)));
    return below ? r.truncate(*below) : r;
  }
  const Term* ma = node_->as_monomial();
  const Term* mb = o.node_->as_monomial();
  if (ma || mb) {
    const Term& m = ma ? *ma : *mb;
    const NodePtr& other = ma ? o.node_ : node_;
    HahnSeries r(ctx_, std::make_shared<detail::MonomialMulNode>(m, other));
    return below ? r.truncate(*below) : r;
  }
  if (!below)
    throw std::invalid_argument("series product of infinite operands requires a window bound");
  if (below->ctx() != ctx_->basis) throw ContextMismatchError("window from a different basis");
  return HahnSeries(ctx_, std::make_shared<detail::MulNode>(node_, o.node_, *below));
}

HahnSeries HahnSeries::truncate(const Exponent& below) const {
  if (below.ctx() != ctx_->basis) throw ContextMismatchError("bound from a different basis");
  if (const FiniteNode* f = finite_node(node_)) {
    std::vector<Term> out;
    for (const Term& t : f->terms())
      if (t.exp.cmp(below, ctx_->refine_budget) < 0) out.push_back(t);
    return HahnSeries(ctx_, std::make_shared<FiniteNode>(std::move(out)));
  }
  return HahnSeries(ctx_, std::make_shared<detail::TruncateNode>(node_, below));
}

HahnSeries HahnSeries::pth_root() const {
  unsigned p = ctx_->field->p();
  if (const FiniteNode* f = finite_node(node_)) {
    std::vector<Term> out = f->terms();
    for (auto& t : out) {
      t.exp = t.exp.scaled(mpq_class(1, p));
      t.coef = t.coef.frobenius_inverse();
    }
    return HahnSeries(ctx_, std::make_shared<FiniteNode>(std::move(out)));
  }
  return HahnSeries(ctx_, std::make_shared<detail::PthRootNode>(node_));
}

HahnSeries HahnSeries::pth_power_termwise() const {
  unsigned p = ctx_->field->p();
  if (const FiniteNode* f = finite_node(node_)) {
    std::vector<Term> out = f->terms();
    for (auto& t : out) {
      t.exp = t.exp.scaled(p);
      t.coef = t.coef.frobenius();
    }
    return HahnSeries(ctx_, std::make_shared<FiniteNode>(std::move(out)));
  }
  return HahnSeries(ctx_, std::make_shared<detail::PthPowNode>(node_));
}

std::optional<Term> HahnSeries::leading() const {
  auto cur = open_cursor(ctx_, node_, std::nullopt);
  return cur->next();
}

std::optional<Exponent> HahnSeries::val() const {
  auto t = leading();
  if (!t) return std::nullopt;
  return t->exp;
}

std::vector<Term> HahnSeries::terms_below(const Exponent& below) const {
  if (below.ctx() != ctx_->basis) throw ContextMismatchError("bound from a different basis");
  std::vector<Term> out;
  auto cur = open_cursor(ctx_, node_, below);
  while (auto t = cur->next()) out.push_back(*t);
  return out;
}

std::vector<Term> HahnSeries::first_terms(int n) const {
  std::vector<Term> out;
  auto cur = open_cursor(ctx_, node_, std::nullopt);
  for (int i = 0; i < n; ++i) {
    auto t = cur->next();
    if (!t) break;
    out.push_back(*t);
  }
  return out;
}

SupportCount HahnSeries::support_count_below(const Exponent& below, long max_count) const {
  SupportCount r;
  auto cur = open_cursor(ctx_, node_, below);
  while (auto t = cur->next()) {
    if (++r.count > max_count) {
      r.overflow = true;
      r.count = max_count;
      return r;
    }
  }
  return r;
}

std::string HahnSeries::str(int max_terms) const {
  std::vector<Term> ts = first_terms(max_terms + 1);
  if (ts.empty()) return "0";
  std::string out;
  for (int i = 0; i < static_cast<int>(ts.size()) && i < max_terms; ++i) {
    if (!out.empty()) out += " + ";
    std::string c = ts[i].coef.str();
    if (c != "1") out += (c.find('+') != std::string::npos ? "(" + c + ")" : c) + "*";
    out += "t^(" + ts[i].exp.str() + ")";
  }
  if (static_cast<int>(ts.size()) > max_terms) out += " + ...";
  return out;
}

HahnSeries as_operator(const HahnSeries& a, const Exponent& below) {
  return (a.pth_power_termwise() - a).truncate(below);
}

bool equal_below(const HahnSeries& a, const HahnSeries& b, const Exponent& below) {
  require_same_series_ctx(a, b);
  std::vector<Term> ta = a.terms_below(below);
  std::vector<Term> tb = b.terms_below(below);
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (!ta[i].exp.identical(tb[i].exp) || ta[i].coef != tb[i].coef) return false;
  return true;
}

}  // namespace hahnlab
