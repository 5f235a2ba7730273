#include "hahnlab/exponent.hpp"

#include <algorithm>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {

void require_same_ctx(const Exponent& a, const Exponent& b) {
  if (a.ctx() != b.ctx()) throw ContextMismatchError("exponents from different basis contexts");
}

// mpq_class leaves caller-built fractions unreduced; normalize at the
// boundary so structural equality means numeric equality.
static mpq_class canon(mpq_class q) {
  q.canonicalize();
  return q;
}

Exponent Exponent::zero(BasisPtr ctx) { return Exponent(std::move(ctx), {}); }

Exponent Exponent::rational(BasisPtr ctx, mpq_class q) {
  q = canon(std::move(q));
  Coords c;
  if (q != 0) c.emplace_back(0, std::move(q));
  return Exponent(std::move(ctx), std::move(c));
}

Exponent Exponent::single(const BasisPtr& ctx, const std::string& symbol, mpq_class q) {
  int i = ctx->index_of(symbol);
  if (i < 0) throw std::invalid_argument("unknown basis symbol " + symbol);
  q = canon(std::move(q));
  Coords c;
  if (q != 0) c.emplace_back(i, std::move(q));
  return Exponent(BasisPtr(ctx), std::move(c));
}

Exponent Exponent::make(BasisPtr ctx, Coords coords) {
  std::sort(coords.begin(), coords.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Coords merged;
  for (auto& [i, q] : coords) {
    if (i < 0 || i >= ctx->size()) throw std::out_of_range("basis symbol index");
    if (!merged.empty() && merged.back().first == i) merged.back().second += canon(q);
    else merged.emplace_back(i, canon(q));
  }
  std::erase_if(merged, [](const auto& p) { return p.second == 0; });
  return Exponent(std::move(ctx), std::move(merged));
}

mpq_class Exponent::coord(int symbol_index) const {
  for (const auto& [i, q] : coords_)
    if (i == symbol_index) return q;
  return 0;
}

Exponent Exponent::operator+(const Exponent& o) const {
  require_same_ctx(*this, o);
  Coords out;
  auto a = coords_.begin(), b = o.coords_.begin();
  while (a != coords_.end() || b != o.coords_.end()) {
    if (b == o.coords_.end() || (a != coords_.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == coords_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      mpq_class s = a->second + b->second;
      if (s != 0) out.emplace_back(a->first, std::move(s));
      ++a, ++b;
    }
  }
  return Exponent(ctx_, std::move(out));
}

Exponent Exponent::operator-() const {
  Coords out = coords_;
  for (auto& [i, q] : out) q = -q;
  return Exponent(ctx_, std::move(out));
}

Exponent Exponent::operator-(const Exponent& o) const { return *this + (-o); }

Exponent Exponent::scaled(const mpq_class& q) const {
  mpq_class f = canon(q);
  if (f == 0) return Exponent(ctx_, {});
  Coords out = coords_;
  for (auto& [i, c] : out) c *= f;
  return Exponent(ctx_, std::move(out));
}

bool Exponent::identical(const Exponent& o) const {
  return ctx_ == o.ctx_ && coords_ == o.coords_;
}

QInterval Exponent::enclosure(int level) const {
  QInterval acc = QInterval::point(0);
  for (const auto& [i, q] : coords_) acc = acc + ctx_->enclosure(i, level).scaled(q);
  return acc;
}

int Exponent::sign(int budget) const {
  if (coords_.empty()) return 0;
  // Basis values are positive, so uniform coordinate signs decide directly.
  bool any_pos = false, any_neg = false;
  for (const auto& [i, q] : coords_) (q > 0 ? any_pos : any_neg) = true;
  if (!any_neg) return 1;
  if (!any_pos) return -1;
  for (int level = 0; level <= budget; ++level) {
    int s = enclosure(level).sign();
    if (s != 0) return s;
  }
  throw RefinementBudgetError("sign of " + str() + " undecided after " +
                              std::to_string(budget) + " refinements");
}

int Exponent::cmp(const Exponent& o, int budget) const { return (*this - o).sign(budget); }

std::string Exponent::str() const {
  if (coords_.empty()) return "0";
  if (coords_.size() == 1 && coords_[0].first == 0) return coords_[0].second.get_str();
  std::string out;
  for (const auto& [i, q] : coords_) {
    if (i == 0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + q.get_str() + ")*" + ctx_->symbol(i).name;
  }
  mpq_class unit = coord(0);
  if (unit != 0) {
    if (!out.empty()) out += " + ";
    out += "(" + unit.get_str() + ")";
  }
  return out;
}

}  // namespace hahnlab
