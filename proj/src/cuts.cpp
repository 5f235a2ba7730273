#include "hahnlab/cuts.hpp"

#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {

namespace {

// Wrap compound exponents in parentheses so "-1^-" and "((-1/9)*pi)^-" both
// read unambiguously.
std::string fmt_exp(const Exponent& e) {
  std::string s = e.str();
  if (s.find(' ') != std::string::npos || s.find('*') != std::string::npos) return "(" + s + ")";
  return s;
}

void check_increasing(const std::vector<Exponent>& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].cmp(w[i - 1]) <= 0)
      throw std::invalid_argument("witness stream must strictly increase");
}

void check_decreasing(const std::vector<Exponent>& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].cmp(w[i - 1]) >= 0)
      throw std::invalid_argument("witness stream must strictly decrease");
}

std::string list_prefix(const std::vector<Exponent>& w, std::size_t max_shown) {
  std::string out;
  for (std::size_t i = 0; i < w.size() && i < max_shown; ++i) {
    if (!out.empty()) out += ", ";
    out += w[i].str();
  }
  if (w.size() > max_shown) out += ", ...";
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cut

Cut Cut::minus_infinity(BasisPtr basis) { return Cut(std::move(basis), Kind::minus_infinity); }

Cut Cut::plus_infinity_minus(BasisPtr basis) {
  return Cut(std::move(basis), Kind::plus_infinity_minus);
}

Cut Cut::principal(Exponent gamma, Side side) {
  Cut c(gamma.ctx(), Kind::principal);
  c.gamma_ = std::move(gamma);
  c.side_ = side;
  return c;
}

Cut Cut::just_above_set(BasisPtr basis, std::vector<Exponent> sampled, bool exhausted) {
  if (sampled.empty()) throw std::invalid_argument("cut of an empty witness set");
  for (const auto& w : sampled)
    if (w.ctx() != basis) throw ContextMismatchError("witness from a different basis");
  check_increasing(sampled);
  // A finite set has a maximum, so its upper cut is principal.
  if (exhausted) return principal(sampled.back(), Side::plus);
  Cut c(std::move(basis), Kind::witness_limit);
  c.witnesses_ = std::move(sampled);
  return c;
}

Cut Cut::just_below_set(BasisPtr basis, std::vector<Exponent> sampled) {
  if (sampled.empty()) throw std::invalid_argument("cut of an empty witness set");
  for (const auto& w : sampled)
    if (w.ctx() != basis) throw ContextMismatchError("witness from a different basis");
  check_increasing(sampled);
  // Just below an increasing set is just below its first element.
  return principal(sampled.front(), Side::minus);
}

const Exponent& Cut::gamma() const {
  if (!gamma_) throw std::logic_error("cut has no principal point");
  return *gamma_;
}

Cut::Side Cut::side() const {
  if (kind_ != Kind::principal) throw std::logic_error("cut has no principal point");
  return side_;
}

const std::vector<Exponent>& Cut::witnesses() const {
  if (kind_ != Kind::witness_limit) throw std::logic_error("cut has no witness list");
  return witnesses_;
}

std::string Cut::str() const {
  switch (kind_) {
    case Kind::minus_infinity:
      return "-inf";
    case Kind::plus_infinity_minus:
      return "inf^-";
    case Kind::principal:
      return fmt_exp(*gamma_) + (side_ == Side::minus ? "^-" : "^+");
    case Kind::witness_limit:
      return "limsup{" + list_prefix(witnesses_, 4) + "}";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Comparison.  Cuts are ordered by inclusion of their left classes; for the
// supported forms that reduces to endpoint comparisons plus the one sound
// witness rule: a sampled witness at or past a point pushes the witness cut
// strictly above that point's cut.

CutCmpResult cut_cmp(const Cut& a, const Cut& b) {
  using K = Cut::Kind;
  auto decided = [](CutOrder o) { return CutCmpResult{o, 0}; };

  if (a.kind() == K::minus_infinity || b.kind() == K::minus_infinity) {
    if (a.kind() == b.kind()) return decided(CutOrder::eq);
    return decided(a.kind() == K::minus_infinity ? CutOrder::lt : CutOrder::gt);
  }
  if (a.kind() == K::plus_infinity_minus || b.kind() == K::plus_infinity_minus) {
    if (a.kind() == b.kind()) return decided(CutOrder::eq);
    // A witness set could in principle be cofinal; a finite sample cannot
    // tell, so only the principal case is decided.
    if (a.kind() == K::witness_limit || b.kind() == K::witness_limit)
      return CutCmpResult{CutOrder::inconclusive,
                          static_cast<int>((a.kind() == K::witness_limit ? a : b).witnesses().size())};
    return decided(a.kind() == K::plus_infinity_minus ? CutOrder::gt : CutOrder::lt);
  }

  if (a.is_principal() && b.is_principal()) {
    int c = a.gamma().cmp(b.gamma());
    if (c != 0) return decided(c < 0 ? CutOrder::lt : CutOrder::gt);
    if (a.side() == b.side()) return decided(CutOrder::eq);
    return decided(a.side() == Cut::Side::minus ? CutOrder::lt : CutOrder::gt);
  }

  if (a.kind() == K::witness_limit && b.is_principal()) {
    const Exponent& g = b.gamma();
    for (const Exponent& w : a.witnesses()) {
      int c = w.cmp(g);
      if (b.side() == Cut::Side::minus ? c >= 0 : c > 0) return decided(CutOrder::gt);
    }
    return CutCmpResult{CutOrder::inconclusive, static_cast<int>(a.witnesses().size())};
  }
  if (a.is_principal() && b.kind() == K::witness_limit) {
    CutCmpResult r = cut_cmp(b, a);
    if (r.order == CutOrder::gt) r.order = CutOrder::lt;
    else if (r.order == CutOrder::lt) r.order = CutOrder::gt;
    return r;
  }

  // witness vs witness
  int depth = static_cast<int>(std::min(a.witnesses().size(), b.witnesses().size()));
  return CutCmpResult{CutOrder::inconclusive, depth};
}

// ---------------------------------------------------------------------------
// Witness-family cuts.

Cut cut_from_witnesses(BasisPtr basis, const std::function<std::optional<Exponent>(int)>& vals,
                       const WitnessCutOptions& opts) {
  std::vector<Exponent> sampled;
  bool exhausted = false;
  for (int k = 0; k < opts.sample_depth; ++k) {
    auto v = vals(k);
    if (!v) {
      exhausted = true;
      break;
    }
    if (v->ctx() != basis) throw ContextMismatchError("witness from a different basis");
    if (!sampled.empty() && v->cmp(sampled.back()) <= 0)
      throw std::invalid_argument("witness stream must strictly increase");
    sampled.push_back(std::move(*v));
  }
  if (sampled.empty()) throw std::invalid_argument("cut of an empty witness set");

  if (opts.attained) {
    if (!exhausted)
      throw std::invalid_argument("attained witness stream must terminate within the sample depth");
    return Cut::principal(sampled.back(), Cut::Side::plus);
  }
  if (opts.limit_hint && !exhausted) {
    if (opts.prime < 2) throw std::invalid_argument("limit probes need the prime");
    bool ok = true;
    for (const Exponent& w : sampled)
      if (w.cmp(*opts.limit_hint) >= 0) ok = false;
    // The family must climb past every probe hint - 1/p^k.
    mpq_class step(1, static_cast<long>(opts.prime));
    mpq_class eps = step;
    for (int k = 1; ok && k <= opts.probe_depth; ++k, eps *= step) {
      Exponent probe = *opts.limit_hint - Exponent::rational(basis, eps);
      if (sampled.back().cmp(probe) <= 0) ok = false;
    }
    if (ok) return Cut::principal(*opts.limit_hint, Cut::Side::minus);
  }
  return Cut::just_above_set(std::move(basis), std::move(sampled), exhausted);
}

// ---------------------------------------------------------------------------
// FinalSegment

FinalSegment FinalSegment::above_open(Exponent gamma) {
  return FinalSegment(Kind::above_open, std::move(gamma), {});
}

FinalSegment FinalSegment::above_closed(Exponent gamma) {
  return FinalSegment(Kind::above_closed, std::move(gamma), {});
}

FinalSegment FinalSegment::generated_by(std::vector<Exponent> decreasing) {
  if (decreasing.empty()) throw std::invalid_argument("segment needs at least one witness");
  check_decreasing(decreasing);
  return FinalSegment(Kind::generated_by, std::nullopt, std::move(decreasing));
}

const Exponent& FinalSegment::gamma() const {
  if (!gamma_) throw std::logic_error("segment has no endpoint");
  return *gamma_;
}

const std::vector<Exponent>& FinalSegment::witnesses() const {
  if (kind_ != Kind::generated_by) throw std::logic_error("segment has no witness list");
  return witnesses_;
}

bool FinalSegment::contains(const Exponent& val) const {
  switch (kind_) {
    case Kind::above_open:
      return val.cmp(*gamma_) > 0;
    case Kind::above_closed:
      return val.cmp(*gamma_) >= 0;
    case Kind::generated_by:
      // Witnesses decrease, so membership means clearing the deepest sample.
      return val.cmp(witnesses_.back()) >= 0;
  }
  return false;
}

FinalSegment FinalSegment::shifted(const Exponent& delta) const {
  if (kind_ == Kind::generated_by) {
    std::vector<Exponent> w;
    w.reserve(witnesses_.size());
    for (const Exponent& x : witnesses_) w.push_back(x + delta);
    return generated_by(std::move(w));
  }
  return FinalSegment(kind_, *gamma_ + delta, {});
}

InitialSegment FinalSegment::negated() const {
  switch (kind_) {
    case Kind::above_open:
      return InitialSegment::below_open(-*gamma_);
    case Kind::above_closed:
      return InitialSegment::below_closed(-*gamma_);
    case Kind::generated_by: {
      std::vector<Exponent> w;
      w.reserve(witnesses_.size());
      for (const Exponent& x : witnesses_) w.push_back(-x);
      return InitialSegment::generated_by(std::move(w));
    }
  }
  throw std::logic_error("unreachable");
}

bool FinalSegment::same(const FinalSegment& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::generated_by) {
    if (witnesses_.size() != o.witnesses_.size()) return false;
    for (std::size_t i = 0; i < witnesses_.size(); ++i)
      if (!witnesses_[i].identical(o.witnesses_[i])) return false;
    return true;
  }
  return gamma_->identical(*o.gamma_);
}

std::string FinalSegment::str() const {
  switch (kind_) {
    case Kind::above_open:
      return "{v > " + gamma_->str() + "}";
    case Kind::above_closed:
      return "{v >= " + gamma_->str() + "}";
    case Kind::generated_by:
      return "{v >= one of {" + list_prefix(witnesses_, 4) + "}}";
  }
  return "";
}

// ---------------------------------------------------------------------------
// InitialSegment

InitialSegment InitialSegment::below_open(Exponent gamma) {
  return InitialSegment(Kind::below_open, std::move(gamma), {});
}

InitialSegment InitialSegment::below_closed(Exponent gamma) {
  return InitialSegment(Kind::below_closed, std::move(gamma), {});
}

InitialSegment InitialSegment::generated_by(std::vector<Exponent> increasing) {
  if (increasing.empty()) throw std::invalid_argument("segment needs at least one witness");
  check_increasing(increasing);
  return InitialSegment(Kind::generated_by, std::nullopt, std::move(increasing));
}

const Exponent& InitialSegment::gamma() const {
  if (!gamma_) throw std::logic_error("segment has no endpoint");
  return *gamma_;
}

const std::vector<Exponent>& InitialSegment::witnesses() const {
  if (kind_ != Kind::generated_by) throw std::logic_error("segment has no witness list");
  return witnesses_;
}

bool InitialSegment::contains(const Exponent& val) const {
  switch (kind_) {
    case Kind::below_open:
      return val.cmp(*gamma_) < 0;
    case Kind::below_closed:
      return val.cmp(*gamma_) <= 0;
    case Kind::generated_by:
      return val.cmp(witnesses_.back()) <= 0;
  }
  return false;
}

FinalSegment InitialSegment::negated() const {
  switch (kind_) {
    case Kind::below_open:
      return FinalSegment::above_open(-*gamma_);
    case Kind::below_closed:
      return FinalSegment::above_closed(-*gamma_);
    case Kind::generated_by: {
      std::vector<Exponent> w;
      w.reserve(witnesses_.size());
      for (const Exponent& x : witnesses_) w.push_back(-x);
      return FinalSegment::generated_by(std::move(w));
    }
  }
  throw std::logic_error("unreachable");
}

std::string InitialSegment::str() const {
  switch (kind_) {
    case Kind::below_open:
      return "{v < " + gamma_->str() + "}";
    case Kind::below_closed:
      return "{v <= " + gamma_->str() + "}";
    case Kind::generated_by:
      return "{v <= one of {" + list_prefix(witnesses_, 4) + "}}";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Segment algebra

FinalSegment segment_sum(const FinalSegment& a, const FinalSegment& b) {
  using K = FinalSegment::Kind;
  if (a.kind() == K::generated_by && b.kind() == K::generated_by)
    throw std::invalid_argument("sum of two witness-generated segments is unsupported");
  if (a.kind() == K::generated_by) return segment_sum(b, a);
  if (b.kind() == K::generated_by) {
    // Translating a sampled family by the endpoint under-approximates the
    // true sum by at most the sampling slack, which deeper witnesses absorb.
    return FinalSegment::generated_by([&] {
      std::vector<Exponent> w;
      for (const Exponent& x : b.witnesses()) w.push_back(x + a.gamma());
      return w;
    }());
  }
  Exponent g = a.gamma() + b.gamma();
  bool open = a.kind() == K::above_open || b.kind() == K::above_open;
  return open ? FinalSegment::above_open(std::move(g)) : FinalSegment::above_closed(std::move(g));
}

FinalSegment segment_union(const FinalSegment& a, const FinalSegment& b) {
  using K = FinalSegment::Kind;
  if (a.kind() == K::generated_by || b.kind() == K::generated_by)
    throw std::invalid_argument("union with a witness-generated segment is unsupported");
  int c = a.gamma().cmp(b.gamma());
  if (c < 0) return a;
  if (c > 0) return b;
  // Equal endpoints: the closed variant is the wider set.
  if (a.kind() == K::above_closed) return a;
  return b;
}

FinalSegment point_minus_initial(const Exponent& gamma, const Cut& d) {
  switch (d.kind()) {
    case Cut::Kind::principal:
      return d.side() == Cut::Side::minus ? FinalSegment::above_open(gamma - d.gamma())
                                          : FinalSegment::above_closed(gamma - d.gamma());
    case Cut::Kind::witness_limit: {
      std::vector<Exponent> w;
      w.reserve(d.witnesses().size());
      for (const Exponent& x : d.witnesses()) w.push_back(gamma - x);
      return FinalSegment::generated_by(std::move(w));
    }
    default:
      throw std::invalid_argument("difference against an improper cut is unsupported");
  }
}

bool ideal_contains(const FinalSegment& s, const Exponent& val) { return s.contains(val); }

}  // namespace hahnlab
