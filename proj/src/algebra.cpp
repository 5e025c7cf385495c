#include "sgq/algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

namespace sgq {

int Monomial::exponent(int gen) const {
  for (const auto& [g, e] : e_) {
    if (g == gen) return e;
    if (g > gen) break;
  }
  return 0;
}

std::optional<SignedMonomial> monomial_mul(const Monomial& a,
                                           const Monomial& b,
                                           const std::vector<int>& parity) {
  std::vector<Monomial::Entry> out;
  out.reserve(a.entries().size() + b.entries().size());

  // Koszul sign: each odd generator of b moves past every odd generator of a
  // with a strictly larger index.
  std::vector<int> a_odds, b_odds;
  for (const auto& [g, e] : a.entries())
    if (parity[g]) a_odds.push_back(g);
  for (const auto& [g, e] : b.entries())
    if (parity[g]) b_odds.push_back(g);
  long inversions = 0;
  {
    size_t i = 0;
    for (int q : b_odds) {
      while (i < a_odds.size() && a_odds[i] <= q) {
        if (a_odds[i] == q) return std::nullopt;  // odd square
        ++i;
      }
      inversions += static_cast<long>(a_odds.size() - i);
    }
  }

  const auto& ae = a.entries();
  const auto& be = b.entries();
  size_t i = 0, j = 0;
  while (i < ae.size() || j < be.size()) {
    if (j == be.size() || (i < ae.size() && ae[i].first < be[j].first)) {
      out.push_back(ae[i++]);
    } else if (i == ae.size() || be[j].first < ae[i].first) {
      out.push_back(be[j++]);
    } else {
      int g = ae[i].first;
      int e = ae[i].second + be[j].second;
      if (parity[g]) return std::nullopt;  // collision caught above, be safe
      if (e != 0) out.emplace_back(g, e);
      ++i;
      ++j;
    }
  }
  return SignedMonomial{Monomial(std::move(out)), inversions % 2 == 0 ? 1 : -1};
}

bool Monomial::divisible_by(const Monomial& d) const {
  for (const auto& [g, e] : d.e_) {
    if (e <= 0) return false;
    if (exponent(g) < e) return false;
  }
  return true;
}

Monomial Monomial::divided_by(const Monomial& d) const {
  std::vector<Entry> out;
  out.reserve(e_.size());
  for (const auto& [g, e] : e_) {
    int r = e - d.exponent(g);
    if (r != 0) out.emplace_back(g, r);
  }
  return Monomial(std::move(out));
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  size_t i = 0, j = 0;
  while (i < a.e_.size() || j < b.e_.size()) {
    int ga = i < a.e_.size() ? a.e_[i].first : INT32_MAX;
    int gb = j < b.e_.size() ? b.e_[j].first : INT32_MAX;
    int g = std::min(ga, gb);
    int ea = ga == g ? a.e_[i].second : 0;
    int eb = gb == g ? b.e_[j].second : 0;
    if (ea != eb) return ea < eb ? -1 : 1;
    if (ga == g) ++i;
    if (gb == g) ++j;
  }
  return 0;
}

namespace {

Monomial word_to_monomial(const AlgebraData& alg, const RelationSpec::Word& w) {
  std::map<int, int> exps;
  for (const auto& [name, e] : w) exps[alg.index_of(name)] += e;
  std::vector<Monomial::Entry> entries;
  for (const auto& [g, e] : exps)
    if (e != 0) entries.emplace_back(g, e);
  Monomial m{std::move(entries)};
  alg.validate(m);
  return m;
}

}  // namespace

AlgebraPtr AlgebraData::create(std::vector<GeneratorSpec> gens,
                               std::vector<RelationSpec> relations,
                               std::string name) {
  auto alg = std::shared_ptr<AlgebraData>(new AlgebraData());
  alg->name_ = std::move(name);
  alg->gens_ = std::move(gens);
  for (int i = 0; i < alg->num_generators(); ++i) {
    const auto& g = alg->gens_[i];
    if (g.name.empty()) throw BadParameter("generator with empty name");
    if (g.size_weight < 0)
      throw BadParameter("negative size_weight on generator " + g.name);
    if (!alg->index_.emplace(g.name, i).second)
      throw DuplicateGenerator(g.name);
    if (g.invertible && parity_of_degree(g.degree) == 1)
      throw OddInvertible(g.name);
    alg->parity_.push_back(parity_of_degree(g.degree));
  }

  std::set<int> used_support;
  for (const auto& rel : relations) {
    RewriteRule rule;
    rule.lhs = word_to_monomial(*alg, rel.lhs);
    if (rule.lhs.is_one() || rule.lhs.entries().size() < 1)
      throw BadRelation("left side must be a nontrivial monomial");
    for (const auto& [g, e] : rule.lhs.entries()) {
      if (e <= 0) throw BadRelation("left side needs positive exponents");
      if (alg->parity_[g] == 1)
        throw BadRelation("left side must avoid odd generators");
      if (alg->gens_[g].invertible)
        throw BadRelation("left side must avoid invertible generators");
      if (!used_support.insert(g).second)
        throw BadRelation("rules must have disjoint generator supports");
    }
    int dl = alg->degree_of(rule.lhs);
    int wl = alg->weight_of(rule.lhs);
    std::map<Monomial, Rational> acc;
    for (const auto& [c, w] : rel.rhs) {
      Monomial m = word_to_monomial(*alg, w);
      acc[m] += c;
    }
    for (const auto& [m, c] : acc) {
      if (c == 0) continue;
      if (alg->degree_of(m) != dl || alg->weight_of(m) != wl)
        throw BadRelation("relation sides differ in degree or weight");
      if (Monomial::compare(m, rule.lhs) >= 0)
        throw BadRelation("right side must be smaller in monomial order");
      rule.rhs.emplace_back(c, m);
    }
    alg->rules_.push_back(std::move(rule));
  }
  // Right sides must already be normal so one rewriting pass is final.
  for (const auto& r : alg->rules_)
    for (const auto& [c, m] : r.rhs)
      if (!alg->is_normal_form(m))
        throw BadRelation("right side must be in normal form");
  return alg;
}

int AlgebraData::index_of(std::string_view gen_name) const {
  auto it = index_.find(gen_name);
  if (it == index_.end()) throw UnknownGenerator(std::string(gen_name));
  return it->second;
}

std::optional<int> AlgebraData::find(std::string_view gen_name) const {
  auto it = index_.find(gen_name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int AlgebraData::degree_of(const Monomial& m) const {
  int d = 0;
  for (const auto& [g, e] : m.entries()) d += gens_[g].degree * e;
  return d;
}

int AlgebraData::weight_of(const Monomial& m) const {
  int w = 0;
  for (const auto& [g, e] : m.entries()) w += gens_[g].weight * e;
  return w;
}

int AlgebraData::size_of(const Monomial& m) const {
  int s = 0;
  for (const auto& [g, e] : m.entries())
    s += gens_[g].size_weight * (e < 0 ? -e : e);
  return s;
}

bool AlgebraData::is_normal_form(const Monomial& m) const {
  for (const auto& r : rules_)
    if (m.divisible_by(r.lhs)) return false;
  return true;
}

void AlgebraData::reduce_into(const Monomial& m, const Rational& coef,
                              std::map<Monomial, Rational>* out) const {
  std::vector<std::pair<Monomial, Rational>> work{{m, coef}};
  while (!work.empty()) {
    auto [cur, c] = std::move(work.back());
    work.pop_back();
    const RewriteRule* hit = nullptr;
    for (const auto& r : rules_)
      if (cur.divisible_by(r.lhs)) {
        hit = &r;
        break;
      }
    if (!hit) {
      auto it = out->find(cur);
      if (it == out->end()) {
        if (c != 0) out->emplace(std::move(cur), std::move(c));
      } else {
        it->second += c;
        if (it->second == 0) out->erase(it);
      }
      continue;
    }
    Monomial q = cur.divided_by(hit->lhs);
    for (const auto& [rc, rm] : hit->rhs) {
      auto prod = monomial_mul(q, rm, parity_);
      if (!prod) continue;
      work.emplace_back(std::move(prod->mono), c * rc * prod->sign);
    }
  }
}

std::string AlgebraData::to_string(const Monomial& m) const {
  if (m.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, e] : m.entries()) {
    if (!first) os << ' ';
    first = false;
    os << gens_[g].name;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

void AlgebraData::validate(const Monomial& m) const {
  int prev = -1;
  for (const auto& [g, e] : m.entries()) {
    if (g <= prev) throw BadParameter("monomial entries out of order");
    prev = g;
    if (g >= num_generators()) throw UnknownGenerator("index out of range");
    if (e == 0) throw BadParameter("zero exponent entry");
    if (e < 0 && !gens_[g].invertible)
      throw NegativePower(gens_[g].name);
    if (parity_[g] == 1 && e != 1)
      throw BadParameter("odd generator with exponent != 1: " + gens_[g].name);
  }
}

Element Element::constant(AlgebraPtr alg, const Rational& c) {
  Element e(std::move(alg));
  if (c != 0) e.terms_.emplace(Monomial::one(), c);
  return e;
}

Element Element::gen(const AlgebraPtr& alg, std::string_view name, int exp) {
  int g = alg->index_of(name);
  if (exp == 0) return constant(alg, 1);
  const auto& spec = alg->generator(g);
  if (exp < 0 && !spec.invertible) throw NegativePower(spec.name);
  if (parity_of_degree(spec.degree) == 1 && exp > 1) return zero(alg);
  Monomial m{{{g, exp}}};
  return from_monomial(alg, m);
}

Element Element::monomial(const AlgebraPtr& alg,
                          const std::vector<std::pair<std::string, int>>& word,
                          const Rational& coef) {
  Element out = constant(alg, coef);
  for (const auto& [name, e] : word) out = out * gen(alg, name, e);
  return out;
}

Element Element::from_monomial(AlgebraPtr alg, const Monomial& m,
                               const Rational& coef) {
  alg->validate(m);
  Element e(alg);
  if (coef != 0) alg->reduce_into(m, coef, &e.terms_);
  return e;
}

void Element::check_same_algebra(const Element& o) const {
  if (alg_ != o.alg_) throw AlgebraMismatch("elements over different algebras");
}

Element& Element::operator+=(const Element& o) {
  if (!alg_) *this = Element(o.alg_);
  if (o.alg_) check_same_algebra(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  if (!alg_) *this = Element(o.alg_);
  if (o.alg_) check_same_algebra(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Element Element::operator+(const Element& o) const {
  Element r = *this;
  r += o;
  return r;
}

Element Element::operator-(const Element& o) const {
  Element r = *this;
  r -= o;
  return r;
}

Element Element::operator-() const {
  Element r(alg_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Element Element::operator*(const Element& o) const {
  check_same_algebra(o);
  Element r(alg_);
  const auto& parity = alg_->parities();
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      auto prod = monomial_mul(ma, mb, parity);
      if (!prod) continue;
      alg_->reduce_into(prod->mono, ca * cb * prod->sign, &r.terms_);
    }
  return r;
}

Element& Element::operator*=(const Element& o) {
  *this = *this * o;
  return *this;
}

Element Element::operator*(const Rational& c) const {
  Element r(alg_);
  if (c == 0) return r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

bool Element::operator==(const Element& o) const {
  return terms_ == o.terms_;
}

Element Element::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Element r = constant(alg_, 1);
  Element base = *this;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = n > 1 ? base * base : base;
    n >>= 1;
  }
  return r;
}

Element Element::inverse() const {
  if (terms_.size() != 1) throw NotInvertible("not a single term");
  const auto& [m, c] = *terms_.begin();
  std::vector<Monomial::Entry> inv;
  for (const auto& [g, e] : m.entries()) {
    if (!alg_->generator(g).invertible)
      throw NotInvertible("generator " + alg_->generator(g).name);
    inv.emplace_back(g, -e);
  }
  Element r(alg_);
  r.terms_.emplace(Monomial(std::move(inv)), Rational(1) / c);
  return r;
}

std::optional<std::pair<int, int>> Element::bidegree() const {
  std::optional<std::pair<int, int>> dw;
  for (const auto& [m, c] : terms_) {
    std::pair<int, int> cur{alg_->degree_of(m), alg_->weight_of(m)};
    if (!dw)
      dw = cur;
    else if (*dw != cur)
      return std::nullopt;
  }
  return dw ? dw : std::optional<std::pair<int, int>>{{0, 0}};
}

int Element::degree() const {
  auto dw = bidegree();
  if (!dw) throw NonHomogeneous(str());
  return dw->first;
}

Rational Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Element::max_size() const {
  int s = 0;
  for (const auto& [m, c] : terms_) s = std::max(s, alg_->size_of(m));
  return s;
}

std::string Element::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << " * " << alg_->to_string(m);
  }
  return os.str();
}

void Element::add_term(const Monomial& m, const Rational& coef) {
  if (coef == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, coef);
  } else {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

Derivation::Derivation(AlgebraPtr alg, std::string name, int degree, int weight,
                       const std::map<std::string, Element>& values)
    : alg_(std::move(alg)), name_(std::move(name)), degree_(degree),
      weight_(weight) {
  val_.assign(alg_->num_generators(), Element::zero(alg_));
  for (const auto& [gname, v] : values) {
    int g = alg_->index_of(gname);
    if (!v.is_zero() && v.algebra() != alg_)
      throw AlgebraMismatch("derivation value over wrong algebra");
    val_[g] = v.is_zero() ? Element::zero(alg_) : v;
    auto dw = val_[g].bidegree();
    if (!dw) throw NonHomogeneous("derivation value on " + gname);
    if (!val_[g].is_zero()) {
      const auto& spec = alg_->generator(g);
      if (dw->first != spec.degree + degree_ || dw->second != spec.weight + weight_)
        throw DegreeMismatch("derivation value on " + gname);
    }
  }
  for (const auto& r : alg_->rules()) {
    Element lhs = apply_monomial(r.lhs);
    Element rhs(alg_);
    for (const auto& [c, m] : r.rhs) rhs += apply_monomial(m) * c;
    if (!(lhs == rhs))
      throw IllDefinedOnQuotient(name_ + " breaks relation " +
                                 alg_->to_string(r.lhs));
  }
}

Element Derivation::apply_monomial(const Monomial& m) const {
  Element out(alg_);
  const auto& entries = m.entries();
  int prefix_parity = 0;
  int dpar = parity_of_degree(degree_);
  for (size_t i = 0; i < entries.size(); ++i) {
    auto [g, e] = entries[i];
    if (!val_[g].is_zero()) {
      Element mid(alg_);
      if (alg_->parities()[g] == 0) {
        Monomial gpow = e == 1 ? Monomial::one()
                               : Monomial{{{g, e - 1}}};
        mid = Element::from_monomial(alg_, gpow, Rational(e)) * val_[g];
      } else {
        mid = val_[g];
      }
      std::vector<Monomial::Entry> pre(entries.begin(), entries.begin() + i);
      std::vector<Monomial::Entry> post(entries.begin() + i + 1, entries.end());
      Element term = Element::from_monomial(alg_, Monomial(std::move(pre)));
      term = term * mid;
      term = term * Element::from_monomial(alg_, Monomial(std::move(post)));
      if (dpar == 1 && prefix_parity == 1) term = -term;
      out += term;
    }
    if (alg_->parities()[g] == 1) prefix_parity ^= 1;
  }
  return out;
}

Element Derivation::operator()(const Element& e) const {
  if (!e.is_zero() && e.algebra() != alg_)
    throw AlgebraMismatch("derivation applied across algebras");
  Element out(alg_);
  for (const auto& [m, c] : e.terms()) out += apply_monomial(m) * c;
  return out;
}

Derivation Derivation::commutator(const Derivation& d1, const Derivation& d2,
                                  std::string name) {
  if (d1.alg_ != d2.alg_)
    throw AlgebraMismatch("commutator across algebras");
  int sign = parity_of_degree(d1.degree_) * parity_of_degree(d2.degree_);
  std::map<std::string, Element> values;
  for (int g = 0; g < d1.alg_->num_generators(); ++g) {
    Element v = d1(d2.val_[g]) - (sign ? -d2(d1.val_[g]) : d2(d1.val_[g]));
    values[d1.alg_->generator(g).name] = v;
  }
  return Derivation(d1.alg_, std::move(name), d1.degree_ + d2.degree_,
                    d1.weight_ + d2.weight_, values);
}

AlgebraMap::AlgebraMap(AlgebraPtr src, AlgebraPtr dst, std::string name,
                       const std::map<std::string, Element>& values)
    : src_(std::move(src)), dst_(std::move(dst)), name_(std::move(name)) {
  val_.reserve(src_->num_generators());
  for (int g = 0; g < src_->num_generators(); ++g) {
    const auto& spec = src_->generator(g);
    auto it = values.find(spec.name);
    Element v(dst_);
    if (it != values.end()) {
      v = it->second;
      if (!v.is_zero() && v.algebra() != dst_)
        throw AlgebraMismatch("map value over wrong algebra");
    } else {
      auto same = dst_->find(spec.name);
      if (!same) throw UnknownGenerator("no image given for " + spec.name);
      const auto& tgt = dst_->generator(*same);
      if (tgt.degree != spec.degree || tgt.weight != spec.weight)
        throw DegreeMismatch("default image for " + spec.name);
      v = Element::gen(dst_, spec.name);
    }
    auto dw = v.bidegree();
    if (!dw) throw NonHomogeneous("image of " + spec.name);
    if (!v.is_zero() && (dw->first != spec.degree || dw->second != spec.weight))
      throw DegreeMismatch("image of " + spec.name);
    val_.push_back(std::move(v));
  }
  for (const auto& r : src_->rules()) {
    // Apply to the raw left word, without rewriting it in the source first.
    Element lhs = apply_word(r.lhs);
    Element rhs(dst_);
    for (const auto& [c, m] : r.rhs) rhs += apply_word(m) * c;
    if (!(lhs == rhs))
      throw MapNotWellDefined(name_ + " breaks relation " +
                              src_->to_string(r.lhs));
  }
}

Element AlgebraMap::apply_word(const Monomial& m) const {
  Element out = Element::constant(dst_, 1);
  for (const auto& [g, exp] : m.entries()) out = out * val_[g].pow(exp);
  return out;
}

Element AlgebraMap::operator()(const Element& e) const {
  if (!e.is_zero() && e.algebra() != src_)
    throw AlgebraMismatch("map applied to foreign element");
  Element out(dst_);
  for (const auto& [m, c] : e.terms()) out += apply_word(m) * c;
  return out;
}

AlgebraMap AlgebraMap::compose(const AlgebraMap& g, const AlgebraMap& f,
                               std::string name) {
  if (f.dst_ != g.src_) throw AlgebraMismatch("composition mismatch");
  std::map<std::string, Element> values;
  for (int i = 0; i < f.src_->num_generators(); ++i)
    values[f.src_->generator(i).name] = g(f.val_[i]);
  return AlgebraMap(f.src_, g.dst_, std::move(name), values);
}

}  // namespace sgq
