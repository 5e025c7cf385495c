#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgq/errors.hpp"
#include "sgq/rational.hpp"

namespace sgq {

// A free graded-commutative generator. Odd generators square to zero,
// invertible ones admit negative exponents and must be even.
//
// size_weight feeds the polynomial-size bound used when a truncation window
// enumerates monomials: size(m) = sum size_weight(g) * |exponent(g)|.
struct GeneratorSpec {
  std::string name;
  int degree = 0;
  int weight = 0;
  bool invertible = false;
  int size_weight = 1;
};

inline int parity_of_degree(int degree) { return ((degree % 2) + 2) % 2; }

class AlgebraData;
using AlgebraPtr = std::shared_ptr<const AlgebraData>;

// Sorted sparse exponent vector over the generator list of some algebra.
// Entries hold (generator index, exponent), exponent nonzero, indices strictly
// increasing. The empty monomial is the unit.
class Monomial {
 public:
  using Entry = std::pair<int, int>;

  Monomial() = default;
  explicit Monomial(std::vector<Entry> entries) : e_(std::move(entries)) {}

  static Monomial one() { return Monomial{}; }

  const std::vector<Entry>& entries() const { return e_; }
  bool is_one() const { return e_.empty(); }
  int exponent(int gen) const;

  // true if every exponent of d is <= the matching exponent here and all of
  // d's exponents are positive.
  bool divisible_by(const Monomial& d) const;
  Monomial divided_by(const Monomial& d) const;

  // Position-lexicographic order: compare exponents generator by generator in
  // list order, missing entries count as zero, first difference decides and a
  // larger exponent sorts later.
  static int compare(const Monomial& a, const Monomial& b);
  bool operator==(const Monomial& o) const { return e_ == o.e_; }
  bool operator<(const Monomial& o) const { return compare(*this, o) < 0; }

 private:
  std::vector<Entry> e_;
};

struct SignedMonomial {
  Monomial mono;
  int sign;  // +1 or -1
};

// Product with Koszul sign relative to generator parities. Returns nothing
// when an odd generator collides with itself.
std::optional<SignedMonomial> monomial_mul(const Monomial& a, const Monomial& b,
                                           const std::vector<int>& parity);

// A rewrite rule lhs -> sum coef * rhs_monomial imposed on the free algebra.
struct RewriteRule {
  Monomial lhs;
  std::vector<std::pair<Rational, Monomial>> rhs;
};

// Name-based relation input for make_algebra.
struct RelationSpec {
  using Word = std::vector<std::pair<std::string, int>>;
  Word lhs;
  std::vector<std::pair<Rational, Word>> rhs;
};

class Element;

// Immutable description of a graded-commutative algebra over the rationals,
// presented by generators and a finite list of rewrite rules with pairwise
// disjoint generator supports. Shared by every element built over it.
class AlgebraData : public std::enable_shared_from_this<AlgebraData> {
 public:
  static AlgebraPtr create(std::vector<GeneratorSpec> gens,
                           std::vector<RelationSpec> relations = {},
                           std::string name = "");

  const std::string& name() const { return name_; }
  int num_generators() const { return static_cast<int>(gens_.size()); }
  const GeneratorSpec& generator(int i) const { return gens_[i]; }
  const std::vector<GeneratorSpec>& generators() const { return gens_; }
  int index_of(std::string_view gen_name) const;  // throws UnknownGenerator
  std::optional<int> find(std::string_view gen_name) const;
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const std::vector<int>& parities() const { return parity_; }

  int degree_of(const Monomial& m) const;
  int weight_of(const Monomial& m) const;
  int size_of(const Monomial& m) const;
  int parity_of(const Monomial& m) const { return parity_of_degree(degree_of(m)); }

  bool is_normal_form(const Monomial& m) const;
  // Accumulates coef * m, rewritten to normal form, into out.
  void reduce_into(const Monomial& m, const Rational& coef,
                   std::map<Monomial, Rational>* out) const;

  std::string to_string(const Monomial& m) const;

  // Checks defining invariants of a monomial over this algebra; throws.
  void validate(const Monomial& m) const;

 private:
  AlgebraData() = default;
  std::vector<GeneratorSpec> gens_;
  std::vector<int> parity_;
  std::vector<RewriteRule> rules_;
  std::map<std::string, int, std::less<>> index_;
  std::string name_;
};

// Finite rational linear combination of normal-form monomials.
class Element {
 public:
  Element() = default;
  explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}

  static Element zero(AlgebraPtr alg) { return Element(std::move(alg)); }
  static Element constant(AlgebraPtr alg, const Rational& c);
  static Element gen(const AlgebraPtr& alg, std::string_view name, int exp = 1);
  static Element monomial(const AlgebraPtr& alg,
                          const std::vector<std::pair<std::string, int>>& word,
                          const Rational& coef = 1);
  static Element from_monomial(AlgebraPtr alg, const Monomial& m,
                               const Rational& coef = 1);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element operator*(const Element& o) const;
  Element& operator*=(const Element& o);
  Element operator*(const Rational& c) const;
  friend Element operator*(const Rational& c, const Element& e) { return e * c; }
  bool operator==(const Element& o) const;

  Element pow(int n) const;      // n >= 0, or unit with invertible monomial
  Element inverse() const;       // single invertible term only

  // (degree, weight) when every term agrees, nothing when inhomogeneous.
  std::optional<std::pair<int, int>> bidegree() const;
  int degree() const;  // throws NonHomogeneous on mixed degrees
  bool is_homogeneous() const { return bidegree().has_value(); }

  Rational coefficient(const Monomial& m) const;
  int max_size() const;  // largest size_of over terms, 0 for the zero element

  std::string str() const;

  // Internal: add coef * m (already normal-form) without rewriting.
  void add_term(const Monomial& m, const Rational& coef);

 private:
  AlgebraPtr alg_;
  std::map<Monomial, Rational> terms_;
  void check_same_algebra(const Element& o) const;
};

// Graded derivation determined by its values on generators, extended by the
// Leibniz rule D(ab) = D(a) b + (-1)^{|D||a|} a D(b) and the power rule
// D(g^e) = e g^{e-1} D(g) for even generators (any integer e).
class Derivation {
 public:
  Derivation(AlgebraPtr alg, std::string name, int degree, int weight,
             const std::map<std::string, Element>& values);

  const std::string& name() const { return name_; }
  int degree() const { return degree_; }
  int weight() const { return weight_; }
  const AlgebraPtr& algebra() const { return alg_; }
  const Element& value_on(int gen) const { return val_[gen]; }

  Element operator()(const Element& e) const;

  // D1 D2 - (-1)^{|D1||D2|} D2 D1, again a derivation.
  static Derivation commutator(const Derivation& d1, const Derivation& d2,
                               std::string name);

 private:
  AlgebraPtr alg_;
  std::string name_;
  int degree_ = 0;
  int weight_ = 0;
  std::vector<Element> val_;
  Element apply_monomial(const Monomial& m) const;
};

// Degree- and weight-preserving algebra homomorphism given by generator
// images. Compatibility with the rewrite rules of the source is verified at
// construction.
class AlgebraMap {
 public:
  AlgebraMap(AlgebraPtr src, AlgebraPtr dst, std::string name,
             const std::map<std::string, Element>& values);

  const std::string& name() const { return name_; }
  const AlgebraPtr& source() const { return src_; }
  const AlgebraPtr& target() const { return dst_; }
  const Element& value_on(int gen) const { return val_[gen]; }

  Element operator()(const Element& e) const;

  // (g after f)(x) = g(f(x))
  static AlgebraMap compose(const AlgebraMap& g, const AlgebraMap& f,
                            std::string name);

 private:
  AlgebraPtr src_, dst_;
  std::string name_;
  std::vector<Element> val_;
  Element apply_word(const Monomial& m) const;
};

}  // namespace sgq
