#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqmkit/scalar.hpp"

namespace cqmkit {

// Finite abelian group in the fixed product form prod_d Z_{n_d}. Element
// indices use mixed radix with the first factor most significant, matching the
// Kronecker convention of the matrix layer.
class FinAbGroup {
public:
  explicit FinAbGroup(std::vector<long long> orders);
  const std::vector<long long>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  long long order() const { return order_; }
  long long exponent() const { return exponent_; }
  bool operator==(const FinAbGroup& o) const { return orders_ == o.orders_; }
  bool operator!=(const FinAbGroup& o) const { return !(*this == o); }

  long long index_of(const std::vector<long long>& coords) const;
  std::vector<long long> coords_of(long long index) const;

  static FinAbGroup parse(const std::string& spec);  // "Z2xZ4xZ3", case-insensitive
  std::string spec_string() const;

private:
  std::vector<long long> orders_;
  long long order_ = 1;
  long long exponent_ = 1;
};

class GroupElement {
public:
  GroupElement(FinAbGroup group, std::vector<long long> coords);
  static GroupElement zero(const FinAbGroup& g);
  static GroupElement from_index(const FinAbGroup& g, long long idx);

  const FinAbGroup& group() const { return group_; }
  const std::vector<long long>& coords() const { return coords_; }
  long long index() const { return group_.index_of(coords_); }

  friend GroupElement operator+(const GroupElement& a, const GroupElement& b);
  friend GroupElement operator-(const GroupElement& a, const GroupElement& b);
  GroupElement operator-() const;
  GroupElement scaled(long long k) const;
  bool operator==(const GroupElement& o) const {
    return group_ == o.group_ && coords_ == o.coords_;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
  std::string str() const;

private:
  FinAbGroup group_;
  std::vector<long long> coords_;
};

// Character label under the self-duality of prod_d Z_{n_d}; evaluation gives
// the exponent of e^{2 pi i ...} as a rational mod 1.
class DualElement {
public:
  DualElement(FinAbGroup group, std::vector<long long> coords);
  static DualElement trivial(const FinAbGroup& g);
  static DualElement from_index(const FinAbGroup& g, long long idx);

  const FinAbGroup& group() const { return group_; }
  const std::vector<long long>& coords() const { return coords_; }
  long long index() const { return group_.index_of(coords_); }
  friend DualElement operator+(const DualElement& a, const DualElement& b);
  bool operator==(const DualElement& o) const {
    return group_ == o.group_ && coords_ == o.coords_;
  }
  std::string str() const;

private:
  FinAbGroup group_;
  std::vector<long long> coords_;
};

// exponent k.g = sum_d k_d g_d / n_d, reduced into [0,1)
Rat char_eval(const DualElement& chi, const GroupElement& g);

class Subgroup {
public:
  Subgroup(const FinAbGroup& parent, const std::vector<GroupElement>& generators);
  static Subgroup trivial(const FinAbGroup& parent);
  static Subgroup full(const FinAbGroup& parent);
  static Subgroup from_elements(const FinAbGroup& parent, std::vector<GroupElement> elements);

  const FinAbGroup& parent() const { return parent_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const std::vector<GroupElement>& elements() const { return elements_; }  // sorted by index
  long long order() const { return static_cast<long long>(elements_.size()); }
  bool contains(const GroupElement& g) const;
  bool operator==(const Subgroup& o) const;

private:
  Subgroup(FinAbGroup parent) : parent_(std::move(parent)) {}
  FinAbGroup parent_;
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> elements_;
  std::vector<char> member_;
};

struct Equation {
  std::vector<long long> coeffs;
  GroupElement rhs;
};

struct EquationSystem {
  std::size_t variables = 0;
  std::vector<Equation> rows;
};

// characters of G vanishing on H, as a subgroup of the (self-dual) group
Subgroup annihilator(const FinAbGroup& G, const Subgroup& H);

struct QuotientResult {
  FinAbGroup group;               // invariant-factor form of G/H
  std::vector<long long> q_map;   // element index in G -> element index in quotient
  std::vector<long long> section; // quotient index -> G index, q(section(c)) = c
};
QuotientResult quotient(const FinAbGroup& G, const Subgroup& H);

// exact decision; brute force up to 10^6 candidates, Smith-form solve beyond
std::optional<std::vector<GroupElement>> solve_system(const EquationSystem& S, const FinAbGroup& K);
// the non-enumerating path, exposed so tests can cross-check it against brute force
std::optional<std::vector<GroupElement>> solve_system_smith(const EquationSystem& S,
                                                            const FinAbGroup& K);
// fractional part, reduced into [0,1)
Rat frac_mod1(const Rat& r);

// One torus coordinate per nontrivial character of K, listed in element-index
// order; solves the system after embedding rhs elements as character exponent
// tuples. Absent iff the integer consistency condition fails.
using TorusPoint = std::vector<Rat>;
std::optional<std::vector<TorusPoint>> solve_in_torus(const EquationSystem& S,
                                                      const FinAbGroup& K);

// flat keys for outcome tuples over K^len
long long tuple_key(const std::vector<long long>& indices, long long base);
std::vector<long long> key_tuple(long long key, long long base, int len);

// subgroup generated by random elements; helper shared by tests and the CLI
Subgroup parse_subgroup(const FinAbGroup& G, const std::string& spec);  // "[(1,1,0),(0,0,1)]"

}  // namespace cqmkit
