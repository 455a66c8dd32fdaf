#include "cqmkit/abgroup.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "snf.hpp"

namespace cqmkit {

FinAbGroup::FinAbGroup(std::vector<long long> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) raise(ErrorCode::Usage, "group needs at least one cyclic factor");
  for (long long n : orders_) {
    if (n < 1) raise(ErrorCode::Usage, "cyclic factor orders must be positive");
    if (order_ > (1LL << 40) / n) raise(ErrorCode::TooLarge, "group order too large");
    order_ *= n;
    exponent_ = std::lcm(exponent_, n);
  }
}

long long FinAbGroup::index_of(const std::vector<long long>& coords) const {
  long long idx = 0;
  for (std::size_t d = 0; d < orders_.size(); ++d) idx = idx * orders_[d] + coords[d];
  return idx;
}

std::vector<long long> FinAbGroup::coords_of(long long index) const {
  std::vector<long long> c(orders_.size());
  for (std::size_t d = orders_.size(); d-- > 0;) {
    c[d] = index % orders_[d];
    index /= orders_[d];
  }
  return c;
}

FinAbGroup FinAbGroup::parse(const std::string& spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  std::vector<long long> orders;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 'z') raise(ErrorCode::Usage, "bad group spec '" + spec + "'");
    ++i;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) raise(ErrorCode::Usage, "bad group spec '" + spec + "'");
    orders.push_back(std::stoll(s.substr(i, j - i)));
    i = j;
    if (i < s.size()) {
      if (s[i] != 'x') raise(ErrorCode::Usage, "bad group spec '" + spec + "'");
      ++i;
    }
  }
  if (orders.empty()) raise(ErrorCode::Usage, "empty group spec");
  return FinAbGroup(std::move(orders));
}

std::string FinAbGroup::spec_string() const {
  std::ostringstream os;
  for (std::size_t d = 0; d < orders_.size(); ++d) os << (d ? "x" : "") << "Z" << orders_[d];
  return os.str();
}

GroupElement::GroupElement(FinAbGroup group, std::vector<long long> coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
  if (coords_.size() != group_.rank()) raise(ErrorCode::Usage, "coordinate rank mismatch");
  for (std::size_t d = 0; d < coords_.size(); ++d) {
    long long n = group_.orders()[d];
    coords_[d] = ((coords_[d] % n) + n) % n;
  }
}

GroupElement GroupElement::zero(const FinAbGroup& g) {
  return GroupElement(g, std::vector<long long>(g.rank(), 0));
}

GroupElement GroupElement::from_index(const FinAbGroup& g, long long idx) {
  return GroupElement(g, g.coords_of(idx));
}

GroupElement operator+(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group()) raise(ErrorCode::Usage, "group mismatch");
  std::vector<long long> c(a.coords());
  for (std::size_t d = 0; d < c.size(); ++d) c[d] += b.coords()[d];
  return GroupElement(a.group(), std::move(c));
}

GroupElement operator-(const GroupElement& a, const GroupElement& b) { return a + (-b); }

GroupElement GroupElement::operator-() const {
  std::vector<long long> c(coords_);
  for (long long& x : c) x = -x;
  return GroupElement(group_, std::move(c));
}

GroupElement GroupElement::scaled(long long k) const {
  std::vector<long long> c(coords_);
  for (std::size_t d = 0; d < c.size(); ++d) {
    long long n = group_.orders()[d];
    c[d] = static_cast<long long>(((static_cast<__int128>(c[d]) * (k % n)) % n + n) % n);
  }
  return GroupElement(group_, std::move(c));
}

std::string GroupElement::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t d = 0; d < coords_.size(); ++d) os << (d ? "," : "") << coords_[d];
  os << ")";
  return os.str();
}

DualElement::DualElement(FinAbGroup group, std::vector<long long> coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
  if (coords_.size() != group_.rank()) raise(ErrorCode::Usage, "coordinate rank mismatch");
  for (std::size_t d = 0; d < coords_.size(); ++d) {
    long long n = group_.orders()[d];
    coords_[d] = ((coords_[d] % n) + n) % n;
  }
}

DualElement DualElement::trivial(const FinAbGroup& g) {
  return DualElement(g, std::vector<long long>(g.rank(), 0));
}

DualElement DualElement::from_index(const FinAbGroup& g, long long idx) {
  return DualElement(g, g.coords_of(idx));
}

DualElement operator+(const DualElement& a, const DualElement& b) {
  if (a.group() != b.group()) raise(ErrorCode::Usage, "group mismatch");
  std::vector<long long> c(a.coords());
  for (std::size_t d = 0; d < c.size(); ++d) c[d] += b.coords()[d];
  return DualElement(a.group(), std::move(c));
}

std::string DualElement::str() const {
  return GroupElement(group_, coords_).str();
}

Rat frac_mod1(const Rat& r) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(r), den = denominator(r);
  cpp_int rem = ((num % den) + den) % den;
  return Rat(rem, den);
}

Rat char_eval(const DualElement& chi, const GroupElement& g) {
  if (chi.group() != g.group()) raise(ErrorCode::Usage, "character/element group mismatch");
  Rat sum = 0;
  const auto& n = g.group().orders();
  for (std::size_t d = 0; d < n.size(); ++d)
    sum += Rat(chi.coords()[d] * g.coords()[d], n[d]);
  return frac_mod1(sum);
}

Subgroup::Subgroup(const FinAbGroup& parent, const std::vector<GroupElement>& generators)
    : parent_(parent), generators_(generators) {
  for (const GroupElement& g : generators_)
    if (g.group() != parent_) raise(ErrorCode::InvalidSubgroup, "generator outside parent group");
  member_.assign(static_cast<std::size_t>(parent_.order()), 0);
  std::vector<long long> stack{0};
  member_[0] = 1;
  while (!stack.empty()) {
    GroupElement g = GroupElement::from_index(parent_, stack.back());
    stack.pop_back();
    for (const GroupElement& h : generators_) {
      long long idx = (g + h).index();
      if (!member_[static_cast<std::size_t>(idx)]) {
        member_[static_cast<std::size_t>(idx)] = 1;
        stack.push_back(idx);
      }
    }
  }
  for (long long i = 0; i < parent_.order(); ++i)
    if (member_[static_cast<std::size_t>(i)])
      elements_.push_back(GroupElement::from_index(parent_, i));
}

Subgroup Subgroup::trivial(const FinAbGroup& parent) {
  return Subgroup(parent, std::vector<GroupElement>{});
}

Subgroup Subgroup::full(const FinAbGroup& parent) {
  std::vector<GroupElement> gens;
  for (std::size_t d = 0; d < parent.rank(); ++d) {
    std::vector<long long> c(parent.rank(), 0);
    c[d] = 1;
    gens.emplace_back(parent, std::move(c));
  }
  return Subgroup(parent, gens);
}

Subgroup Subgroup::from_elements(const FinAbGroup& parent, std::vector<GroupElement> elements) {
  return Subgroup(parent, elements);  // closure of a closed set is itself
}

bool Subgroup::contains(const GroupElement& g) const {
  if (g.group() != parent_) return false;
  return member_[static_cast<std::size_t>(g.index())] != 0;
}

bool Subgroup::operator==(const Subgroup& o) const {
  return parent_ == o.parent_ && member_ == o.member_;
}

Subgroup annihilator(const FinAbGroup& G, const Subgroup& H) {
  if (H.parent() != G) raise(ErrorCode::InvalidSubgroup, "subgroup has a different parent group");
  std::vector<GroupElement> ann;
  for (long long k = 0; k < G.order(); ++k) {
    DualElement chi = DualElement::from_index(G, k);
    bool kills = true;
    for (const GroupElement& h : H.elements())
      if (char_eval(chi, h) != 0) {
        kills = false;
        break;
      }
    if (kills) ann.push_back(GroupElement::from_index(G, k));
  }
  return Subgroup::from_elements(G, std::move(ann));
}

QuotientResult quotient(const FinAbGroup& G, const Subgroup& H) {
  if (H.parent() != G) raise(ErrorCode::InvalidSubgroup, "subgroup has a different parent group");
  const std::size_t D = G.rank();
  snf::IMat rel;
  for (std::size_t d = 0; d < D; ++d) {
    std::vector<long long> row(D, 0);
    row[d] = G.orders()[d];
    rel.push_back(std::move(row));
  }
  for (const GroupElement& h : H.elements()) {
    std::vector<long long> row(h.coords().begin(), h.coords().end());
    rel.push_back(std::move(row));
  }
  snf::Result s = snf::smith(rel);

  std::vector<long long> factors;           // invariant factors > 1
  std::vector<std::size_t> factor_cols;     // columns of V they came from
  for (std::size_t t = 0; t < D; ++t)
    if (s.diag[t] > 1) {
      factors.push_back(s.diag[t]);
      factor_cols.push_back(t);
    }
  FinAbGroup Q(factors.empty() ? std::vector<long long>{1} : factors);

  // q(x) = (x * V) mod factors, with x a row vector of coordinates
  QuotientResult res{Q, {}, {}};
  res.q_map.resize(static_cast<std::size_t>(G.order()));
  for (long long gi = 0; gi < G.order(); ++gi) {
    std::vector<long long> x = G.coords_of(gi);
    std::vector<long long> qc(factors.size(), 0);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      long long acc = 0;
      for (std::size_t d = 0; d < D; ++d) acc += x[d] * s.v[d][factor_cols[f]];
      qc[f] = ((acc % factors[f]) + factors[f]) % factors[f];
    }
    res.q_map[static_cast<std::size_t>(gi)] =
        factors.empty() ? 0 : Q.index_of(qc);
  }
  // section r(c) = (c embedded on factor columns) * Vinv, reduced into G
  res.section.resize(static_cast<std::size_t>(Q.order()));
  for (long long ci = 0; ci < Q.order(); ++ci) {
    std::vector<long long> cc = Q.coords_of(ci);
    std::vector<long long> y(D, 0);
    for (std::size_t f = 0; f < factors.size(); ++f) y[factor_cols[f]] = cc[f];
    std::vector<long long> x(D, 0);
    for (std::size_t d = 0; d < D; ++d) {
      long long acc = 0;
      for (std::size_t k = 0; k < D; ++k) acc += y[k] * s.vinv[k][d];
      long long n = G.orders()[d];
      x[d] = ((acc % n) + n) % n;
    }
    res.section[static_cast<std::size_t>(ci)] = G.index_of(x);
  }
  return res;
}

namespace {

void check_system(const EquationSystem& S, const FinAbGroup& K) {
  for (const Equation& eq : S.rows) {
    if (eq.coeffs.size() != S.variables)
      raise(ErrorCode::Usage, "equation coefficient count differs from variable count");
    if (eq.rhs.group() != K) raise(ErrorCode::Usage, "equation rhs outside the target group");
  }
}

std::optional<std::vector<GroupElement>> solve_brute(const EquationSystem& S,
                                                     const FinAbGroup& K) {
  const long long kk = K.order();
  const std::size_t M = S.variables;
  std::vector<long long> asg(M, 0);
  for (;;) {
    bool ok = true;
    for (const Equation& eq : S.rows) {
      GroupElement sum = GroupElement::zero(K);
      for (std::size_t r = 0; r < M; ++r)
        sum = sum + GroupElement::from_index(K, asg[r]).scaled(eq.coeffs[r]);
      if (!(sum == eq.rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<GroupElement> out;
      for (std::size_t r = 0; r < M; ++r) out.push_back(GroupElement::from_index(K, asg[r]));
      return out;
    }
    std::size_t pos = M;
    bool carried = true;
    while (pos > 0 && carried) {
      --pos;
      if (++asg[pos] < kk)
        carried = false;
      else
        asg[pos] = 0;
    }
    if (carried) return std::nullopt;
  }
}

}  // namespace

std::optional<std::vector<GroupElement>> solve_system_smith(const EquationSystem& S,
                                                            const FinAbGroup& K) {
  check_system(S, K);
  // the system splits over the cyclic factors of K: integer coefficients act
  // componentwise, so solve C x = a mod n_d per factor d
  const std::size_t M = S.variables, E = S.rows.size();
  std::vector<std::vector<long long>> sol(M, std::vector<long long>(K.rank(), 0));
  for (std::size_t d = 0; d < K.rank(); ++d) {
    long long n = K.orders()[d];
    snf::IMat aug(E, std::vector<long long>(M + E, 0));
    std::vector<long long> b(E, 0);
    for (std::size_t e = 0; e < E; ++e) {
      for (std::size_t r = 0; r < M; ++r) aug[e][r] = S.rows[e].coeffs[r];
      aug[e][M + e] = n;
      b[e] = S.rows[e].rhs.coords()[d];
    }
    auto x = snf::solve_integer(aug, b);
    if (!x) return std::nullopt;
    for (std::size_t r = 0; r < M; ++r) sol[r][d] = (((*x)[r] % n) + n) % n;
  }
  std::vector<GroupElement> out;
  for (std::size_t r = 0; r < M; ++r) out.emplace_back(K, sol[r]);
  return out;
}

std::optional<std::vector<GroupElement>> solve_system(const EquationSystem& S,
                                                      const FinAbGroup& K) {
  check_system(S, K);
  if (S.variables == 0) {
    for (const Equation& eq : S.rows)
      if (!(eq.rhs == GroupElement::zero(K))) return std::nullopt;
    return std::vector<GroupElement>{};
  }
  double candidates = 1;
  for (std::size_t r = 0; r < S.variables; ++r) candidates *= static_cast<double>(K.order());
  if (candidates <= 1e6) return solve_brute(S, K);
  return solve_system_smith(S, K);
}

std::optional<std::vector<TorusPoint>> solve_in_torus(const EquationSystem& S,
                                                      const FinAbGroup& K) {
  check_system(S, K);
  const std::size_t M = S.variables, E = S.rows.size();
  snf::IMat C(E, std::vector<long long>(M, 0));
  for (std::size_t e = 0; e < E; ++e)
    for (std::size_t r = 0; r < M; ++r) C[e][r] = S.rows[e].coeffs[r];
  snf::Result s = snf::smith(C);

  std::vector<TorusPoint> beta(M, TorusPoint(static_cast<std::size_t>(K.order() - 1), Rat(0)));
  for (long long knum = 1; knum < K.order(); ++knum) {
    DualElement chi = DualElement::from_index(K, knum);
    std::vector<Rat> e(E);
    for (std::size_t row = 0; row < E; ++row) e[row] = char_eval(chi, S.rows[row].rhs);
    // t = U e; y_i = t_i / d_i; consistency: integer t_i on zero rows
    std::vector<Rat> t(E, Rat(0));
    for (std::size_t i = 0; i < E; ++i)
      for (std::size_t k = 0; k < E; ++k) t[i] += Rat(s.u[i][k]) * e[k];
    std::vector<Rat> y(M, Rat(0));
    for (std::size_t i = 0; i < E; ++i) {
      long long d = i < s.diag.size() ? s.diag[i] : 0;
      if (d == 0) {
        if (frac_mod1(t[i]) != 0) return std::nullopt;
      } else if (i < M) {
        y[i] = t[i] / d;
      }
    }
    for (std::size_t r = 0; r < M; ++r) {
      Rat x(0);
      for (std::size_t k = 0; k < M; ++k) x += Rat(s.v[r][k]) * y[k];
      beta[r][static_cast<std::size_t>(knum - 1)] = frac_mod1(x);
    }
  }
  return beta;
}

long long tuple_key(const std::vector<long long>& indices, long long base) {
  long long key = 0;
  for (long long i : indices) key = key * base + i;
  return key;
}

std::vector<long long> key_tuple(long long key, long long base, int len) {
  std::vector<long long> t(static_cast<std::size_t>(len));
  for (int i = len; i-- > 0;) {
    t[static_cast<std::size_t>(i)] = key % base;
    key /= base;
  }
  return t;
}

Subgroup parse_subgroup(const FinAbGroup& G, const std::string& spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    raise(ErrorCode::Usage, "subgroup spec must be a bracketed generator list");
  s = s.substr(1, s.size() - 2);
  std::vector<GroupElement> gens;
  std::size_t i = 0;
  while (i < s.size()) {
    std::vector<long long> coords;
    if (s[i] == '(') {
      std::size_t close = s.find(')', i);
      if (close == std::string::npos) raise(ErrorCode::Usage, "unbalanced subgroup tuple");
      std::istringstream is(s.substr(i + 1, close - i - 1));
      std::string tok;
      while (std::getline(is, tok, ',')) coords.push_back(std::stoll(tok));
      i = close + 1;
    } else {
      std::size_t next = s.find(',', i);
      if (next == std::string::npos) next = s.size();
      coords.push_back(std::stoll(s.substr(i, next - i)));
      i = next;
    }
    if (coords.size() != G.rank())
      raise(ErrorCode::Usage, "generator rank differs from group rank");
    gens.emplace_back(G, std::move(coords));
    if (i < s.size()) {
      if (s[i] != ',') raise(ErrorCode::Usage, "bad subgroup spec separator");
      ++i;
    }
  }
  return Subgroup(G, gens);
}

}  // namespace cqmkit
