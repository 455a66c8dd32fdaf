#include "cqmkit/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cqmkit/error.hpp"

namespace cqmkit {

namespace {

double to_double(const Rat& r) { return r.convert_to<double>(); }

bool in_support(const Rat& w, bool exact) {
  if (exact) return w != 0;
  return std::abs(to_double(w)) > tolerance();
}

struct VarLayout {
  std::vector<std::size_t> offset;  // per party
  std::size_t total = 0;
};

VarLayout layout_of(const Scenario& sc) {
  VarLayout l;
  for (std::size_t j = 0; j < sc.parties; ++j) {
    l.offset.push_back(l.total);
    l.total += sc.choices[j];
  }
  return l;
}

// assignment search order: walk the constraints, appending unseen variables;
// each constraint becomes checkable at the position of its last variable
struct SearchSetup {
  std::vector<std::size_t> order;                  // position -> var id
  std::vector<long long> pos_of;                   // var id -> position, -1 unseen
  std::vector<std::vector<std::size_t>> closures;  // position -> constraint ids
};

SearchSetup build_order(std::size_t total_vars, const std::vector<std::vector<std::size_t>>& cons) {
  SearchSetup s;
  s.pos_of.assign(total_vars, -1);
  for (const std::vector<std::size_t>& con : cons)
    for (std::size_t v : con)
      if (s.pos_of[v] < 0) {
        s.pos_of[v] = static_cast<long long>(s.order.size());
        s.order.push_back(v);
      }
  s.closures.resize(s.order.size());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    long long close = -1;
    for (std::size_t v : cons[i]) close = std::max(close, s.pos_of[v]);
    if (close >= 0) s.closures[static_cast<std::size_t>(close)].push_back(i);
  }
  return s;
}

// lexicographic DFS over the ordered variables; emit returns true to stop
bool dfs(const SearchSetup& s, long long domain, std::size_t p, std::vector<long long>& val,
         const std::vector<std::function<bool(const std::vector<long long>&)>>& check,
         const std::function<bool(const std::vector<long long>&)>& emit) {
  if (p == s.order.size()) return emit(val);
  for (long long v = 0; v < domain; ++v) {
    val[s.order[p]] = v;
    bool ok = true;
    for (std::size_t c : s.closures[p])
      if (!check[c](val)) {
        ok = false;
        break;
      }
    if (ok && dfs(s, domain, p + 1, val, check, emit)) return true;
  }
  val[s.order[p]] = 0;
  return false;
}

// context supports as flat-key masks when small enough, else tuple sets
struct SupportIndex {
  bool use_mask = false;
  std::vector<char> mask;
  std::set<std::vector<long long>> tuples;
  std::vector<long long> powers;  // party -> |K|^(N-1-j)

  bool contains_flat(long long key) const { return mask[static_cast<std::size_t>(key)] != 0; }
};

std::vector<SupportIndex> index_supports(const EmpiricalModel& em) {
  const long long d = em.scenario.outcome_group.order();
  double full = std::pow(static_cast<double>(d), static_cast<double>(em.scenario.parties));
  bool use_mask = full <= static_cast<double>(1 << 22);

  std::vector<long long> powers(em.scenario.parties, 1);
  if (use_mask)
    for (std::size_t j = em.scenario.parties; j-- > 1;)
      powers[j - 1] = powers[j] * d;

  std::vector<SupportIndex> out(em.scenario.contexts.size());
  for (std::size_t c = 0; c < em.scenario.contexts.size(); ++c) {
    SupportIndex& si = out[c];
    si.use_mask = use_mask;
    si.powers = powers;
    if (use_mask) si.mask.assign(static_cast<std::size_t>(full), 0);
    for (const auto& [tuple, w] : em.tables[c]) {
      if (!in_support(w, em.exact)) continue;
      if (use_mask) {
        long long key = 0;
        for (std::size_t j = 0; j < tuple.size(); ++j) key += tuple[j] * powers[j];
        si.mask[static_cast<std::size_t>(key)] = 1;
      } else {
        si.tuples.insert(tuple);
      }
    }
  }
  return out;
}

// all deterministic global assignments consistent with every context support;
// stops after the first when first_only
std::vector<std::vector<long long>> consistent_assignments(const EmpiricalModel& em,
                                                           bool first_only) {
  const Scenario& sc = em.scenario;
  VarLayout lay = layout_of(sc);
  std::vector<SupportIndex> supports = index_supports(em);

  std::vector<std::vector<std::size_t>> cons;
  for (const std::vector<std::size_t>& ctx : sc.contexts) {
    std::vector<std::size_t> vars;
    for (std::size_t j = 0; j < sc.parties; ++j) vars.push_back(lay.offset[j] + ctx[j]);
    cons.push_back(std::move(vars));
  }
  SearchSetup setup = build_order(lay.total, cons);

  std::vector<std::function<bool(const std::vector<long long>&)>> check;
  for (std::size_t c = 0; c < cons.size(); ++c)
    check.push_back([&sc, &supports, &cons, c](const std::vector<long long>& val) {
      const SupportIndex& si = supports[c];
      if (si.use_mask) {
        long long key = 0;
        for (std::size_t j = 0; j < sc.parties; ++j) key += val[cons[c][j]] * si.powers[j];
        return si.contains_flat(key);
      }
      std::vector<long long> tuple(sc.parties);
      for (std::size_t j = 0; j < sc.parties; ++j) tuple[j] = val[cons[c][j]];
      return si.tuples.count(tuple) > 0;
    });

  std::vector<std::vector<long long>> found;
  std::vector<long long> val(lay.total, 0);
  dfs(setup, sc.outcome_group.order(), 0, val, check,
      [&found, first_only](const std::vector<long long>& v) {
        found.push_back(v);
        return first_only;
      });
  return found;
}

GlobalAssignment assignment_from(const Scenario& sc, const FinAbGroup& group,
                                 const std::vector<long long>& val) {
  VarLayout lay = layout_of(sc);
  GlobalAssignment ga{group, {}};
  for (std::size_t j = 0; j < sc.parties; ++j) {
    std::vector<long long> row;
    for (std::size_t m = 0; m < sc.choices[j]; ++m) row.push_back(val[lay.offset[j] + m]);
    ga.value.push_back(std::move(row));
  }
  return ga;
}

void check_assignment_cap(const Scenario& sc) {
  VarLayout lay = layout_of(sc);
  double total = std::pow(static_cast<double>(sc.outcome_group.order()),
                          static_cast<double>(lay.total));
  if (total > 1e6)
    raise(ErrorCode::TooLarge, "more than 10^6 deterministic global assignments");
}

// phase-1 simplex feasibility for A x = b, x >= 0, with Bland's rule; exact
// when F = Rat (eps = 0), else float with the given tolerances
template <typename F>
std::optional<std::vector<F>> phase1_feasible(const std::vector<std::vector<F>>& A,
                                              const std::vector<F>& b, const F& eps,
                                              const F& feas_eps) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  std::vector<std::vector<F>> T(m, std::vector<F>(n + m, F(0)));
  std::vector<F> rhs = b;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = F(1);
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<char> banned(n + m, 0);  // artificials may not re-enter

  std::vector<F> red(n + m, F(0));
  for (std::size_t j = 0; j < n; ++j) {
    F z(0);
    for (std::size_t i = 0; i < m; ++i) z += T[i][j];
    red[j] = -z;
  }

  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (!banned[j] && red[j] < -eps) {
        enter = j;
        break;
      }
    if (enter == n + m) break;

    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(T[i][enter] > eps)) continue;
      if (leave == m) {
        leave = i;
        continue;
      }
      F lhs = rhs[i] * T[leave][enter];
      F cur = rhs[leave] * T[i][enter];
      if (lhs < cur || (lhs == cur && basis[i] < basis[leave])) leave = i;
    }
    if (leave == m) return std::nullopt;  // unbounded cannot happen in phase 1

    F piv = T[leave][enter];
    for (std::size_t j = 0; j < n + m; ++j) T[leave][j] /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      F factor = T[i][enter];
      if (factor == F(0)) continue;
      for (std::size_t j = 0; j < n + m; ++j) T[i][j] -= factor * T[leave][j];
      rhs[i] -= factor * rhs[leave];
    }
    F rfac = red[enter];
    if (!(rfac == F(0)))
      for (std::size_t j = 0; j < n + m; ++j) red[j] -= rfac * T[leave][j];
    if (basis[leave] >= n) banned[basis[leave]] = 1;
    basis[leave] = enter;
  }

  F infeasibility(0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) infeasibility += rhs[i] < F(0) ? -rhs[i] : rhs[i];
  if (infeasibility > feas_eps) return std::nullopt;

  std::vector<F> x(n, F(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = rhs[i];
  return x;
}

// gaussian elimination for A x = b over all columns; returns a particular
// solution with free variables zero, or nullopt when inconsistent
template <typename F>
std::optional<std::vector<F>> linear_solve(std::vector<std::vector<F>> A, std::vector<F> b,
                                           const F& eps, bool partial_pivot) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t best = m;
    for (std::size_t i = row; i < m; ++i) {
      if (!(A[i][col] < -eps) && !(A[i][col] > eps)) continue;
      if (best == m) best = i;
      if (partial_pivot && best != i) {
        F ai = A[i][col] < F(0) ? -A[i][col] : A[i][col];
        F ab = A[best][col] < F(0) ? -A[best][col] : A[best][col];
        if (ai > ab) best = i;
      }
      if (!partial_pivot) break;
    }
    if (best == m) continue;
    std::swap(A[row], A[best]);
    std::swap(b[row], b[best]);
    F piv = A[row][col];
    for (std::size_t j = col; j < n; ++j) A[row][j] /= piv;
    b[row] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      F factor = A[i][col];
      if (factor == F(0)) continue;
      for (std::size_t j = col; j < n; ++j) A[i][j] -= factor * A[row][j];
      b[i] -= factor * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (b[i] < -eps || b[i] > eps) return std::nullopt;

  std::vector<F> x(n, F(0));
  for (std::size_t i = 0; i < row; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace

std::vector<long long> GlobalAssignment::restrict_to(
    const std::vector<std::size_t>& context) const {
  if (context.size() != value.size())
    raise(ErrorCode::Usage, "context length differs from the assignment's party count");
  std::vector<long long> out;
  for (std::size_t j = 0; j < context.size(); ++j) {
    if (context[j] >= value[j].size()) raise(ErrorCode::Usage, "choice out of range");
    out.push_back(value[j][context[j]]);
  }
  return out;
}

void validate_model(const EmpiricalModel& em) {
  const Scenario& sc = em.scenario;
  if (sc.parties == 0) raise(ErrorCode::Usage, "scenario needs at least one party");
  if (sc.choices.size() != sc.parties)
    raise(ErrorCode::Usage, "choice counts do not match the party count");
  for (std::size_t mj : sc.choices)
    if (mj == 0) raise(ErrorCode::Usage, "every party needs at least one choice");
  if (sc.contexts.empty()) raise(ErrorCode::Usage, "scenario has no contexts");

  VarLayout lay = layout_of(sc);
  std::vector<char> covered(lay.total, 0);
  for (const std::vector<std::size_t>& ctx : sc.contexts) {
    if (ctx.size() != sc.parties) raise(ErrorCode::Usage, "context length differs from parties");
    for (std::size_t j = 0; j < sc.parties; ++j) {
      if (ctx[j] >= sc.choices[j]) raise(ErrorCode::Usage, "context choice out of range");
      covered[lay.offset[j] + ctx[j]] = 1;
    }
  }
  for (char c : covered)
    if (!c) raise(ErrorCode::Usage, "contexts do not cover every (party, choice) pair");

  if (em.tables.size() != sc.contexts.size())
    raise(ErrorCode::Usage, "table count differs from context count");
  const long long d = sc.outcome_group.order();
  for (const auto& table : em.tables)
    for (const auto& [tuple, w] : table) {
      if (tuple.size() != sc.parties) raise(ErrorCode::Usage, "outcome tuple length mismatch");
      for (long long o : tuple)
        if (o < 0 || o >= d) raise(ErrorCode::Usage, "outcome index out of range");
      if (w < 0) raise(ErrorCode::Usage, "negative outcome weight");
    }
}

std::set<std::vector<long long>> support_of(const EmpiricalModel& em, std::size_t context) {
  if (context >= em.tables.size()) raise(ErrorCode::Usage, "context index out of range");
  std::set<std::vector<long long>> out;
  for (const auto& [tuple, w] : em.tables[context])
    if (in_support(w, em.exact)) out.insert(tuple);
  return out;
}

std::vector<std::map<std::vector<long long>, Rat>> mixture_tables(const Scenario& sc,
                                                                  const WeightedAssignments& wa) {
  std::vector<std::map<std::vector<long long>, Rat>> tables(sc.contexts.size());
  for (std::size_t c = 0; c < sc.contexts.size(); ++c)
    for (const auto& [ga, q] : wa) tables[c][ga.restrict_to(sc.contexts[c])] += q;
  return tables;
}

NoSignallingReport check_no_signalling(const EmpiricalModel& em) {
  validate_model(em);
  const Scenario& sc = em.scenario;
  NoSignallingReport report;

  auto agree = [&em](const Rat& a, const Rat& b) {
    if (em.exact) return a == b;
    return std::abs(to_double(a - b)) <= tolerance();
  };

  for (std::size_t c = 0; c < sc.contexts.size(); ++c) {
    Rat sum = 0;
    for (const auto& [tuple, w] : em.tables[c]) sum += w;
    if (!agree(sum, Rat(1))) report.unnormalized.push_back(c);
  }

  for (std::size_t a = 0; a < sc.contexts.size(); ++a)
    for (std::size_t b = a + 1; b < sc.contexts.size(); ++b) {
      std::vector<std::size_t> shared_parties;
      std::vector<std::pair<std::size_t, std::size_t>> shared;
      for (std::size_t j = 0; j < sc.parties; ++j)
        if (sc.contexts[a][j] == sc.contexts[b][j]) {
          shared_parties.push_back(j);
          shared.emplace_back(j, sc.contexts[a][j]);
        }
      if (shared_parties.empty()) continue;

      auto marginal = [&](std::size_t c) {
        std::map<std::vector<long long>, Rat> marg;
        for (const auto& [tuple, w] : em.tables[c]) {
          std::vector<long long> key;
          for (std::size_t j : shared_parties) key.push_back(tuple[j]);
          marg[key] += w;
        }
        return marg;
      };
      std::map<std::vector<long long>, Rat> ma = marginal(a), mb = marginal(b);
      std::set<std::vector<long long>> keys;
      for (const auto& [k, _] : ma) keys.insert(k);
      for (const auto& [k, _] : mb) keys.insert(k);
      for (const std::vector<long long>& k : keys) {
        Rat lhs = ma.count(k) ? ma[k] : Rat(0);
        Rat rhs = mb.count(k) ? mb[k] : Rat(0);
        if (!agree(lhs, rhs)) {
          report.violations.push_back({a, b, shared, k, lhs, rhs});
          report.max_violation =
              std::max(report.max_violation, std::abs(to_double(lhs - rhs)));
        }
      }
    }

  report.pass = report.violations.empty() && report.unnormalized.empty();
  return report;
}

StrongContextualityResult strong_contextuality(const EmpiricalModel& em) {
  validate_model(em);
  std::vector<std::vector<long long>> found = consistent_assignments(em, true);
  StrongContextualityResult res;
  res.strongly_contextual = found.empty();
  if (!found.empty())
    res.section = assignment_from(em.scenario, em.scenario.outcome_group, found[0]);
  return res;
}

std::optional<WeightedAssignments> probabilistic_lhv(const EmpiricalModel& em) {
  validate_model(em);
  check_assignment_cap(em.scenario);
  const Scenario& sc = em.scenario;

  std::vector<std::vector<long long>> cols = consistent_assignments(em, false);
  if (cols.empty()) return std::nullopt;

  // one equality row per (context, support outcome), plus total mass one
  std::vector<std::pair<std::size_t, std::vector<long long>>> rows;
  std::vector<Rat> b;
  for (std::size_t c = 0; c < sc.contexts.size(); ++c)
    for (const auto& [tuple, w] : em.tables[c])
      if (in_support(w, em.exact)) {
        rows.emplace_back(c, tuple);
        b.push_back(w);
      }
  rows.emplace_back(sc.contexts.size(), std::vector<long long>{});
  b.push_back(1);

  VarLayout lay = layout_of(sc);
  std::vector<std::vector<Rat>> A(rows.size(), std::vector<Rat>(cols.size(), 0));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const auto& [c, tuple] = rows[i];
      bool hit = true;
      for (std::size_t p = 0; p < sc.parties; ++p)
        if (cols[j][lay.offset[p] + sc.contexts[c][p]] != tuple[p]) {
          hit = false;
          break;
        }
      if (hit) A[i][j] = 1;
    }
    A[rows.size() - 1][j] = 1;
  }

  std::vector<Rat> q;
  if (em.exact) {
    std::optional<std::vector<Rat>> x = phase1_feasible<Rat>(A, b, Rat(0), Rat(0));
    if (!x) return std::nullopt;
    q = *x;
  } else {
    std::vector<std::vector<double>> Af(A.size(), std::vector<double>(cols.size()));
    std::vector<double> bf(b.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
      bf[i] = to_double(b[i]);
      for (std::size_t j = 0; j < cols.size(); ++j) Af[i][j] = to_double(A[i][j]);
    }
    std::optional<std::vector<double>> x = phase1_feasible<double>(Af, bf, 1e-11, 1e-7);
    if (!x) return std::nullopt;
    for (double v : *x) q.push_back(Rat(v));
  }

  WeightedAssignments mix;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (q[j] > 0) mix.emplace_back(assignment_from(sc, sc.outcome_group, cols[j]), q[j]);
  return mix;
}

WeightedAssignments signed_global_section(const EmpiricalModel& em) {
  validate_model(em);
  check_assignment_cap(em.scenario);
  const Scenario& sc = em.scenario;
  VarLayout lay = layout_of(sc);
  const long long d = sc.outcome_group.order();

  long long n_cols = 1;
  for (std::size_t v = 0; v < lay.total; ++v) n_cols *= d;

  std::vector<std::vector<long long>> cols;
  cols.reserve(static_cast<std::size_t>(n_cols));
  std::vector<long long> val(lay.total, 0);
  for (long long c = 0; c < n_cols; ++c) {
    cols.push_back(val);
    for (std::size_t v = lay.total; v-- > 0;) {
      if (++val[v] < d) break;
      val[v] = 0;
    }
  }

  // rows: every outcome tuple of every context (absent table entries weigh 0),
  // plus total mass one
  std::size_t n_tuples = 1;
  for (std::size_t j = 0; j < sc.parties; ++j) n_tuples *= static_cast<std::size_t>(d);
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  for (std::size_t c = 0; c < sc.contexts.size(); ++c) {
    for (std::size_t key = 0; key < n_tuples; ++key) {
      std::vector<long long> tuple(sc.parties);
      std::size_t rem = key;
      for (std::size_t j = sc.parties; j-- > 0;) {
        tuple[j] = static_cast<long long>(rem % static_cast<std::size_t>(d));
        rem /= static_cast<std::size_t>(d);
      }
      std::vector<Rat> row(cols.size(), 0);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        bool hit = true;
        for (std::size_t p = 0; p < sc.parties; ++p)
          if (cols[j][lay.offset[p] + sc.contexts[c][p]] != tuple[p]) {
            hit = false;
            break;
          }
        if (hit) row[j] = 1;
      }
      A.push_back(std::move(row));
      auto it = em.tables[c].find(tuple);
      b.push_back(it == em.tables[c].end() ? Rat(0) : it->second);
    }
  }
  A.emplace_back(cols.size(), Rat(1));
  b.push_back(1);

  std::optional<std::vector<Rat>> x;
  if (em.exact) {
    x = linear_solve<Rat>(A, b, Rat(0), false);
  } else {
    std::vector<std::vector<double>> Af(A.size(), std::vector<double>(cols.size()));
    std::vector<double> bf(b.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
      bf[i] = to_double(b[i]);
      for (std::size_t j = 0; j < cols.size(); ++j) Af[i][j] = to_double(A[i][j]);
    }
    std::optional<std::vector<double>> xf = linear_solve<double>(Af, bf, tolerance(), true);
    if (xf) {
      std::vector<Rat> xr;
      for (double v : *xf) xr.push_back(Rat(v));
      x = std::move(xr);
    }
  }
  if (!x)
    raise(ErrorCode::NoSolution,
          "tables admit no signed global section: no-signalling must have been violated");

  WeightedAssignments out;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if ((*x)[j] != 0) out.emplace_back(assignment_from(sc, sc.outcome_group, cols[j]), (*x)[j]);
  return out;
}

AvnResult avn_check(const EmpiricalModel& em, const std::vector<AvnEquation>& equations) {
  return avn_check(em, equations, em.scenario.outcome_group);
}

AvnResult avn_check(const EmpiricalModel& em, const std::vector<AvnEquation>& equations,
                    const FinAbGroup& module) {
  validate_model(em);
  const Scenario& sc = em.scenario;
  if (equations.empty()) raise(ErrorCode::Usage, "no equations supplied");
  for (const AvnEquation& eq : equations) {
    if (eq.context >= sc.contexts.size()) raise(ErrorCode::Usage, "equation context out of range");
    if (eq.coeffs.size() != sc.parties)
      raise(ErrorCode::Usage, "equation coefficient count differs from parties");
  }

  // over the outcome group the equations must hold on each context's support
  if (module == sc.outcome_group)
    for (const AvnEquation& eq : equations) {
      GroupElement rhs(module, eq.rhs);
      for (const std::vector<long long>& tuple : support_of(em, eq.context)) {
        GroupElement acc = GroupElement::zero(module);
        for (std::size_t j = 0; j < sc.parties; ++j)
          acc = acc + GroupElement::from_index(module, tuple[j]).scaled(eq.coeffs[j]);
        if (acc != rhs)
          raise(ErrorCode::InvalidTheory,
                "equation fails on the support of its own context");
      }
    }

  VarLayout lay = layout_of(sc);
  std::vector<std::vector<std::size_t>> cons;
  for (const AvnEquation& eq : equations) {
    std::vector<std::size_t> vars;
    for (std::size_t j = 0; j < sc.parties; ++j)
      vars.push_back(lay.offset[j] + sc.contexts[eq.context][j]);
    cons.push_back(std::move(vars));
  }
  SearchSetup setup = build_order(lay.total, cons);

  // scaled-value lookup per equation and party: element index -> scaled index
  const long long dm = module.order();
  std::vector<std::vector<std::vector<long long>>> scaled(equations.size());
  std::vector<long long> rhs_idx(equations.size());
  for (std::size_t e = 0; e < equations.size(); ++e) {
    rhs_idx[e] = GroupElement(module, equations[e].rhs).index();
    scaled[e].resize(sc.parties);
    for (std::size_t j = 0; j < sc.parties; ++j)
      for (long long g = 0; g < dm; ++g)
        scaled[e][j].push_back(
            GroupElement::from_index(module, g).scaled(equations[e].coeffs[j]).index());
  }
  std::vector<std::vector<long long>> add(static_cast<std::size_t>(dm));
  for (long long a = 0; a < dm; ++a)
    for (long long g = 0; g < dm; ++g)
      add[static_cast<std::size_t>(a)].push_back(
          (GroupElement::from_index(module, a) + GroupElement::from_index(module, g)).index());

  std::vector<std::function<bool(const std::vector<long long>&)>> check;
  for (std::size_t e = 0; e < equations.size(); ++e)
    check.push_back([&, e](const std::vector<long long>& val) {
      long long acc = 0;
      for (std::size_t j = 0; j < sc.parties; ++j) {
        long long sv = scaled[e][j][static_cast<std::size_t>(val[cons[e][j]])];
        acc = add[static_cast<std::size_t>(acc)][static_cast<std::size_t>(sv)];
      }
      return acc == rhs_idx[e];
    });

  AvnResult res;
  res.equations = equations;
  std::vector<long long> val(lay.total, 0);
  bool found = dfs(setup, dm, 0, val, check, [](const std::vector<long long>&) { return true; });
  res.avn = !found;
  if (found) res.witness = assignment_from(sc, module, val);
  return res;
}

}  // namespace cqmkit
