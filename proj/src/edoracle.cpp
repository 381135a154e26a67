// SPDX-License-Identifier: Apache-2.0
#include "nhssh/edoracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "nhssh/correlation.hpp"
#include "nhssh/entanglement.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

using State = std::uint32_t;

// (-1)^(number of occupied sites below j)
int jw_sign(State s, int j) { return (std::popcount(s & ((State{1} << j) - 1)) % 2 == 0) ? 1 : -1; }

// Applies c+_i c_j to s. Returns false when the result vanishes.
bool hop(State s, int i, int j, State& out, int& sign) {
  if (!((s >> j) & 1U)) return false;
  State t = s & ~(State{1} << j);
  sign = jw_sign(s, j);
  if ((t >> i) & 1U) return false;
  sign *= jw_sign(t, i);
  out = t | (State{1} << i);
  return true;
}

struct Term {
  int i;
  int j;
  BigComplex amplitude;
};

// Off-diagonal one-body terms t c+_i c_j of the chain with the twisted boundary bond.
std::vector<Term> hopping_terms(const ModelParams& params) {
  const Precision p = params.precision;
  const int L = params.L;
  const BigComplex mw(-params.w, BigReal(p));
  const BigComplex mv(-params.v, BigReal(p));
  std::vector<Term> terms;
  for (int j = 0; j < L / 2; ++j) {
    terms.push_back({2 * j, 2 * j + 1, mw});
    terms.push_back({2 * j + 1, 2 * j, mw});
  }
  for (int j = 1; j < L / 2; ++j) {
    terms.push_back({2 * j - 1, 2 * j, mv});
    terms.push_back({2 * j, 2 * j - 1, mv});
  }
  // -v c+_{-1} c_0 + h.c. with c_{-1} = e^{-i delta} c_{L-1}
  const BigComplex twist(cos(params.delta), sin(params.delta));
  terms.push_back({L - 1, 0, mv * twist});
  terms.push_back({0, L - 1, mv * conj(twist)});
  return terms;
}

std::size_t index_of(const std::vector<State>& states, State s) {
  return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), s) - states.begin());
}

BigReal tolerance(Precision p, int divisor) { return pow10(-(p.digits / divisor), p); }

}  // namespace

BigMatrix FockOperator::to_dense() const {
  if (sectors.empty()) throw std::invalid_argument("to_dense: empty operator");
  const Precision p = sectors.front().block.precision();
  const std::size_t dim = std::size_t{1} << L;
  BigMatrix m(dim, dim, p);
  for (const auto& sec : sectors)
    for (std::size_t a = 0; a < sec.states.size(); ++a)
      for (std::size_t b = 0; b < sec.states.size(); ++b) assign(m(sec.states[a], sec.states[b]), sec.block(a, b));
  return m;
}

FockOperator many_body_hamiltonian(const ModelParams& params) {
  if (params.L > kMaxEdSites) {
    throw SizeError("exact diagonalization is limited to L <= " + std::to_string(kMaxEdSites) + ", got L = " +
                    std::to_string(params.L));
  }
  validate(params, false);
  const Precision p = params.precision;
  const int L = params.L;
  const std::vector<Term> terms = hopping_terms(params);
  FockOperator h{L, {}};
  for (int q = 0; q <= L; ++q) {
    FockSector sec{q, {}, BigMatrix(0, 0, p)};
    for (State s = 0; s < (State{1} << L); ++s)
      if (std::popcount(s) == q) sec.states.push_back(s);
    sec.block = BigMatrix(sec.states.size(), sec.states.size(), p);
    for (std::size_t col = 0; col < sec.states.size(); ++col) {
      const State s = sec.states[col];
      BigReal stagger(p);
      for (int j = 0; j < L; ++j) {
        if (!((s >> j) & 1U)) continue;
        if (j % 2 == 0) stagger += params.u;
        else stagger -= params.u;
      }
      sec.block(col, col).im += stagger;
      for (const auto& t : terms) {
        State out = 0;
        int sign = 0;
        if (!hop(s, t.i, t.j, out, sign)) continue;
        BigComplex& e = sec.block(index_of(sec.states, out), col);
        if (sign > 0) e += t.amplitude;
        else e -= t.amplitude;
      }
    }
    h.sectors.push_back(std::move(sec));
  }
  return h;
}

BigMatrix annihilation_operator(int L, int j, Precision p) {
  if (L > kMaxEdSites) throw SizeError("annihilation_operator: L too large");
  const std::size_t dim = std::size_t{1} << L;
  BigMatrix c(dim, dim, p);
  for (State s = 0; s < dim; ++s) {
    if (!((s >> j) & 1U)) continue;
    c(s & ~(State{1} << j), s).re = BigReal(jw_sign(s, j), p);
  }
  return c;
}

BigMatrix number_operator(int L, Precision p) {
  const std::size_t dim = std::size_t{1} << L;
  BigMatrix n(dim, dim, p);
  for (State s = 0; s < dim; ++s) n(s, s).re = BigReal(std::popcount(s), p);
  return n;
}

namespace {

// Three steps of inverse iteration with a slightly displaced shift.
std::vector<BigComplex> inverse_iteration(const BigMatrix& a, const BigComplex& shift) {
  const std::size_t n = a.rows();
  const Precision p = a.precision();
  BigMatrix m = a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= shift;
  LinalgOptions opts;
  opts.singular_margin_digits = p.digits / 2;
  const LuFactors f = lu_factor(m, opts);
  std::vector<BigComplex> x(n, BigComplex(p));
  for (std::size_t i = 0; i < n; ++i) x[i].re = BigReal(1 + static_cast<long>((7 * i) % 11), p);
  for (int it = 0; it < 3; ++it) {
    x = lu_solve(f, std::move(x));
    const BigReal nrm = vector_norm(x);
    for (auto& e : x) e = e / nrm;
  }
  return x;
}

BigReal eigen_residual(const BigMatrix& a, const std::vector<BigComplex>& x, const BigComplex& lambda) {
  std::vector<BigComplex> y = nhssh::apply(a, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= lambda * x[i];
  return vector_norm(y) / vector_norm(x);
}

}  // namespace

GroundState left_right_ground(const FockOperator& h) {
  if (h.sectors.empty()) throw std::invalid_argument("left_right_ground: empty operator");
  const Precision p = h.sectors.front().block.precision();
  std::vector<std::vector<BigComplex>> sector_values;
  for (const auto& sec : h.sectors) sector_values.push_back(eigenvalues(sec.block));

  std::size_t best_sector = 0, best_index = 0;
  bool found = false;
  std::vector<BigComplex> all;
  for (std::size_t s = 0; s < sector_values.size(); ++s) {
    for (std::size_t i = 0; i < sector_values[s].size(); ++i) {
      all.push_back(sector_values[s][i]);
      if (!found || sector_values[s][i].re < sector_values[best_sector][best_index].re) {
        best_sector = s;
        best_index = i;
        found = true;
      }
    }
  }
  sort_spectrum(all);
  const BigComplex e0 = sector_values[best_sector][best_index];
  const BigReal scale = max(BigReal(1, p), abs(e0));
  if (abs(e0.im) > tolerance(p, 4) * scale) {
    throw ComplexSpectrum("ground energy " + to_string(e0, 12) + " is not real: the parameters are PT-broken");
  }
  BigReal gap(p);
  bool first = true;
  for (std::size_t s = 0; s < sector_values.size(); ++s) {
    for (std::size_t i = 0; i < sector_values[s].size(); ++i) {
      if (s == best_sector && i == best_index) continue;
      BigReal d = abs(sector_values[s][i] - e0);
      if (first || d < gap) {
        gap = std::move(d);
        first = false;
      }
    }
  }
  if (!first && gap < tolerance(p, 4) * scale) {
    throw DegenerateGround("ground state is degenerate to within " + to_string(gap, 4));
  }

  const FockSector& sec = h.sectors[best_sector];
  const BigComplex shift = e0 + BigComplex(tolerance(p, 3) * scale);
  std::vector<BigComplex> r = inverse_iteration(sec.block, shift);
  const BigMatrix bt = transpose(sec.block);
  std::vector<BigComplex> l = inverse_iteration(bt, shift);
  BigComplex dot(p);
  for (std::size_t i = 0; i < r.size(); ++i) dot += l[i] * r[i];
  if (abs(dot) < tolerance(p, 4)) throw DegenerateGround("left and right ground states are orthogonal");
  for (auto& e : l) e = e / dot;

  GroundState gs{e0, sec.charge, sec.states, std::move(r), std::move(l), std::move(gap), BigReal(p), std::move(all)};
  gs.residual = max(eigen_residual(sec.block, gs.right, e0), eigen_residual(bt, gs.left, e0));
  return gs;
}

BigMatrix reduced_density_matrix(const GroundState& gs, int L, int ell) {
  if (ell < 0 || ell > L) throw std::invalid_argument("reduced_density_matrix: 0 <= ell <= L");
  const Precision p = gs.energy.precision();
  const std::size_t dim_a = std::size_t{1} << ell;
  const State mask = static_cast<State>(dim_a - 1);
  BigMatrix rho(dim_a, dim_a, p);
  Scratch s(p);
  // group amplitudes by the environment configuration b
  for (std::size_t x = 0; x < gs.states.size(); ++x) {
    const State sx = gs.states[x];
    for (std::size_t y = 0; y < gs.states.size(); ++y) {
      const State sy = gs.states[y];
      if ((sx >> ell) != (sy >> ell)) continue;
      add_mul(rho(sx & mask, sy & mask), gs.right[x], gs.left[y], s);
    }
  }
  return rho;
}

BigMatrix ed_correlation(const GroundState& gs, int L) {
  const Precision p = gs.energy.precision();
  const auto n = static_cast<std::size_t>(L);
  BigMatrix c(n, n, p);
  Scratch s(p);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      BigComplex& acc = c(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      for (std::size_t x = 0; x < gs.states.size(); ++x) {
        State out = 0;
        int sign = 0;
        if (i == j) {
          if ((gs.states[x] >> j) & 1U) add_mul(acc, gs.left[x], gs.right[x], s);
          continue;
        }
        if (!hop(gs.states[x], i, j, out, sign)) continue;
        const BigComplex term = gs.left[index_of(gs.states, out)] * gs.right[x];
        if (sign > 0) acc += term;
        else acc -= term;
      }
    }
  }
  return c;
}

namespace {

std::vector<std::string> strings(const std::vector<BigComplex>& v, int digits = 20) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(to_string(e, digits));
  return out;
}

// greedy nearest matching of two multisets; returns the largest matched distance
BigReal multiset_distance(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
  const Precision p = a.front().precision();
  if (a.size() != b.size()) return BigReal(1, p) / BigReal(0, p);
  std::vector<bool> used(b.size(), false);
  BigReal worst(p);
  for (const auto& x : a) {
    std::size_t best = b.size();
    BigReal best_d(p);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      BigReal d = abs(x - b[j]);
      if (best == b.size() || d < best_d) {
        best = j;
        best_d = std::move(d);
      }
    }
    used[best] = true;
    worst = max(worst, best_d);
  }
  return worst;
}

struct SignCounts {
  int positive = 0;
  int negative = 0;
  int complex = 0;
};

SignCounts count_signs(const std::vector<BigComplex>& values) {
  SignCounts c;
  for (const auto& v : values) {
    const Precision p = v.precision();
    if (abs(v.im) > tolerance(p, 4) * abs(v)) ++c.complex;
    else if (v.re.sign() > 0) ++c.positive;
    else ++c.negative;
  }
  return c;
}

std::string describe(int q, const SignCounts& c) {
  return "q=" + std::to_string(q) + " +" + std::to_string(c.positive) + " -" + std::to_string(c.negative) + " complex " +
         std::to_string(c.complex);
}

}  // namespace

std::vector<OracleReport> compare_all(const ModelParams& params, int ell) {
  if (params.L > kMaxEdSites) throw SizeError("compare_all: L <= 12 required");
  if (ell <= 0 || ell > 6 || ell % 2 != 0 || ell > params.L) throw SizeError("compare_all: ell must be 2, 4 or 6");
  const Precision p = params.precision;
  ModelParams sub = params;
  sub.ell = ell;
  std::vector<OracleReport> reports;

  // Gaussian side
  CorrelationMatrix full = build_correlation(sub);
  const CorrelationMatrix ca = restrict(full, ell);
  const std::vector<BigComplex> nu = eigenvalues(ca.matrix);
  std::vector<BigComplex> g_spectrum = gaussian_many_body_spectrum(nu);
  const Entropies g_entropy = entropies(nu, {});

  // ED side
  const GroundState gs = left_right_ground(many_body_hamiltonian(sub));
  const BigMatrix c_ed = ed_correlation(gs, params.L);
  const BigMatrix rho = reduced_density_matrix(gs, params.L, ell);

  // (a) correlation entries
  {
    OracleReport r{"correlation", strings(full.matrix.entries()), strings(c_ed.entries()),
                   max_abs_diff(full.matrix, c_ed), tolerance(p, 2), false};
    r.pass = r.discrepancy <= r.threshold;
    reports.push_back(std::move(r));
  }

  // rho_A eigenvalues by charge sector of Q_A
  const std::size_t dim_a = std::size_t{1} << ell;
  std::vector<std::vector<BigComplex>> ed_by_q(static_cast<std::size_t>(ell) + 1);
  std::vector<BigComplex> ed_all;
  for (int q = 0; q <= ell; ++q) {
    std::vector<State> states;
    for (State s = 0; s < dim_a; ++s)
      if (std::popcount(s) == q) states.push_back(s);
    BigMatrix block(states.size(), states.size(), p);
    for (std::size_t a = 0; a < states.size(); ++a)
      for (std::size_t b = 0; b < states.size(); ++b) assign(block(a, b), rho(states[a], states[b]));
    ed_by_q[static_cast<std::size_t>(q)] = eigenvalues(block);
    for (const auto& v : ed_by_q[static_cast<std::size_t>(q)]) ed_all.push_back(v);
  }
  // off-sector weight of rho_A must vanish
  BigReal leak(p);
  for (State a = 0; a < dim_a; ++a)
    for (State b = 0; b < dim_a; ++b)
      if (std::popcount(a) != std::popcount(b)) leak = max(leak, abs(rho(a, b)));

  // (b) spectrum multiset
  {
    std::vector<BigComplex> g_sorted = g_spectrum, e_sorted = ed_all;
    sort_spectrum(g_sorted);
    sort_spectrum(e_sorted);
    OracleReport r{"rho_spectrum", strings(g_sorted), strings(e_sorted),
                   max(multiset_distance(g_sorted, e_sorted), leak), tolerance(p, 4), false};
    r.pass = r.discrepancy <= r.threshold;
    reports.push_back(std::move(r));
  }

  // (c) entropy: -Tr rho log rho over the rho_A eigenvalues
  {
    BigComplex s_ed(p);
    const BigReal cut = tolerance(p, 4);
    for (const auto& lam : ed_all) s_ed -= lam * clog(lam, BranchRule::PrincipalUpper, cut);
    OracleReport r{"entropy",
                   {to_string(g_entropy.von_neumann, 30)},
                   {to_string(s_ed, 30)},
                   abs(g_entropy.von_neumann.re - s_ed.re),
                   tolerance(p, 4),
                   false};
    r.pass = r.discrepancy <= r.threshold;
    reports.push_back(std::move(r));
  }

  // (d) sector signs, and the (-1)^(q - <Q_A>) rule
  {
    BigReal mean(p);
    for (const auto& v : nu) mean += v.re;
    const long mean_int = std::lround(mean.to_double());
    const bool integer = abs(mean - BigReal(mean_int, p)) <= tolerance(p, 4);
    // the rule is a statement about occupations that all lie outside [0, 1]
    bool applicable = integer;
    for (const auto& v : nu) {
      const bool real = abs(v.im) <= tolerance(p, 4) * max(BigReal(1, p), abs(v));
      if (!real || (v.re.sign() >= 0 && v.re <= BigReal(1, p))) applicable = false;
    }
    int mismatched = 0, rule_violations = 0;
    OracleReport signs{"sector_signs", {}, {}, BigReal(p), BigReal(p), false};
    OracleReport rule{"sign_rule", {}, {}, BigReal(p), BigReal(p), false};
    for (int q = 0; q <= ell; ++q) {
      std::vector<BigComplex> g_q;
      for (std::size_t s = 0; s < g_spectrum.size(); ++s)
        if (std::popcount(s) == q) g_q.push_back(g_spectrum[s]);
      const SignCounts gc = count_signs(g_q);
      const SignCounts ec = count_signs(ed_by_q[static_cast<std::size_t>(q)]);
      signs.gaussian.push_back(describe(q, gc));
      signs.ed.push_back(describe(q, ec));
      if (gc.positive != ec.positive || gc.negative != ec.negative || gc.complex != ec.complex) ++mismatched;
      const int expected = integer ? (((q - mean_int) % 2 == 0) ? 1 : -1) : 0;
      rule.gaussian.push_back("q=" + std::to_string(q) + " expected " + std::to_string(expected));
      rule.ed.push_back(describe(q, ec));
      const bool ok = expected != 0 && ec.complex == 0 && (expected > 0 ? ec.negative == 0 : ec.positive == 0);
      if (!ok) ++rule_violations;
    }
    signs.discrepancy = BigReal(mismatched, p);
    signs.pass = mismatched == 0;
    rule.discrepancy = BigReal(rule_violations, p);
    rule.applicable = applicable;
    rule.pass = !applicable || rule_violations == 0;
    reports.push_back(std::move(signs));
    reports.push_back(std::move(rule));
  }
  return reports;
}

}  // namespace nhssh
