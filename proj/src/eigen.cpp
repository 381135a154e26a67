// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"

namespace nhssh {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

BigReal ulp(Precision p) {
  BigReal u(1, p);
  mpfr_div_2si(u.get(), u.get(), static_cast<long>(p.bits()), kRnd);
  return u;
}

void scale_pow2(BigComplex& z, long e) {
  mpfr_mul_2si(z.re.get(), z.re.get(), e, kRnd);
  mpfr_mul_2si(z.im.get(), z.im.get(), e, kRnd);
}

struct Givens {
  BigReal c;
  BigComplex s;
  BigComplex r;
};

// Rotation with c real, [c s; -conj(s) c] [f; g] = [r; 0].
Givens make_givens(const BigComplex& f, const BigComplex& g) {
  const Precision p = f.precision();
  if (g.is_zero()) return {BigReal(1, p), BigComplex(p), f};
  if (f.is_zero()) {
    const BigReal gm = abs(g);
    return {BigReal(p), conj(g) / gm, BigComplex(gm)};
  }
  const BigReal fm = abs(f);
  const BigReal d = hypot(fm, abs(g));
  const BigComplex phase = f / fm;
  return {fm / d, phase * conj(g) / d, phase * d};
}

// rows k, k+1 over columns [j0, j1]
void rotate_rows(BigMatrix& h, std::size_t k, std::size_t j0, std::size_t j1, const Givens& g, Scratch& s,
                 BigComplex& a, BigComplex& b) {
  const BigComplex ms = -conj(g.s);
  for (std::size_t j = j0; j <= j1; ++j) {
    assign(a, h(k, j));
    assign(b, h(k + 1, j));
    // h(k, j) = c a + s b
    mpfr_mul(h(k, j).re.get(), g.c.get(), a.re.get(), kRnd);
    mpfr_mul(h(k, j).im.get(), g.c.get(), a.im.get(), kRnd);
    add_mul(h(k, j), g.s, b, s);
    // h(k+1, j) = -conj(s) a + c b
    mpfr_mul(h(k + 1, j).re.get(), g.c.get(), b.re.get(), kRnd);
    mpfr_mul(h(k + 1, j).im.get(), g.c.get(), b.im.get(), kRnd);
    add_mul(h(k + 1, j), ms, a, s);
  }
}

// columns k, k+1 over rows [i0, i1], multiplying by the adjoint rotation
void rotate_cols(BigMatrix& h, std::size_t k, std::size_t i0, std::size_t i1, const Givens& g, Scratch& s,
                 BigComplex& a, BigComplex& b) {
  const BigComplex cs = conj(g.s);
  const BigComplex ms = -g.s;
  for (std::size_t i = i0; i <= i1; ++i) {
    assign(a, h(i, k));
    assign(b, h(i, k + 1));
    mpfr_mul(h(i, k).re.get(), g.c.get(), a.re.get(), kRnd);
    mpfr_mul(h(i, k).im.get(), g.c.get(), a.im.get(), kRnd);
    add_mul(h(i, k), cs, b, s);
    mpfr_mul(h(i, k + 1).re.get(), g.c.get(), b.re.get(), kRnd);
    mpfr_mul(h(i, k + 1).im.get(), g.c.get(), b.im.get(), kRnd);
    add_mul(h(i, k + 1), ms, a, s);
  }
}

// Wilkinson shift: eigenvalue of the trailing 2x2 block closest to h(i, i).
BigComplex wilkinson_shift(const BigMatrix& h, std::size_t i) {
  const Precision p = h.precision();
  BigComplex t = h(i, i);
  const BigComplex u = csqrt(h(i - 1, i)) * csqrt(h(i, i - 1));
  if (u.is_zero()) return t;
  const BigReal half = BigReal(1, p) / BigReal(2, p);
  const BigComplex x = (h(i - 1, i - 1) - t) * half;
  BigComplex y = csqrt(x * x + u * u);
  if (x.re * y.re + x.im * y.im < BigReal(p)) y = -y;
  const BigComplex denom = x + y;
  if (denom.is_zero()) return t;
  return t - u * (u / denom);
}

bool index_less(const std::vector<BigComplex>& v, std::size_t a, std::size_t b) { return spectrum_less(v[a], v[b]); }

}  // namespace

bool spectrum_less(const BigComplex& a, const BigComplex& b) {
  const int c = mpfr_cmp(a.re.get(), b.re.get());
  if (c != 0) return c < 0;
  return mpfr_cmp(a.im.get(), b.im.get()) < 0;
}

void sort_spectrum(std::vector<BigComplex>& values) {
  std::sort(values.begin(), values.end(), [](const BigComplex& a, const BigComplex& b) { return spectrum_less(a, b); });
}

namespace detail {

std::vector<long> balance(BigMatrix& m) {
  const std::size_t n = m.rows();
  const Precision p = m.precision();
  std::vector<long> exponents(n, 0);
  if (n < 2) return exponents;
  const BigReal factor = BigReal::parse("0.95", p);
  bool converged = false;
  for (int sweep = 0; !converged && sweep < 200; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      BigReal c(p), r(p);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(m(j, i));
        r += abs1(m(i, j));
      }
      if (c.is_zero() || r.is_zero()) continue;
      const BigReal s = c + r;
      long f = 0;
      BigReal cc = c;
      BigReal g = r;
      mpfr_div_2si(g.get(), g.get(), 1, kRnd);
      while (cc < g) {
        f += 1;
        mpfr_mul_2si(cc.get(), cc.get(), 2, kRnd);
      }
      g = r;
      mpfr_mul_2si(g.get(), g.get(), 1, kRnd);
      while (cc >= g) {
        f -= 1;
        mpfr_div_2si(cc.get(), cc.get(), 2, kRnd);
      }
      if (f == 0) continue;
      // (c*2^f + r*2^-f) < 0.95 (c + r)
      BigReal cf = c, rf = r;
      mpfr_mul_2si(cf.get(), cf.get(), f, kRnd);
      mpfr_mul_2si(rf.get(), rf.get(), -f, kRnd);
      if (cf + rf < factor * s) {
        converged = false;
        exponents[i] += f;
        for (std::size_t j = 0; j < n; ++j) scale_pow2(m(i, j), -f);
        for (std::size_t j = 0; j < n; ++j) scale_pow2(m(j, i), f);
      }
    }
  }
  return exponents;
}

Hessenberg hessenberg(BigMatrix a) {
  const std::size_t n = a.rows();
  const Precision p = a.precision();
  Hessenberg out{std::move(a), {}, {}};
  BigMatrix& h = out.h;
  if (n < 3) return out;

  for (std::size_t k = 0; k + 2 < n; ++k) {
    BigReal tail(p);
    for (std::size_t i = k + 2; i < n; ++i) tail += norm(h(i, k));
    if (tail.is_zero()) continue;
    const BigComplex& x0 = h(k + 1, k);
    const BigReal alpha = sqrt(tail + norm(x0));
    BigComplex phase(BigReal(1, p));
    if (!x0.is_zero()) phase = x0 / abs(x0);
    const BigComplex beta = -(phase * alpha);

    std::vector<BigComplex> v;
    v.reserve(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) v.push_back(h(i, k));
    v[0] -= beta;
    BigReal vnorm2(p);
    for (const auto& e : v) vnorm2 += norm(e);
    const BigReal scale = BigReal(2, p) / vnorm2;

    const auto cols = static_cast<long>(n);
    // left: rows k+1.., columns k+1.. (column k is set explicitly below)
#pragma omp parallel
    {
      Scratch s(p);
      BigComplex w(p);
#pragma omp for schedule(static)
      for (long jj = static_cast<long>(k) + 1; jj < cols; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        mpfr_set_zero(w.re.get(), 1);
        mpfr_set_zero(w.im.get(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) add_conj_mul(w, v[i], h(k + 1 + i, j), s);
        w *= scale;
        for (std::size_t i = 0; i < v.size(); ++i) sub_mul(h(k + 1 + i, j), v[i], w, s);
      }
    }
    // right: all rows, columns k+1..
#pragma omp parallel
    {
      Scratch s(p);
      BigComplex w(p);
      BigComplex vc(p);
#pragma omp for schedule(static)
      for (long ii = 0; ii < cols; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        mpfr_set_zero(w.re.get(), 1);
        mpfr_set_zero(w.im.get(), 1);
        for (std::size_t j = 0; j < v.size(); ++j) add_mul(w, h(i, k + 1 + j), v[j], s);
        w *= scale;
        for (std::size_t j = 0; j < v.size(); ++j) {
          assign(vc, v[j]);
          mpfr_neg(vc.im.get(), vc.im.get(), kRnd);
          sub_mul(h(i, k + 1 + j), w, vc, s);
        }
      }
    }
    assign(h(k + 1, k), beta);
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = BigComplex(p);
    out.reflectors.push_back(std::move(v));
    out.scales.push_back(scale);
  }
  return out;
}

std::vector<BigComplex> hessenberg_qr(BigMatrix h, int sweep_factor, int* iterations) {
  const std::size_t n = h.rows();
  const Precision p = h.precision();
  std::vector<BigComplex> values(n, BigComplex(p));
  if (n == 0) return values;
  const BigReal eps = ulp(p);
  BigReal hnorm = max_norm(h);
  if (hnorm.is_zero()) hnorm = BigReal(1, p);
  // below this a subdiagonal is negligible regardless of its neighbours
  BigReal small = hnorm * eps * eps;
  const BigReal three_quarters = BigReal::parse("0.75", p);
  const long max_total = static_cast<long>(sweep_factor) * static_cast<long>(std::max<std::size_t>(n, 1));
  long total = 0;

  Scratch s(p);
  BigComplex ta(p), tb(p);

  long hi = static_cast<long>(n) - 1;
  while (hi >= 0) {
    int its = 0;
    for (;;) {
      long l = hi;
      for (; l > 0; --l) {
        const BigReal sub = abs1(h(l, l - 1));
        if (sub <= small) break;
        BigReal tst = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
        if (tst.is_zero()) {
          if (l - 2 >= 0) tst += abs1(h(l - 1, l - 2));
          if (l + 1 <= hi) tst += abs1(h(l + 1, l));
        }
        if (sub <= eps * tst) {
          // Ahues-Tisseur refinement of the deflation test
          const BigReal up = abs1(h(l - 1, l));
          const BigReal ab = max(sub, up);
          const BigReal ba = min(sub, up);
          const BigReal d1 = abs1(h(l, l));
          const BigReal d2 = abs1(h(l - 1, l - 1) - h(l, l));
          const BigReal aa = max(d1, d2);
          const BigReal bb = min(d1, d2);
          const BigReal sum = aa + ab;
          if (sum.is_zero() || ba * (ab / sum) <= max(small, eps * (bb * (aa / sum)))) break;
        }
      }
      const auto lo = static_cast<std::size_t>(l);
      const auto top = static_cast<std::size_t>(hi);
      if (lo > 0) h(lo, lo - 1) = BigComplex(p);
      if (lo >= top) break;

      ++its;
      if (++total > max_total) {
        throw NoConvergence("QR iteration did not converge after " + std::to_string(max_total) +
                            " iterations (matrix defective or nearly so)");
      }
      BigComplex shift(p);
      if (its % 10 == 0) {
        shift = h(top, top);
        shift.re += three_quarters * abs(h(top, top - 1).re);
      } else {
        shift = wilkinson_shift(h, top);
      }

      for (std::size_t k = lo; k < top; ++k) {
        Givens g = k == lo ? make_givens(h(k, k) - shift, h(k + 1, k)) : make_givens(h(k, k - 1), h(k + 1, k - 1));
        if (k > lo) {
          assign(h(k, k - 1), g.r);
          h(k + 1, k - 1) = BigComplex(p);
        }
        rotate_rows(h, k, k, top, g, s, ta, tb);
        rotate_cols(h, k, lo, std::min(k + 2, top), g, s, ta, tb);
      }
    }
    values[static_cast<std::size_t>(hi)] = h(static_cast<std::size_t>(hi), static_cast<std::size_t>(hi));
    --hi;
  }
  if (iterations != nullptr) *iterations = static_cast<int>(total);
  return values;
}

}  // namespace detail

namespace {

struct Prepared {
  std::vector<long> balance_exponents;
  detail::Hessenberg hess;
};

Prepared prepare(const BigMatrix& m, const LinalgOptions& opts) {
  if (!m.square()) throw std::invalid_argument("eigen: matrix not square");
  BigMatrix work = m;
  std::vector<long> d(m.rows(), 0);
  if (opts.balance) d = detail::balance(work);
  return Prepared{std::move(d), detail::hessenberg(std::move(work))};
}

// Solve (H - lambda I) x = b for upper Hessenberg H with adjacent-row pivoting.
class ShiftedHessenbergSolver {
 public:
  ShiftedHessenbergSolver(const BigMatrix& h, const BigComplex& lambda, const BigReal& tiny)
      : n_(h.rows()), u_(h), swapped_(n_, false), mult_(n_, BigComplex(h.precision())) {
    const Precision p = h.precision();
    Scratch s(p);
    for (std::size_t i = 0; i < n_; ++i) u_(i, i) -= lambda;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (abs1(u_(k + 1, k)) > abs1(u_(k, k))) {
        for (std::size_t j = k; j < n_; ++j) std::swap(u_(k, j), u_(k + 1, j));
        swapped_[k] = true;
      }
      if (u_(k, k).is_zero()) u_(k, k).re = tiny;
      if (u_(k + 1, k).is_zero()) continue;
      mult_[k] = u_(k + 1, k) / u_(k, k);
      for (std::size_t j = k + 1; j < n_; ++j) sub_mul(u_(k + 1, j), mult_[k], u_(k, j), s);
      u_(k + 1, k) = BigComplex(p);
    }
    if (u_(n_ - 1, n_ - 1).is_zero()) u_(n_ - 1, n_ - 1).re = tiny;
  }

  void solve(std::vector<BigComplex>& x) const {
    Scratch s(u_.precision());
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (swapped_[k]) std::swap(x[k], x[k + 1]);
      sub_mul(x[k + 1], mult_[k], x[k], s);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n_; ++j) sub_mul(x[ii], u_(ii, j), x[j], s);
      x[ii] = x[ii] / u_(ii, ii);
    }
  }

 private:
  std::size_t n_;
  BigMatrix u_;
  std::vector<bool> swapped_;
  std::vector<BigComplex> mult_;
};

void normalize(std::vector<BigComplex>& x) {
  const BigReal nrm = vector_norm(x);
  if (nrm.is_zero()) return;
  for (auto& e : x) e = e / nrm;
}

// Removes components along previously accepted vectors (modified Gram-Schmidt).
void orthogonalize(std::vector<BigComplex>& x, const std::vector<const std::vector<BigComplex>*>& basis) {
  const Precision p = x.front().precision();
  Scratch s(p);
  for (const auto* b : basis) {
    BigComplex dot(p);
    for (std::size_t i = 0; i < x.size(); ++i) add_conj_mul(dot, (*b)[i], x[i], s);
    for (std::size_t i = 0; i < x.size(); ++i) sub_mul(x[i], dot, (*b)[i], s);
  }
}

}  // namespace

std::vector<BigComplex> eigenvalues(const BigMatrix& m, const LinalgOptions& opts) {
  Prepared prep = prepare(m, opts);
  auto values = detail::hessenberg_qr(std::move(prep.hess.h), opts.sweep_factor);
  sort_spectrum(values);
  return values;
}

EigenDecomposition eig_general(const BigMatrix& m, const LinalgOptions& opts) {
  const std::size_t n = m.rows();
  const Precision p = m.precision();
  Prepared prep = prepare(m, opts);
  const BigMatrix& h = prep.hess.h;

  int iterations = 0;
  std::vector<BigComplex> values = detail::hessenberg_qr(h, opts.sweep_factor, &iterations);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return index_less(values, a, b); });
  std::vector<BigComplex> sorted;
  sorted.reserve(n);
  for (std::size_t idx : order) sorted.push_back(values[idx]);

  // inverse iteration on the Hessenberg form
  BigReal hnorm = max_norm(h);
  if (hnorm.is_zero()) hnorm = BigReal(1, p);
  const BigReal eps = ulp(p);
  const BigReal tiny = hnorm * eps;
  BigReal cluster_tol = hnorm;
  mpfr_mul_2si(cluster_tol.get(), cluster_tol.get(), -static_cast<long>(3 * p.bits() / 4), kRnd);

  std::vector<std::vector<BigComplex>> vectors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long jj = 0; jj < count; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    ShiftedHessenbergSolver solver(h, sorted[j], tiny);
    std::vector<BigComplex> x;
    x.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      x.emplace_back(BigReal(1 + static_cast<long>((7 * i + 13 * j) % 17), p));
    }
    normalize(x);
    for (int it = 0; it < 3; ++it) {
      solver.solve(x);
      normalize(x);
    }
    vectors[j] = std::move(x);
  }
  // eigenvalues that coincide to within cluster_tol get mutually independent vectors
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<const std::vector<BigComplex>*> cluster;
    for (std::size_t i = 0; i < j; ++i) {
      if (abs1(sorted[i] - sorted[j]) <= cluster_tol) cluster.push_back(&vectors[i]);
    }
    if (cluster.empty()) continue;
    ShiftedHessenbergSolver solver(h, sorted[j], tiny);
    for (int it = 0; it < 2; ++it) {
      orthogonalize(vectors[j], cluster);
      normalize(vectors[j]);
      solver.solve(vectors[j]);
      normalize(vectors[j]);
    }
    orthogonalize(vectors[j], cluster);
    normalize(vectors[j]);
  }

  // back-transform: Q y, then undo balancing, then normalize
  BigMatrix v(n, n, p);
  {
    Scratch s(p);
    BigComplex w(p);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<BigComplex>& y = vectors[j];
      for (std::size_t r = prep.hess.reflectors.size(); r-- > 0;) {
        const auto& refl = prep.hess.reflectors[r];
        const std::size_t off = r + 1;
        mpfr_set_zero(w.re.get(), 1);
        mpfr_set_zero(w.im.get(), 1);
        for (std::size_t i = 0; i < refl.size(); ++i) add_conj_mul(w, refl[i], y[off + i], s);
        w *= prep.hess.scales[r];
        for (std::size_t i = 0; i < refl.size(); ++i) sub_mul(y[off + i], refl[i], w, s);
      }
      for (std::size_t i = 0; i < n; ++i) scale_pow2(y[i], prep.balance_exponents[i]);
      normalize(y);
      for (std::size_t i = 0; i < n; ++i) assign(v(i, j), y[i]);
    }
  }

  EigenDecomposition out{sorted, v, BigMatrix(n, n, p), {}, BigReal(p), BigReal(p), iterations};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<BigComplex> col(n, BigComplex(p));
    for (std::size_t i = 0; i < n; ++i) assign(col[i], v(i, j));
    std::vector<BigComplex> mv = nhssh::apply(m, col);
    for (std::size_t i = 0; i < n; ++i) mv[i] -= sorted[j] * col[i];
    BigReal r = vector_norm(mv);
    if (r > out.residual_bound) out.residual_bound = r;
    out.residuals.push_back(std::move(r));
  }
  // a cluster vector that is not an eigenvector means a missing eigenvector (Jordan block)
  const BigReal defect_bound = max(BigReal(1, p), max_norm(m)) * pow10(-(p.digits / 2), p);
  if (out.residual_bound > defect_bound) {
    throw NearDefective("eigenvector residual " + to_string(out.residual_bound, 6) +
                        " is far above rounding; the matrix is defective at this precision");
  }
  LinalgOptions inv_opts = opts;
  inv_opts.singular_margin_digits = std::max(opts.singular_margin_digits, static_cast<int>(p.digits * 0.75));
  try {
    InverseResult inv = lu_invert(v, inv_opts);
    out.inverse_eigenvectors = std::move(inv.inverse);
    out.condition_estimate = one_norm(v) * one_norm(out.inverse_eigenvectors);
  } catch (const SingularMatrix&) {
    throw NearDefective("eigenvector matrix is numerically singular; the matrix is defective at this precision");
  }
  return out;
}

}  // namespace nhssh
