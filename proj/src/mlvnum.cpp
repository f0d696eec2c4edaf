#include "penta/mlvnum.hpp"

#include <omp.h>

#include <cmath>
#include <iomanip>
#include <sstream>

#include "penta/ncseries.hpp"

namespace penta {

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigFloat r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& o) {
  BigFloat n = o.re * o.re + o.im * o.im;
  BigFloat r = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = std::move(r);
  return *this;
}
BigFloat BigComplex::abs() const { return sqrt(re * re + im * im); }
std::complex<double> BigComplex::to_double() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

std::string ApproxValue::to_string(int decimals) const {
  std::ostringstream os;
  os << value.re.str(decimals, std::ios_base::fixed);
  if (std::abs(value.im.convert_to<double>()) > err) {
    os << (value.im < 0 ? " - " : " + ");
    BigFloat a = abs(value.im);
    os << a.str(decimals, std::ios_base::fixed) << "i";
  }
  os << " ± " << std::setprecision(2) << std::scientific << err;
  return os.str();
}

double OdeReport::max_diff() const {
  double m = 0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.fd - r.rhs));
  return m;
}

namespace {

// Working precision for a scope, in decimal digits.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits) : old_(BigFloat::default_precision()) {
    BigFloat::default_precision(static_cast<unsigned>(digits));
  }
  ~PrecisionScope() { BigFloat::default_precision(old_); }

 private:
  unsigned old_;
};

BigComplex root_of_unity(int N, int c) {
  c = mod(c, N);
  if (c == 0) return BigComplex(BigFloat(1));
  if (2 * c == N) return BigComplex(BigFloat(-1));
  if (4 * c == N) return BigComplex(BigFloat(0), BigFloat(1));
  if (4 * c == 3 * N) return BigComplex(BigFloat(0), BigFloat(-1));
  const BigFloat t = 2 * acos(BigFloat(-1)) * c / N;
  return BigComplex(cos(t), sin(t));
}

BigComplex big(std::complex<double> z) { return BigComplex(BigFloat(z.real()), BigFloat(z.imag())); }

struct GLetter {
  bool zero = false;
  BigComplex v;
};

// I(0; s_1..s_j; y) = int_{0<t_1<..<t_j<y} prod dt_i/(t_i - s_i) for j = 0..n, via power
// series in t truncated at M (coefficients carry y^m). Needs s_1 != 0.
std::vector<BigComplex> prefix_integrals(const std::vector<GLetter>& s, const BigFloat& y, int M) {
  std::vector<BigComplex> out{BigComplex(BigFloat(1))};
  std::vector<BigComplex> C(M + 1), D(M + 1);
  C[0] = BigComplex(BigFloat(1));
  const BigComplex Y(y);
  for (const auto& l : s) {
    if (l.zero) {
      if (!(C[0].re == 0 && C[0].im == 0))
        throw std::logic_error("prefix_integrals: divergent word");
      for (int m = 1; m <= M; ++m) C[m] /= BigComplex(BigFloat(m));
    } else {
      BigComplex prev;
      for (int n = 0; n <= M; ++n) {
        D[n] = (prev * Y - C[n]) / l.v;
        prev = D[n];
      }
      C[0] = BigComplex();
      for (int m = 0; m < M; ++m) C[m + 1] = D[m] * Y / BigComplex(BigFloat(m + 1));
    }
    BigComplex v;
    for (const auto& c : C) v += c;
    out.push_back(std::move(v));
  }
  return out;
}

MplFamily family_of(const IndexPair& p, const IndexPair& q) {
  if (p.depth() && q.depth() && p.N != q.N) throw std::invalid_argument("levels differ");
  MplFamily f;
  f.N = p.depth() ? p.N : q.N;
  for (const auto* r : {&p, &q})
    for (std::size_t i = 0; i < r->a.size(); ++i) {
      f.c.push_back(r->a[i]);
      f.e.push_back(mod(r->e[i], f.N));
      f.var.push_back(0);
    }
  if (p.depth()) f.var[p.depth() - 1] |= 1;
  if (q.depth()) f.var.back() |= 2;
  return f;
}

}  // namespace

ApproxValue mlv(const IndexPair& p, int digits) {
  p.validate();
  if (digits < 1) throw std::invalid_argument("mlv: digits must be positive");
  PrecisionScope ps(digits + 15);
  const int k = p.depth();
  if (k == 0) return {BigComplex(BigFloat(1)), 0.0};
  if (p.a.back() == 1 && mod(p.e.back(), p.N) == 0)
    throw NonAdmissible("mlv: index " + p.to_string() + " is not admissible");
  // innermost first: 1/(xi_j..xi_k), then a_j - 1 zeros
  std::vector<GLetter> s;
  for (int j = 0; j < k; ++j) {
    int c = 0;
    for (int i = j; i < k; ++i) c -= p.e[i];
    s.push_back({false, root_of_unity(p.N, c)});
    for (int z = 1; z < p.a[j]; ++z) s.push_back({true, {}});
  }
  const int n = static_cast<int>(s.size());
  std::vector<GLetter> r;
  for (int i = n - 1; i >= 0; --i) {
    if (s[i].zero)
      r.push_back({false, BigComplex(BigFloat(1))});
    else {
      BigComplex v = BigComplex(BigFloat(1)) - s[i].v;
      const bool z = v.abs() < BigFloat("1e-30");
      r.push_back({z, z ? BigComplex() : v});
    }
  }
  double rho = 1.0;
  for (const auto& l : r)
    if (!l.zero) rho = std::min(rho, l.v.abs().convert_to<double>());
  if (rho <= 0.5 + 1e-9) throw DomainError("mlv: level too large for the split at 1/2");
  const double ratio = 0.5 / rho;
  auto tail = [&](int M, int j) {
    if (j == 0) return 0.0;
    return 2.0 * std::pow(M + 1.0, j) * std::pow(ratio, M) / (1 - ratio) / std::pow(rho, j);
  };
  const double target = std::pow(10.0, -(digits + 3));
  int M = 20;
  while (tail(M, n) > target) M += 10;

  const BigFloat half = BigFloat(1) / 2;
  auto A = prefix_integrals(s, half, M);
  auto B = prefix_integrals(r, half, M);
  BigComplex sum;
  double err = std::pow(10.0, -(digits + 2));
  for (int j = 0; j <= n; ++j) {
    // reflecting t -> 1 - t reverses the orientation once per letter
    if ((n - j) % 2) sum -= A[j] * B[n - j];
    else sum += A[j] * B[n - j];
    const double a = A[j].abs().convert_to<double>(), b = B[n - j].abs().convert_to<double>();
    const double ta = tail(M, j), tb = tail(M, n - j);
    err += ta * b + a * tb + ta * tb;
  }
  if (k % 2) {
    sum.re = -sum.re;
    sum.im = -sum.im;
  }
  return {sum, err};
}

ApproxValue mpl_value(const MplFamily& f, std::complex<double> x, std::complex<double> y,
                      int digits) {
  if (f.c.empty()) return {BigComplex(BigFloat(1)), 0.0};
  if (f.var.back() == 0) throw DomainError("mpl_value: outermost slot carries no variable");
  if (std::abs(x) >= 1 || std::abs(y) >= 1) throw DomainError("mpl_value: need |x|, |y| < 1");
  PrecisionScope ps(digits + 15);
  const int K = static_cast<int>(f.c.size());
  std::vector<BigComplex> u(K);
  const BigComplex X = big(x), Y = big(y);
  for (int j = 0; j < K; ++j) {
    u[j] = root_of_unity(f.N, f.e[j]);
    if (f.var[j] & 1) u[j] *= X;
    if (f.var[j] & 2) u[j] *= Y;
  }
  const double rho = u.back().abs().convert_to<double>();
  const double target = std::pow(10.0, -(digits + 2));
  auto tail = [&](int M) {
    return rho == 0 ? 0.0 : std::pow(M + 1.0, K - 1) * std::pow(rho, M + 1) / (1 - rho);
  };
  int M = 1;
  while (tail(M) > target) M += 5;

  std::vector<BigComplex> pw(K, BigComplex(BigFloat(1))), P(K);
  for (int m = 1; m <= M; ++m) {
    for (int j = K - 1; j >= 0; --j) {
      pw[j] *= u[j];
      BigComplex t = pw[j];
      BigFloat den = pow(BigFloat(m), f.c[j]);
      t.re /= den;
      t.im /= den;
      if (j > 0) t *= P[j - 1];
      P[j] += t;
    }
  }
  return {P.back(), tail(M) + std::pow(10.0, -(digits + 2))};
}

ApproxValue mpl_two_var(const IndexPair& p, const IndexPair& q, std::complex<double> x,
                        std::complex<double> y, int digits) {
  p.validate();
  q.validate();
  return mpl_value(family_of(p, q), x, y, digits);
}

OdeReport ode_check(const IndexPair& p, const IndexPair& q, std::complex<double> x,
                    std::complex<double> y, double delta, int digits) {
  p.validate();
  q.validate();
  if (p.depth() == 0) throw std::invalid_argument("ode_check: p must be nonempty");
  const MplFamily f = family_of(p, q);
  const bool two = q.depth() > 0;
  const Space sp = two ? Space::M05N_xy : Space::M04N;
  const int N = f.N;
  auto val = [&](const MplFamily& g, std::complex<double> a, std::complex<double> b) {
    return mpl_value(g, a, b, digits).approx();
  };
  auto zeta = [&](int a) { return std::polar(1.0, 2 * M_PI * mod(a, N) / N); };
  // (d/dx, d/dy) parts of a form letter
  auto form = [&](Letter l) -> std::pair<std::complex<double>, std::complex<double>> {
    if (!two) return {l == 0 ? 1.0 / x : 1.0 / (x - zeta(l - 1)), 0.0};
    if (l == 0) return {1.0 / x, 0.0};
    if (l <= N) return {1.0 / (x - zeta(l - 1)), 0.0};
    if (l == N + 1) return {0.0, 1.0 / y};
    if (l <= 2 * N + 1) return {0.0, 1.0 / (y - zeta(l - N - 2))};
    const auto d = x * y - zeta(l - 2 * N - 2);
    return {y / d, x / d};
  };
  std::complex<double> rx = 0, ry = 0;
  for (const auto& t : mpl_differential(f, sp)) {
    const auto v = t.rest.c.empty() ? std::complex<double>(1) : val(t.rest, x, y);
    const auto w = form(t.letter);
    const double c = t.coeff.get_d();
    rx += c * w.first * v;
    ry += c * w.second * v;
  }
  OdeReport rep;
  rep.tol = 1e4 * delta * delta + 1e-12;
  const auto fx = (val(f, x + delta, y) - val(f, x - delta, y)) / (2 * delta);
  rep.rows.push_back({two ? "d/dx" : "d/dz", fx, rx});
  if (two) {
    const auto fy = (val(f, x, y + delta) - val(f, x, y - delta)) / (2 * delta);
    rep.rows.push_back({"d/dy", fy, ry});
  }
  return rep;
}

std::complex<double> bar_path_value(const BarTensor& b, std::complex<double> x,
                                    std::complex<double> y) {
  using Cd = std::complex<double>;
  if (b.space() == Space::WN_z) return bar_path_value(to_xy(b), x, y);
  const int N = b.N();
  const bool two = b.space() == Space::M05N_xy;
  const double r = two ? std::max({std::abs(x), std::abs(y), std::abs(x * y)}) : std::abs(x);
  if (r >= 1) throw DomainError("bar_path_value: endpoint outside the unit polydisc");
  const int T = std::max(60, static_cast<int>(std::ceil(40.0 / -std::log10(std::max(r, 1e-3)))) + 40);
  auto zeta = [&](int a) { return std::polar(1.0, 2 * M_PI * a / N); };
  Cd total = 0;
  for (const auto& [w, coef] : b.series().terms()) {
    std::vector<Cd> f(T + 1), h(T + 1);
    f[0] = 1;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const int l = *it;
      // kind 0: dt/t; kind 1: alpha dt/(alpha t - s); kind 2: 2 P t dt/(P t^2 - s)
      int kind = 0;
      Cd alpha = 0, s = 0;
      if (!two) {
        if (l > 0) kind = 1, alpha = x, s = zeta(l - 1);
      } else if (l == 0 || l == N + 1) {
        kind = 0;
      } else if (l <= N) {
        kind = 1, alpha = x, s = zeta(l - 1);
      } else if (l <= 2 * N + 1) {
        kind = 1, alpha = y, s = zeta(l - N - 2);
      } else {
        kind = 2, alpha = x * y, s = zeta(l - 2 * N - 2);
      }
      if (kind == 0) {
        if (f[0] != Cd(0)) throw DomainError("bar_path_value: word needs regularization at 0");
        for (int m = 1; m <= T; ++m) f[m] /= double(m);
        continue;
      }
      for (int n = 0; n <= T; ++n) {
        Cd v = 0;
        if (kind == 1) {
          v = (n ? alpha * h[n - 1] : Cd(0)) - alpha * f[n];
        } else {
          v = (n >= 2 ? alpha * h[n - 2] : Cd(0)) - (n ? 2. * alpha * f[n - 1] : Cd(0));
        }
        h[n] = v / s;
      }
      f[0] = 0;
      for (int m = 0; m < T; ++m) f[m + 1] = h[m] / double(m + 1);
    }
    Cd v = 0;
    for (const auto& c : f) v += c;
    total += coef.get_d() * v;
  }
  return total;
}

// --- KZ holonomy ---

namespace {

using C = std::complex<double>;
using Vec = std::vector<C>;

struct Layout {
  int L, W;
  std::vector<std::size_t> off, pw;  // off[d]: start of length-d block; pw[d] = L^d
  std::size_t size;
  Layout(int L_, int W_) : L(L_), W(W_) {
    off.assign(W + 2, 0);
    pw.assign(W + 2, 1);
    for (int d = 1; d <= W + 1; ++d) pw[d] = pw[d - 1] * L;
    for (int d = 1; d <= W + 1; ++d) off[d] = off[d - 1] + pw[d - 1];
    size = off[W + 1];
  }
};

Vec lmul(const Layout& g, int l, const Vec& v) {
  Vec out(g.size);
  for (int d = 0; d < g.W; ++d)
    for (std::size_t r = 0; r < g.pw[d]; ++r) out[g.off[d + 1] + l * g.pw[d] + r] = v[g.off[d] + r];
  return out;
}

Vec rmul(const Layout& g, int l, const Vec& v) {
  Vec out(g.size);
  for (int d = 0; d < g.W; ++d)
    for (std::size_t r = 0; r < g.pw[d]; ++r) out[g.off[d + 1] + r * g.L + l] = v[g.off[d] + r];
  return out;
}

void axpy(Vec& y, C a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double norm_inf(const Vec& v) {
  double m = 0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

ComplexSeries to_series(const Layout& g, const Vec& v, AlphabetPtr a) {
  ComplexSeries s(std::move(a), g.W);
  for (int d = 0; d <= g.W; ++d)
    for (std::size_t r = 0; r < g.pw[d]; ++r) {
      const C c = v[g.off[d] + r];
      if (c == C(0)) continue;
      Word w(d);
      std::size_t x = r;
      for (int i = d - 1; i >= 0; --i) {
        w[i] = static_cast<Letter>(x % g.L);
        x /= g.L;
      }
      s.add(w, c);
    }
  return s;
}

Vec to_dense(const Layout& g, const ComplexSeries& s) {
  Vec v(g.size);
  for (const auto& [w, c] : s.terms()) {
    std::size_t r = 0;
    for (Letter l : w) r = r * g.L + l;
    v[g.off[w.size()] + r] = c;
  }
  return v;
}

struct Local {
  Vec value;
  double tail;
};

// P(w0) where H = P(w) w^{l0} solves dH/dw = (l0/w + sum l/(w - s)) H, P(0) = 1.
Local frobenius(const Layout& g, int l0, const std::vector<std::pair<int, C>>& sing, double w0) {
  Vec P(g.size);
  P[0] = 1;
  Vec sum = P;
  std::vector<Vec> d;
  for (const auto& [l, s] : sing) {
    Vec x(g.size);
    axpy(x, -1.0 / s, P);
    d.push_back(std::move(x));
  }
  double wn = 1, last = 0;
  int small = 0;
  for (int n = 1; n < 2000; ++n) {
    Vec R(g.size);
    for (std::size_t a = 0; a < sing.size(); ++a) axpy(R, 1.0, lmul(g, sing[a].first, d[a]));
    Vec term = R;
    for (auto& c : term) c /= double(n);
    Vec Pn = term;
    for (int k = 1; k <= g.W; ++k) {
      Vec t = lmul(g, l0, term);
      axpy(t, -1.0, rmul(g, l0, term));
      for (auto& c : t) c /= double(n);
      term = std::move(t);
      axpy(Pn, 1.0, term);
    }
    wn *= w0;
    axpy(sum, wn, Pn);
    for (std::size_t a = 0; a < sing.size(); ++a) {
      axpy(d[a], -1.0, Pn);
      for (auto& c : d[a]) c /= sing[a].second;
    }
    last = norm_inf(Pn) * wn;
    small = last < 1e-18 ? small + 1 : 0;
    if (small >= 3 && n > g.W + 2) break;
  }
  return {sum, last * 10};
}

template <bool Par>
Vec rhs(int N, int W, C z, const Vec& h) {
  const Layout g(N + 1, W);
  std::vector<C> coef(N + 1);
  coef[0] = 1.0 / z;
  for (int a = 0; a < N; ++a) coef[1 + a] = 1.0 / (z - std::polar(1.0, 2 * M_PI * a / N));
  Vec out(g.size);
  for (int d = 1; d <= W; ++d) {
    const auto n = static_cast<long>(g.pw[d]);
    const std::size_t blk = g.pw[d - 1];
#pragma omp parallel for if (Par) schedule(static)
    for (long r = 0; r < n; ++r) {
      const std::size_t l = static_cast<std::size_t>(r) / blk, rest = static_cast<std::size_t>(r) % blk;
      out[g.off[d] + r] = coef[l] * h[g.off[d - 1] + rest];
    }
  }
  return out;
}

Vec transport(int N, int W, const Vec& h0, double z0, double z1, int steps, bool par) {
  const double hstep = (z1 - z0) / steps;
  auto f = [&](double z, const Vec& v) { return par ? rhs<true>(N, W, z, v) : rhs<false>(N, W, z, v); };
  Vec h = h0;
  for (int i = 0; i < steps; ++i) {
    const double z = z0 + i * hstep;
    Vec k1 = f(z, h);
    Vec t = h;
    axpy(t, hstep / 2, k1);
    Vec k2 = f(z + hstep / 2, t);
    t = h;
    axpy(t, hstep / 2, k2);
    Vec k3 = f(z + hstep / 2, t);
    t = h;
    axpy(t, hstep, k3);
    Vec k4 = f(z + hstep, t);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += hstep / 6 * (k1[j] + 2. * k2[j] + 2. * k3[j] + k4[j]);
  }
  return h;
}

}  // namespace

namespace kz {
Vec rhs_serial(int N, int W, C z, const Vec& h) { return rhs<false>(N, W, z, h); }
Vec rhs_omp(int N, int W, C z, const Vec& h) { return rhs<true>(N, W, z, h); }
}  // namespace kz

KZResult phi_kz(int N, int weight, const PathSpec& spec) {
  if (N < 1) throw std::invalid_argument("phi_kz: level must be >= 1");
  if (weight < 0 || weight > 8) throw std::invalid_argument("phi_kz: weight out of range 0..8");
  if (spec.steps < 4) throw std::invalid_argument("phi_kz: too few steps");
  double gap = 2.0;  // nearest singular point to z = 1 other than 1
  for (int a = 1; a < N; ++a) gap = std::min(gap, std::abs(1.0 - std::polar(1.0, 2 * M_PI * a / N)));
  if (!(spec.eps > 0 && spec.eps < 0.5 && spec.eps < 0.8 * gap))
    throw DomainError("phi_kz: contour failure (endpoint radius vs. nearby roots of unity)");
  auto F = alphabet_fn1(N);
  const Layout g(N + 1, weight);
  const double e = spec.eps;

  std::vector<std::pair<int, C>> s0, s1;
  for (int a = 0; a < N; ++a) s0.emplace_back(1 + a, std::polar(1.0, 2 * M_PI * a / N));
  s1.emplace_back(0, 1.0);
  for (int a = 1; a < N; ++a) s1.emplace_back(1 + a, 1.0 - std::polar(1.0, 2 * M_PI * a / N));
  Local p0 = frobenius(g, 0, s0, e);
  Local p1 = frobenius(g, 1, s1, e);

  auto power = [&](int l, double t) {
    return exp_series(ComplexSeries::letter(F, weight, static_cast<Letter>(l), C(std::log(t))));
  };
  const ComplexSeries H0 = to_series(g, p0.value, F) * power(0, e);
  const ComplexSeries H1 = to_series(g, p1.value, F) * power(1, e);

  const Vec start = to_dense(g, H0);
  Vec a = transport(N, weight, start, e, 1 - e, spec.steps, spec.parallel);
  Vec b = transport(N, weight, start, e, 1 - e, 2 * spec.steps, spec.parallel);
  Vec diff = b;
  axpy(diff, -1.0, a);
  axpy(b, 1.0 / 15, diff);  // Richardson

  KZResult res;
  res.phi = inverse_series(H1) * to_series(g, b, F);
  res.err = norm_inf(diff) / 15 + p0.tail + p1.tail + 1e-13;
  return res;
}

ComplexSeries kz_associator(int weight, const PathSpec& spec) {
  ComplexSeries h = phi_kz(1, weight, spec).phi;
  auto F2 = alphabet_f2();
  return substitute(h, {ComplexSeries::letter(F2, weight, 0), ComplexSeries::letter(F2, weight, 1)});
}

}  // namespace penta
