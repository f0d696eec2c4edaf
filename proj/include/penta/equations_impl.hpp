#pragma once
// Template bodies for equations.hpp.

namespace penta {

namespace eqdetail {

template <class K>
BasicSeries<K> truncated(const BasicSeries<K>& x, int D, const char* what) {
  if (x.maxdeg() < D)
    throw TruncationMismatch(std::string(what) + ": input truncated at " +
                             std::to_string(x.maxdeg()) + " < " + std::to_string(D));
  return x.with_maxdeg(D);
}

template <class K>
std::vector<BasicSeries<K>> conv(const std::vector<Series>& ims, int D) {
  std::vector<BasicSeries<K>> r;
  r.reserve(ims.size());
  for (const auto& s : ims) r.push_back(convert<K>(s.with_maxdeg(D)));
  return r;
}

// exp(c * x) for a degree-1 x
template <class K>
BasicSeries<K> exp_scaled(BasicSeries<K> x, const K& c) {
  x *= c;
  return exp_series(x);
}

template <class K>
BasicSeries<K> minus_one(BasicSeries<K> x) {
  x.add(Word{}, -Coeff<K>::one());
  return x;
}

template <class K>
void require_level(const BasicSeries<K>& h, int N, const char* what) {
  if (N < 1) throw std::invalid_argument(std::string(what) + ": level must be >= 1");
  if (!h.alphabet().same_as(*alphabet_fn1(N)))
    throw AlphabetMismatch(std::string(what) + ": h is not over F_{N+1} with N=" +
                           std::to_string(N));
}

template <class K>
void require_f2(const BasicSeries<K>& g, const char* what) {
  if (!g.alphabet().same_as(*alphabet_f2()))
    throw AlphabetMismatch(std::string(what) + ": g is not over F_2");
}

// C = -A - sum B(a) on F_{N+1} (or -A-B on F_2 when N=0 is passed with F_2 alphabet).
template <class K>
BasicSeries<K> letter_C(const AlphabetPtr& a, int D) {
  BasicSeries<K> c(a, D);
  for (int i = 0; i < a->size(); ++i) c.add(Word{static_cast<Letter>(i)}, -Coeff<K>::one());
  return c;
}

}  // namespace eqdetail

template <class K>
Residual<K> residual_pentagon(const BasicSeries<K>& g0, int D) {
  eqdetail::require_f2(g0, "pentagon");
  auto g = eqdetail::truncated(g0, D, "pentagon");
  const PentagonMaps& m = pentagon_maps(1, D);
  auto sub = [&](const std::vector<Series>& ims) {
    return substitute(g, eqdetail::conv<K>(ims, D));
  };
  BasicSeries<K> lhs = sub(m.g_1_2_34) * sub(m.g_12_3_4);
  BasicSeries<K> rhs = sub(m.g_2_3_4) * sub(m.g_1_23_4) * sub(m.g_1_2_3);
  return {Eq::Pentagon, {m.q->normal_form(lhs - rhs)}};
}

template <class K>
Residual<K> residual_hexagons(const BasicSeries<K>& g0, const K& mu, int D) {
  eqdetail::require_f2(g0, "hexagons");
  auto g = eqdetail::truncated(g0, D, "hexagons");
  const AlphabetPtr F = alphabet_f2();
  auto A = BasicSeries<K>::letter(F, D, 0);
  auto B = BasicSeries<K>::letter(F, D, 1);
  auto C = eqdetail::letter_C<K>(F, D);
  auto at = [&](const BasicSeries<K>& x, const BasicSeries<K>& y) { return substitute(g, {x, y}); };
  const K half = Coeff<K>::from(Q(1, 2)) * mu;

  BasicSeries<K> first = eqdetail::minus_one(g * at(B, A));
  BasicSeries<K> second = eqdetail::exp_scaled(A, half) * at(C, A) * eqdetail::exp_scaled(C, half) *
                          at(B, C) * eqdetail::exp_scaled(B, half) * g;
  return {Eq::Hexagons, {first, eqdetail::minus_one(second)}};
}

template <class K>
Residual<K> residual_mixed_pentagon(const BasicSeries<K>& g0, const BasicSeries<K>& h0, int N,
                                    int D) {
  eqdetail::require_f2(g0, "mixed pentagon");
  eqdetail::require_level(h0, N, "mixed pentagon");
  auto g = eqdetail::truncated(g0, D, "mixed pentagon");
  auto h = eqdetail::truncated(h0, D, "mixed pentagon");
  const PentagonMaps& m = pentagon_maps(N, D);
  auto sh = [&](const std::vector<Series>& ims) {
    return substitute(h, eqdetail::conv<K>(ims, D));
  };
  BasicSeries<K> lhs = sh(m.h_1_2_34) * sh(m.h_12_3_4);
  BasicSeries<K> rhs =
      substitute(g, eqdetail::conv<K>(m.g_2_3_4_mixed, D)) * sh(m.h_1_23_4) * sh(m.h_1_2_3);
  return {Eq::MixedPentagon, {m.q->normal_form(lhs - rhs)}};
}

template <class K>
Residual<K> residual_octagon(const BasicSeries<K>& h0, const K& mu, int a, int N, int D) {
  eqdetail::require_level(h0, N, "octagon");
  auto h = eqdetail::truncated(h0, D, "octagon");
  const AlphabetPtr F = alphabet_fn1(N);
  auto at = [&](int shift, int sign, bool use_c) {
    return substitute(h, eqdetail::conv<K>(shift_images(N, D, shift, sign, use_c), D));
  };
  auto A = BasicSeries<K>::letter(F, D, 0);
  auto C = eqdetail::letter_C<K>(F, D);
  auto Ba = BasicSeries<K>::letter(F, D, letter_B(a, N));
  auto B0 = BasicSeries<K>::letter(F, D, letter_B(0, N));
  const K half = Coeff<K>::from(Q(1, 2)) * mu;
  const K overN = Coeff<K>::from(Q(1, N)) * mu;

  BasicSeries<K> p = inverse_series(at(a, 1, false));
  p = p * eqdetail::exp_scaled(Ba, half);
  p = p * at(a, -1, true);
  p = p * eqdetail::exp_scaled(C, overN);
  p = p * inverse_series(at(0, -1, true));
  p = p * eqdetail::exp_scaled(B0, half);
  p = p * h;
  p = p * eqdetail::exp_scaled(A, overN);
  return {Eq::Octagon, {eqdetail::minus_one(p)}};
}

template <class K>
Residual<K> residual_special_action(const BasicSeries<K>& h0, int N, int D) {
  eqdetail::require_level(h0, N, "special action");
  auto h = eqdetail::truncated(h0, D, "special action");
  const AlphabetPtr F = alphabet_fn1(N);
  BasicSeries<K> sum = BasicSeries<K>::letter(F, D, 0);
  for (int a = 0; a < N; ++a) {
    auto tau_h = substitute(h, eqdetail::conv<K>(shift_images(N, D, a, 1, false), D));
    sum += adjoint(inverse_series(tau_h), BasicSeries<K>::letter(F, D, letter_B(a, N)));
  }
  auto hc = substitute(h, eqdetail::conv<K>(shift_images(N, D, 0, -1, true), D));
  sum += adjoint(inverse_series(h) * hc, eqdetail::letter_C<K>(F, D));
  return {Eq::SpecialAction, {sum}};
}

template <class K>
Residual<K> residual_distribution(const BasicSeries<K>& h0, int N, int Np, int D) {
  eqdetail::require_level(h0, N, "distribution");
  if (Np < 1 || N % Np != 0)
    throw std::invalid_argument("distribution: " + std::to_string(Np) + " does not divide " +
                                std::to_string(N));
  auto h = eqdetail::truncated(h0, D, "distribution");
  auto pi = substitute(h, eqdetail::conv<K>(pi_images_F(N, Np, D), D));
  auto de = substitute(h, eqdetail::conv<K>(delta_images_F(N, Np, D), D));
  const AlphabetPtr Fp = alphabet_fn1(Np);
  const Letter b0 = letter_B(0, Np);
  K c = pi.coeff(Word{b0});
  auto e = eqdetail::exp_scaled(BasicSeries<K>::letter(Fp, D, b0), c);
  return {Eq::Distribution, {pi - e * de}};
}

}  // namespace penta
