#include "forge/graded.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace forge {

GradedSpace GradedSpace::make(std::vector<std::pair<int, std::string>> basis) {
  std::stable_sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  std::set<std::string> seen;
  GradedSpace s;
  for (auto& [d, n] : basis) {
    if (!seen.insert(n).second) throw std::invalid_argument("GradedSpace: duplicate name " + n);
    s.degrees.push_back(d);
    s.names.push_back(std::move(n));
  }
  return s;
}

std::vector<int> GradedSpace::of_degree(int d) const {
  std::vector<int> out;
  for (int k = 0; k < dim(); ++k)
    if (degrees[k] == d) out.push_back(k);
  return out;
}

int GradedSpace::find(const std::string& name) const {
  for (int k = 0; k < dim(); ++k)
    if (names[k] == name) return k;
  return -1;
}

int swap_sign_int(PowerKind k, int d1, int d2) {
  int e = d1 * d2;
  if (k == PowerKind::exterior) e += 1;
  return (e % 2 == 0) ? 1 : -1;
}

bool repeat_vanishes(PowerKind k, int d) { return swap_sign_int(k, d, d) == -1; }

Word canonicalize(const GradedSpace& V, PowerKind kind, std::vector<int> word, Scalar coeff) {
  int sign = 1;
  for (std::size_t i = 1; i < word.size(); ++i)
    for (std::size_t j = i; j > 0 && word[j] < word[j - 1]; --j) {
      sign *= swap_sign_int(kind, V.degree(word[j - 1]), V.degree(word[j]));
      std::swap(word[j - 1], word[j]);
    }
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (word[i] == word[i + 1] && repeat_vanishes(kind, V.degree(word[i])))
      return Word{Scalar(0), {}};
  return Word{coeff * Scalar(sign), std::move(word)};
}

Scalar power_sign(PowerKind kind, const std::vector<int>& perm, const std::vector<int>& degrees) {
  if (perm.size() != degrees.size()) throw std::invalid_argument("power_sign: length mismatch");
  // Bubble the permuted word back to identity, accumulating adjacent-swap signs.
  std::vector<int> w = perm;
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i)
    for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
      sign *= swap_sign_int(kind, degrees[w[j - 1]], degrees[w[j]]);
      std::swap(w[j - 1], w[j]);
    }
  return Scalar(sign);
}

namespace {

void enumerate(const GradedSpace& V, PowerKind kind, int arity, int min_total, int max_total,
               std::vector<int>& cur, int cur_total, int next_min, PowerSpace& out) {
  if (static_cast<int>(cur.size()) == arity) {
    if (cur_total >= min_total && cur_total <= max_total) {
      out.monos.push_back(cur);
      out.mono_degree.push_back(cur_total);
    }
    return;
  }
  int remaining = arity - static_cast<int>(cur.size());
  for (int k = next_min; k < V.dim(); ++k) {
    int d = V.degree(k);
    // degrees are non-decreasing in flat order, so the cheapest completion
    // uses d for every remaining slot.
    if (cur_total + remaining * d > max_total) break;
    int max_completion = cur_total + remaining * V.degree(V.dim() - 1);
    if (max_completion < min_total) return;
    bool repeat = !cur.empty() && cur.back() == k;
    if (repeat && repeat_vanishes(kind, d)) continue;
    cur.push_back(k);
    enumerate(V, kind, arity, min_total, max_total, cur, cur_total + d, k, out);
    cur.pop_back();
  }
}

}  // namespace

PowerSpace power_space_window(const GradedSpace& V, PowerKind kind, int arity, int min_total,
                              int max_total) {
  if (arity < 0) throw std::invalid_argument("power_space: negative arity");
  PowerSpace p;
  p.V = &V;
  p.arity = arity;
  p.kind = kind;
  std::vector<int> cur;
  if (arity == 0) {
    if (0 >= min_total && 0 <= max_total) {
      p.monos.push_back({});
      p.mono_degree.push_back(0);
    }
    return p;
  }
  if (V.dim() > 0) enumerate(V, kind, arity, min_total, max_total, cur, 0, 0, p);
  return p;
}

PowerSpace power_space(const GradedSpace& V, PowerKind kind, int arity) {
  int lo = 0, hi = 0;
  if (V.dim() > 0) {
    lo = arity * std::min(0, V.degree(0));
    hi = arity * std::max(0, V.degree(V.dim() - 1));
  }
  return power_space_window(V, kind, arity, lo, hi);
}

int PowerSpace::find(const std::vector<int>& m) const {
  auto it = std::lower_bound(monos.begin(), monos.end(), m);
  if (it == monos.end() || *it != m) return -1;
  return static_cast<int>(it - monos.begin());
}

long power_dim_formula(const GradedSpace& V, PowerKind kind, int arity) {
  // Product over generators of (1 + t) for sign-alternating generators and
  // 1/(1-t) for sign-symmetric ones, truncated at t^arity.
  std::vector<long> poly(arity + 1, 0);
  poly[0] = 1;
  for (int k = 0; k < V.dim(); ++k) {
    bool alternating = repeat_vanishes(kind, V.degree(k));
    std::vector<long> next(arity + 1, 0);
    for (int a = 0; a <= arity; ++a) {
      if (poly[a] == 0) continue;
      if (alternating) {
        next[a] += poly[a];
        if (a + 1 <= arity) next[a + 1] += poly[a];
      } else {
        for (int b = a; b <= arity; ++b) next[b] += poly[a];
      }
    }
    poly = std::move(next);
  }
  return poly[arity];
}

GradedMap make_graded_map(const GradedSpace& dom, const GradedSpace& cod, int degree, Matrix mat) {
  if (mat.rows != cod.dim() || mat.cols != dom.dim())
    throw std::invalid_argument("graded map: shape mismatch");
  for (int r = 0; r < mat.rows; ++r)
    for (int c = 0; c < mat.cols; ++c)
      if (!mat.at(r, c).is_zero() && cod.degree(r) != dom.degree(c) + degree)
        throw std::invalid_argument("graded map: entry off the declared degree");
  return GradedMap{&dom, &cod, degree, std::move(mat)};
}

GradedMap zero_graded_map(const GradedSpace& dom, const GradedSpace& cod, int degree) {
  return GradedMap{&dom, &cod, degree, Matrix(cod.dim(), dom.dim())};
}

Matrix derivation_extension(const GradedMap& f, const PowerSpace& dom_power,
                            const PowerSpace& cod_power) {
  if (f.dom != f.cod) throw std::invalid_argument("derivation_extension: needs an endomorphism");
  if (dom_power.V != f.dom || cod_power.V != f.dom || dom_power.kind != cod_power.kind ||
      dom_power.arity != cod_power.arity)
    throw std::invalid_argument("derivation_extension: power mismatch");
  const GradedSpace& V = *f.dom;
  Matrix out(cod_power.dim(), dom_power.dim());
  for (int c = 0; c < dom_power.dim(); ++c) {
    const std::vector<int>& w = dom_power.monos[c];
    Scalar pass(1);
    for (std::size_t slot = 0; slot < w.size(); ++slot) {
      if (slot > 0) pass *= sign_pow(static_cast<long>(f.degree) * V.degree(w[slot - 1]));
      for (int t = 0; t < V.dim(); ++t) {
        const Scalar& entry = f.mat.at(t, w[slot]);
        if (entry.is_zero()) continue;
        std::vector<int> word = w;
        word[slot] = t;
        Word cw = canonicalize(V, dom_power.kind, std::move(word), pass * entry);
        if (cw.coeff.is_zero()) continue;
        int r = cod_power.find(cw.idx);
        if (r < 0) throw std::out_of_range("derivation_extension: target monomial outside window");
        out.at(r, c) += cw.coeff;
      }
    }
  }
  return out;
}

SparseVec power_multiply(const PowerSpace& A, const SparseVec& a, const PowerSpace& B,
                         const SparseVec& b, const PowerSpace& AB) {
  if (A.V != B.V || A.V != AB.V || A.kind != B.kind || A.kind != AB.kind ||
      A.arity + B.arity != AB.arity)
    throw std::invalid_argument("power_multiply: space mismatch");
  SparseVec out;
  for (const auto& [ia, ca] : a)
    for (const auto& [ib, cb] : b) {
      std::vector<int> word = A.monos[ia];
      word.insert(word.end(), B.monos[ib].begin(), B.monos[ib].end());
      Word cw = canonicalize(*A.V, A.kind, std::move(word), ca * cb);
      if (cw.coeff.is_zero()) continue;
      int r = AB.find(cw.idx);
      if (r < 0) throw std::out_of_range("power_multiply: product monomial outside window");
      sv_add(out, r, cw.coeff);
    }
  return out;
}

std::vector<std::vector<std::tuple<int, int, Scalar>>> unshuffle(const PowerSpace& P,
                                                                 const PowerSpace& P1,
                                                                 const PowerSpace& P2,
                                                                 bool drop_missing) {
  if (P.V != P1.V || P.V != P2.V || P.kind != P1.kind || P.kind != P2.kind ||
      P1.arity + P2.arity != P.arity)
    throw std::invalid_argument("unshuffle: space mismatch");
  const GradedSpace& V = *P.V;
  int k = P.arity;
  int j = P1.arity;
  std::vector<std::vector<std::tuple<int, int, Scalar>>> out(P.dim());
  // Iterate over j-subsets of positions as bitmask-free combinations.
  std::vector<int> sel(j);
  for (int m = 0; m < P.dim(); ++m) {
    const std::vector<int>& w = P.monos[m];
    std::vector<bool> in(k, false);
    std::map<std::pair<int, int>, Scalar> acc;
    auto emit = [&]() {
      // Sign: for every pair (t not selected, s selected, t < s), the selected
      // factor moves left past the unselected one.
      int sign = 1;
      for (int s = 0; s < k; ++s) {
        if (!in[s]) continue;
        for (int t = 0; t < s; ++t)
          if (!in[t]) sign *= swap_sign_int(P.kind, V.degree(w[t]), V.degree(w[s]));
      }
      std::vector<int> w1, w2;
      for (int t = 0; t < k; ++t) (in[t] ? w1 : w2).push_back(w[t]);
      int i1 = P1.find(w1);
      int i2 = P2.find(w2);
      if (i1 < 0 || i2 < 0) {
        if (drop_missing) return;
        throw std::out_of_range("unshuffle: factor monomial outside window");
      }
      acc[{i1, i2}] += Scalar(sign);
    };
    // enumerate combinations of positions 0..k-1 taken j at a time
    if (j == 0) {
      in.assign(k, false);
      emit();
    } else {
      for (int t = 0; t < j; ++t) sel[t] = t;
      for (;;) {
        in.assign(k, false);
        for (int t = 0; t < j; ++t) in[sel[t]] = true;
        emit();
        int t = j - 1;
        while (t >= 0 && sel[t] == k - j + t) --t;
        if (t < 0) break;
        ++sel[t];
        for (int s = t + 1; s < j; ++s) sel[s] = sel[s - 1] + 1;
      }
    }
    for (const auto& [key, c] : acc)
      if (!c.is_zero()) out[m].push_back({key.first, key.second, c});
  }
  return out;
}

}  // namespace forge
