#include "bhlab/group.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "bhlab/errors.hpp"

namespace bhlab {

namespace {

constexpr std::uint64_t kMaxGroupOrder = 1u << 16;

}  // namespace

Group::Group(std::vector<long> factors) : factors_(std::move(factors)) {
  for (long n : factors_)
    if (n < 2) throw input_error("group factors must be >= 2");
  order_ = 1;
  for (long n : factors_) {
    order_ *= static_cast<std::uint64_t>(n);
    if (order_ > kMaxGroupOrder)
      throw cap_error("group order exceeds cap 2^16");
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * static_cast<std::uint64_t>(factors_[i]);
}

Group Group::parse(std::string_view text) {
  std::vector<long> factors;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw input_error("empty group spec");
  while (i < text.size()) {
    skip_ws();
    if (i >= text.size()) break;
    const char c = text[i];
    if (c != 'Z' && c != 'z')
      throw input_error("group spec must look like Z4 or Z2xZ8");
    ++i;
    skip_ws();
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw input_error("missing modulus in group spec");
    factors.push_back(std::stol(std::string(text.substr(start, i - start))));
    skip_ws();
    if (i < text.size()) {
      if (text[i] != 'x' && text[i] != 'X' && text[i] != '*')
        throw input_error("expected 'x' between group factors");
      ++i;
    }
  }
  return Group(std::move(factors));
}

std::string Group::spec_string() const {
  if (factors_.empty()) return "Z1";
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += "x";
    out += "Z" + std::to_string(factors_[i]);
  }
  return out;
}

std::uint32_t Group::index_of(const std::vector<long>& coords) const {
  if (coords.size() != factors_.size())
    throw input_error("coordinate count does not match group rank");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    long c = coords[i] % factors_[i];
    if (c < 0) c += factors_[i];
    idx += static_cast<std::uint64_t>(c) * strides_[i];
  }
  return static_cast<std::uint32_t>(idx);
}

std::vector<long> Group::coords_of(std::uint32_t index) const {
  std::vector<long> coords(factors_.size());
  std::uint64_t rest = index;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    coords[i] = static_cast<long>(rest / strides_[i]);
    rest %= strides_[i];
  }
  return coords;
}

std::uint32_t Group::add(std::uint32_t a, std::uint32_t b) const {
  if (factors_.size() == 1) {
    const std::uint64_t n = static_cast<std::uint64_t>(factors_[0]);
    const std::uint64_t s = a + static_cast<std::uint64_t>(b);
    return static_cast<std::uint32_t>(s >= n ? s - n : s);
  }
  std::uint64_t idx = 0, ra = a, rb = b;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::uint64_t n = static_cast<std::uint64_t>(factors_[i]);
    const std::uint64_t ca = ra / strides_[i], cb = rb / strides_[i];
    ra %= strides_[i];
    rb %= strides_[i];
    std::uint64_t s = ca + cb;
    if (s >= n) s -= n;
    idx += s * strides_[i];
  }
  return static_cast<std::uint32_t>(idx);
}

std::uint32_t Group::neg(std::uint32_t a) const {
  std::uint64_t idx = 0, ra = a;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::uint64_t n = static_cast<std::uint64_t>(factors_[i]);
    const std::uint64_t ca = ra / strides_[i];
    ra %= strides_[i];
    idx += (ca == 0 ? 0 : n - ca) * strides_[i];
  }
  return static_cast<std::uint32_t>(idx);
}

std::uint32_t Group::scale(std::uint32_t a, long k) const {
  std::uint64_t idx = 0, ra = a;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const long n = factors_[i];
    const long ca = static_cast<long>(ra / strides_[i]);
    ra %= strides_[i];
    long c = static_cast<long>((static_cast<long long>(ca) * (k % n)) % n);
    if (c < 0) c += n;
    idx += static_cast<std::uint64_t>(c) * strides_[i];
  }
  return static_cast<std::uint32_t>(idx);
}

TorusValue Group::pairing_fraction(std::uint32_t elem, std::uint32_t chr) const {
  Rational acc(0);
  std::uint64_t re = elem, rc = chr;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const long n = factors_[i];
    const long x = static_cast<long>(re / strides_[i]);
    const long g = static_cast<long>(rc / strides_[i]);
    re %= strides_[i];
    rc %= strides_[i];
    Rational term(static_cast<long>(static_cast<long long>(x) * g % n), n);
    term.canonicalize();
    acc += term;
  }
  return TorusValue(acc);
}

std::complex<double> Group::pairing(std::uint32_t elem, std::uint32_t chr) const {
  const double theta = 2.0 * std::numbers::pi * pairing_fraction(elem, chr).fraction().get_d();
  return {std::cos(theta), std::sin(theta)};
}

std::vector<long> Group::invariant_factors() const {
  // Repeatedly replace pairs (a, b) by (gcd, lcm) until the list forms a
  // divisibility chain; discard trailing 1s.
  std::vector<long> d = factors_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        if (d[j] % d[i] == 0) continue;
        const long g = std::gcd(d[i], d[j]);
        const long l = d[i] / g * d[j];
        d[i] = g;
        d[j] = l;
        changed = true;
      }
  }
  std::sort(d.begin(), d.end());
  std::vector<long> out;
  for (long x : d)
    if (x > 1) out.push_back(x);
  return out;
}

std::size_t Bitset::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : w_) n += std::popcount(w);
  return n;
}

std::size_t Bitset::intersection_count(const Bitset& a, const Bitset& b) {
  std::size_t n = 0;
  const std::size_t m = std::min(a.w_.size(), b.w_.size());
  for (std::size_t i = 0; i < m; ++i) n += std::popcount(a.w_[i] & b.w_[i]);
  return n;
}

std::size_t Bitset::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : w_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h);
}

std::vector<std::uint32_t> Coset::members() const {
  std::vector<std::uint32_t> out;
  out.reserve(subgroup.elements.size());
  for (std::uint32_t v : subgroup.elements)
    out.push_back(subgroup.parent.add(representative, v));
  std::sort(out.begin(), out.end());
  return out;
}

Bitset Coset::mask() const {
  Bitset m(subgroup.parent.order());
  for (std::uint32_t v : subgroup.elements)
    m.set(subgroup.parent.add(representative, v));
  return m;
}

namespace {

// Extends the subgroup S (given by sorted elements + mask) by generator g:
// the result is the union of cosets S, S+g, S+2g, ... until j*g lands in S.
std::vector<std::uint32_t> close_with(const Group& group, const Bitset& mask,
                                      const std::vector<std::uint32_t>& elems,
                                      std::uint32_t g) {
  std::vector<std::uint32_t> out = elems;
  std::uint32_t shift = g;
  while (!mask.test(shift)) {
    for (std::uint32_t v : elems) out.push_back(group.add(v, shift));
    shift = group.add(shift, g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Bitset mask_of(std::uint64_t order, const std::vector<std::uint32_t>& elems) {
  Bitset m(order);
  for (std::uint32_t v : elems) m.set(v);
  return m;
}

// Greedy canonical generators: repeatedly adjoin the smallest element not yet
// generated.  Deterministic, and lexicographically minimal step by step.
std::vector<std::uint32_t> canonical_generators(const Group& group,
                                                const std::vector<std::uint32_t>& elems,
                                                const Bitset& mask) {
  std::vector<std::uint32_t> gens;
  std::vector<std::uint32_t> cur = {0};
  Bitset cur_mask(group.order());
  cur_mask.set(0);
  while (cur.size() < elems.size()) {
    std::uint32_t pick = 0;
    for (std::uint32_t v : elems)
      if (!cur_mask.test(v)) {
        pick = v;
        break;
      }
    gens.push_back(pick);
    cur = close_with(group, cur_mask, cur, pick);
    cur_mask = mask_of(group.order(), cur);
  }
  (void)mask;
  return gens;
}

Subgroup make_subgroup(const Group& group, std::vector<std::uint32_t> elems) {
  Subgroup s;
  s.parent = group;
  std::sort(elems.begin(), elems.end());
  s.mask = mask_of(group.order(), elems);
  s.generators = canonical_generators(group, elems, s.mask);
  s.elements = std::move(elems);
  return s;
}

}  // namespace

Subgroup span_of(const Group& g, const std::vector<std::uint32_t>& gens) {
  std::vector<std::uint32_t> elems = {0};
  Bitset mask(g.order());
  mask.set(0);
  for (std::uint32_t gen : gens) {
    if (gen >= g.order()) throw input_error("generator index out of range");
    if (mask.test(gen)) continue;
    elems = close_with(g, mask, elems, gen);
    mask = mask_of(g.order(), elems);
  }
  return make_subgroup(g, std::move(elems));
}

Subgroup subgroup_from_elements(const Group& g, std::vector<std::uint32_t> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty() || elems[0] != 0)
    throw input_error("subgroup element list must contain the identity");
  Bitset mask = mask_of(g.order(), elems);
  for (std::uint32_t a : elems) {
    if (a >= g.order()) throw input_error("element index out of range");
    if (!mask.test(g.neg(a))) throw input_error("element list not closed under negation");
    for (std::uint32_t b : elems)
      if (!mask.test(g.add(a, b))) throw input_error("element list not closed under addition");
  }
  return make_subgroup(g, std::move(elems));
}

std::vector<Subgroup> enumerate_subgroups(const Group& g, const SubgroupEnumCaps& caps) {
  const std::uint64_t n = g.order();
  std::vector<Subgroup> out;

  if (g.num_factors() <= 1) {
    if (n > caps.max_order_cyclic)
      throw cap_error("cyclic subgroup enumeration capped at order " +
                      std::to_string(caps.max_order_cyclic));
    // One subgroup per divisor d of n: generated by n/d, elements {j*n/d}.
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      std::vector<std::uint32_t> elems;
      elems.reserve(d);
      const std::uint64_t step = n / d;
      for (std::uint64_t j = 0; j < d; ++j)
        elems.push_back(static_cast<std::uint32_t>(j * step));
      out.push_back(make_subgroup(g, std::move(elems)));
    }
  } else {
    if (n > caps.max_order_general)
      throw cap_error("subgroup enumeration for product groups capped at order " +
                      std::to_string(caps.max_order_general));
    // Breadth-first closure: grow every known subgroup by every outside
    // element, deduplicating on the element bitset.
    struct MaskHash {
      std::size_t operator()(const Bitset& b) const { return b.hash(); }
    };
    std::unordered_map<Bitset, std::size_t, MaskHash> seen;
    std::vector<std::vector<std::uint32_t>> pool;
    std::vector<std::uint32_t> trivial = {0};
    seen.emplace(mask_of(n, trivial), 0);
    pool.push_back(trivial);
    for (std::size_t head = 0; head < pool.size(); ++head) {
      const std::vector<std::uint32_t> cur = pool[head];
      const Bitset cur_mask = mask_of(n, cur);
      for (std::uint32_t gen = 1; gen < n; ++gen) {
        if (cur_mask.test(gen)) continue;
        std::vector<std::uint32_t> ext = close_with(g, cur_mask, cur, gen);
        Bitset ext_mask = mask_of(n, ext);
        if (seen.emplace(std::move(ext_mask), pool.size()).second) {
          pool.push_back(std::move(ext));
          if (pool.size() > caps.max_subgroups)
            throw cap_error("subgroup count exceeds cap " +
                            std::to_string(caps.max_subgroups));
        }
      }
    }
    out.reserve(pool.size());
    for (auto& elems : pool) out.push_back(make_subgroup(g, std::move(elems)));
  }

  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.elements.size() != b.elements.size())
      return a.elements.size() < b.elements.size();
    return a.generators < b.generators;
  });
  return out;
}

namespace {

using Matrix = std::vector<std::vector<long long>>;

long long checked_mul(long long a, long long b) {
  const __int128 p = static_cast<__int128>(a) * b;
  if (p > INT64_MAX || p < INT64_MIN) throw cap_error("integer overflow in lattice reduction");
  return static_cast<long long>(p);
}

// Hermite normal form by row operations: returns an upper-triangular basis of
// the lattice spanned by the rows of A (full column rank assumed; here the
// input always contains diag(n) among its rows).
Matrix hermite_basis(Matrix a, std::size_t k) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < k; ++col) {
    for (;;) {
      std::size_t pivot = a.size();
      for (std::size_t r = row; r < a.size(); ++r) {
        if (a[r][col] == 0) continue;
        if (pivot == a.size() ||
            std::llabs(a[r][col]) < std::llabs(a[pivot][col]))
          pivot = r;
      }
      if (pivot == a.size()) throw input_error("lattice basis not full rank");
      std::swap(a[row], a[pivot]);
      bool clean = true;
      for (std::size_t r = row + 1; r < a.size(); ++r) {
        if (a[r][col] == 0) continue;
        const long long q = a[r][col] / a[row][col];
        for (std::size_t c = col; c < k; ++c)
          a[r][c] -= checked_mul(q, a[row][c]);
        if (a[r][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[row][col] < 0)
      for (std::size_t c = col; c < k; ++c) a[row][c] = -a[row][c];
    ++row;
  }
  a.resize(k);
  return a;
}

// Solves t * B = target for integer t, with B upper triangular; the target is
// guaranteed to lie in the row lattice of B.
std::vector<long long> solve_upper(const Matrix& b, const std::vector<long long>& target) {
  const std::size_t k = target.size();
  std::vector<long long> t(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    long long acc = target[j];
    for (std::size_t i = 0; i < j; ++i) acc -= checked_mul(t[i], b[i][j]);
    if (b[j][j] == 0 || acc % b[j][j] != 0)
      throw input_error("lattice solve failed: target outside lattice");
    t[j] = acc / b[j][j];
  }
  return t;
}

// Smith normal form of X with only the inverse column transform tracked:
// returns diag entries d and W = V^{-1} where U X V = diag(d).
void smith_form(Matrix x, std::vector<long long>& d, Matrix& w) {
  const std::size_t k = x.size();
  w.assign(k, std::vector<long long>(k, 0));
  for (std::size_t i = 0; i < k; ++i) w[i][i] = 1;

  const auto col_swap = [&](std::size_t i, std::size_t j) {
    for (auto& row : x) std::swap(row[i], row[j]);
    std::swap(w[i], w[j]);  // inverse of a column swap is the row swap in W
  };
  // col_j += q * col_i  ==>  W row_i -= q * row_j
  const auto col_add = [&](std::size_t j, std::size_t i, long long q) {
    for (auto& row : x) row[j] += checked_mul(q, row[i]);
    for (std::size_t c = 0; c < k; ++c) w[i][c] -= checked_mul(q, w[j][c]);
  };
  const auto row_swap = [&](std::size_t i, std::size_t j) { std::swap(x[i], x[j]); };
  const auto row_add = [&](std::size_t j, std::size_t i, long long q) {
    for (std::size_t c = 0; c < k; ++c) x[j][c] += checked_mul(q, x[i][c]);
  };

  for (std::size_t t = 0; t < k; ++t) {
    // Move a minimal nonzero entry of the trailing block to (t, t) and clear
    // its row and column; restart whenever a remainder appears.
    for (;;) {
      std::size_t pi = k, pj = k;
      for (std::size_t i = t; i < k; ++i)
        for (std::size_t j = t; j < k; ++j)
          if (x[i][j] != 0 &&
              (pi == k || std::llabs(x[i][j]) < std::llabs(x[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == k) break;  // trailing block all zero
      if (pi != t) row_swap(pi, t);
      if (pj != t) col_swap(pj, t);
      bool dirty = false;
      for (std::size_t i = t + 1; i < k; ++i)
        if (x[i][t] != 0) {
          row_add(i, t, -(x[i][t] / x[t][t]));
          if (x[i][t] != 0) dirty = true;
        }
      for (std::size_t j = t + 1; j < k; ++j)
        if (x[t][j] != 0) {
          col_add(j, t, -(x[t][j] / x[t][t]));
          if (x[t][j] != 0) dirty = true;
        }
      if (!dirty) break;
    }
    if (x[t][t] < 0) {
      for (std::size_t i = t; i < k; ++i) x[t][i] = -x[t][i];  // row negate
    }
  }

  // The matrix is now diagonal.  Enforce the divisibility chain d1 | d2 | ...
  // with the classic 2x2 step: fold column j into column i, run Euclid on the
  // two rows (leaving gcd at (i,i) and lcm at (j,j)), and clear the fill-in.
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (x[i][i] == 0) {
        row_swap(i, j);
        col_swap(i, j);
      }
      if (x[i][i] == 0 || x[j][j] % x[i][i] == 0) continue;
      col_add(i, j, 1);  // x[j][i] becomes x[j][j]
      while (x[j][i] != 0) {
        if (x[i][i] == 0 || std::llabs(x[j][i]) < std::llabs(x[i][i]))
          row_swap(i, j);
        if (x[j][i] != 0) row_add(j, i, -(x[j][i] / x[i][i]));
      }
      // x[i][j] is a multiple of x[j][j]'s old value, hence of gcd = x[i][i].
      if (x[i][j] != 0) col_add(j, i, -(x[i][j] / x[i][i]));
      if (x[i][i] < 0)
        for (std::size_t c = 0; c < k; ++c) x[i][c] = -x[i][c];
      if (x[j][j] < 0)
        for (std::size_t c = 0; c < k; ++c) x[j][c] = -x[j][c];
    }

  d.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) d[i] = x[i][i];
}

}  // namespace

std::uint32_t SubgroupDecomposition::embed(const std::vector<long>& shape_coords) const {
  if (shape_coords.size() != shape.num_factors())
    throw input_error("shape coordinate count mismatch");
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    acc = parent->add(acc, parent->scale(basis[i], shape_coords[i]));
  return acc;
}

SubgroupDecomposition decompose(const Subgroup& h) {
  const Group& g = h.parent;
  const std::size_t k = g.num_factors();

  SubgroupDecomposition dec;
  dec.parent = &h.parent;
  if (h.elements.size() == 1 || k == 0) {
    dec.shape = Group(std::vector<long>{});
    return dec;
  }

  // Relation lattice L of the generator coordinates together with diag(n);
  // H ~ Z^k diag(n) -quotient of the lattice spanned by the generators, i.e.
  // H ~ L / diag(n) with L = <gens, diag(n)>.
  Matrix a;
  for (std::uint32_t gen : h.generators) {
    const auto coords = g.coords_of(gen);
    a.emplace_back(coords.begin(), coords.end());
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<long long> row(k, 0);
    row[i] = g.factor(i);
    a.push_back(std::move(row));
  }

  const Matrix basis = hermite_basis(std::move(a), k);

  // X with X * B = diag(n); then SNF(X) = U X V = diag(d) gives
  // L / diag(n) ~ +_i Z_{d_i} with basis the rows of V^{-1} B.
  Matrix xm(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<long long> target(k, 0);
    target[i] = g.factor(i);
    xm[i] = solve_upper(basis, target);
  }

  std::vector<long long> d;
  Matrix w;  // V^{-1}
  smith_form(std::move(xm), d, w);

  std::vector<long> shape_factors;
  std::vector<std::uint32_t> basis_elems;
  for (std::size_t i = 0; i < k; ++i) {
    if (d[i] <= 1) continue;
    shape_factors.push_back(static_cast<long>(d[i]));
    // Basis row: (V^{-1} B)_i reduced into the group.
    std::vector<long> coords(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      long long acc = 0;
      for (std::size_t t = 0; t < k; ++t)
        acc += checked_mul(w[i][t], basis[t][j]);
      coords[j] = static_cast<long>(((acc % g.factor(j)) + g.factor(j)) % g.factor(j));
    }
    basis_elems.push_back(g.index_of(coords));
  }

  dec.shape = Group(shape_factors);
  dec.basis = std::move(basis_elems);

  // Sanity: the embedding must biject shape indices onto the subgroup.
  if (dec.shape.order() != h.elements.size())
    throw input_error("subgroup decomposition failed: order mismatch");
  Bitset hit(g.order());
  for (std::uint32_t t = 0; t < dec.shape.order(); ++t) {
    const std::uint32_t e = dec.embed(dec.shape.coords_of(t));
    if (!h.contains(e) || hit.test(e))
      throw input_error("subgroup decomposition failed: embedding not bijective");
    hit.set(e);
  }
  return dec;
}

std::vector<Group> all_abelian_groups(std::uint64_t max_order) {
  // Partitions of e give the abelian p-groups of order p^e; cross products
  // over the prime factorisation give every isomorphism class exactly once.
  std::vector<Group> out;
  const auto partitions = [](int e) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    const auto rec = [&](auto&& self, int rest, int maxpart) -> void {
      if (rest == 0) {
        parts.push_back(cur);
        return;
      }
      for (int p = std::min(rest, maxpart); p >= 1; --p) {
        cur.push_back(p);
        self(self, rest - p, p);
        cur.pop_back();
      }
    };
    rec(rec, e, e);
    return parts;
  };

  for (std::uint64_t n = 1; n <= max_order; ++n) {
    // Factor n.
    std::vector<std::pair<std::uint64_t, int>> pf;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        int e = 0;
        while (m % p == 0) {
          m /= p;
          ++e;
        }
        pf.emplace_back(p, e);
      }
    if (m > 1) pf.emplace_back(m, 1);

    std::vector<std::vector<long>> combos = {{}};
    for (const auto& [p, e] : pf) {
      std::vector<std::vector<long>> next;
      for (const auto& part : partitions(e))
        for (const auto& base : combos) {
          std::vector<long> factors = base;
          for (int exp : part) {
            long q = 1;
            for (int i = 0; i < exp; ++i) q *= static_cast<long>(p);
            factors.push_back(q);
          }
          next.push_back(std::move(factors));
        }
      combos = std::move(next);
    }
    for (auto& factors : combos) {
      std::sort(factors.begin(), factors.end(), std::greater<>());
      out.emplace_back(factors);
    }
  }
  return out;
}

}  // namespace bhlab
