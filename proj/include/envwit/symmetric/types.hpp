#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "envwit/errors.hpp"

namespace envwit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Weak composition of n into d parts.
struct TypeVector {
  std::vector<int> counts;

  TypeVector() = default;
  explicit TypeVector(std::vector<int> c) : counts(std::move(c)) {}
  static TypeVector zero(int d) { return TypeVector(std::vector<int>(static_cast<std::size_t>(d), 0)); }
  static TypeVector unit(int d, int k) {
    TypeVector t = zero(d);
    t.counts[static_cast<std::size_t>(k)] = 1;
    return t;
  }

  int dim() const { return static_cast<int>(counts.size()); }
  int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
  int operator[](int k) const { return counts[static_cast<std::size_t>(k)]; }

  TypeVector operator+(const TypeVector& o) const {
    if (o.dim() != dim()) throw SizeMismatch("adding types of different length");
    TypeVector r = *this;
    for (std::size_t k = 0; k < counts.size(); ++k) r.counts[k] += o.counts[k];
    return r;
  }
  bool contains(const TypeVector& o) const {
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (o.counts[k] > counts[k]) return false;
    return true;
  }
  TypeVector operator-(const TypeVector& o) const {
    if (o.dim() != dim() || !contains(o)) throw SizeMismatch("type difference would be negative");
    TypeVector r = *this;
    for (std::size_t k = 0; k < counts.size(); ++k) r.counts[k] -= o.counts[k];
    return r;
  }
  bool operator==(const TypeVector&) const = default;

  // colexicographic: the last entry is most significant
  bool colex_less(const TypeVector& o) const {
    return std::lexicographical_compare(counts.rbegin(), counts.rend(), o.counts.rbegin(), o.counts.rend());
  }
};

inline BigInt binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::int64_t to_int64(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max()) throw Overflow(std::string(what) + " exceeds 64-bit range");
  return v.convert_to<std::int64_t>();
}

// |T^n_d| = binomial(n + d - 1, n)
inline BigInt type_count_exact(int d, int n) {
  if (d < 1 || n < 0) throw InvalidArgument("type count needs d >= 1 and n >= 0");
  return binomial_exact(n + d - 1, n);
}

inline BigInt multinomial(const TypeVector& t) {
  BigInt r = 1;
  int acc = 0;
  for (int c : t.counts) {
    for (int i = 1; i <= c; ++i) r = r * (acc + i) / i;
    acc += c;
  }
  return r;
}

inline double multinomial_real(const TypeVector& t) { return multinomial(t).convert_to<double>(); }

class SymSpace {
public:
  SymSpace(int local_dim, int copies) : d_(local_dim), n_(copies) {
    if (d_ < 1 || n_ < 0) throw InvalidArgument("SymSpace needs d >= 1 and n >= 0");
    const std::int64_t size = to_int64(type_count_exact(d_, n_), "symmetric space dimension");
    if (size > std::numeric_limits<int>::max()) throw Overflow("symmetric space dimension exceeds int range");
    count_.assign(static_cast<std::size_t>(d_ + 1), std::vector<std::int64_t>(static_cast<std::size_t>(n_ + 1), 0));
    for (int dd = 1; dd <= d_; ++dd)
      for (int nn = 0; nn <= n_; ++nn)
        count_[dd][nn] = to_int64(type_count_exact(dd, nn), "type count");
    types_.reserve(static_cast<std::size_t>(size));
    std::vector<int> cur(static_cast<std::size_t>(d_), 0);
    fill(d_, n_, cur);
    mult_.reserve(types_.size());
    for (const TypeVector& t : types_) mult_.push_back(multinomial_real(t));
  }

  int local_dim() const { return d_; }
  int copies() const { return n_; }
  int size() const { return static_cast<int>(types_.size()); }
  const std::vector<TypeVector>& types() const { return types_; }
  const TypeVector& type(int idx) const { return types_[static_cast<std::size_t>(idx)]; }
  double mult(int idx) const { return mult_[static_cast<std::size_t>(idx)]; }

  int index_of(const TypeVector& t) const { return index_of(t.counts.data()); }

  int index_of(const int* c) const {
    std::int64_t r = 0;
    int rem = n_;
    for (int dd = d_; dd >= 2; --dd) {
      const int last = c[dd - 1];
      for (int v = 0; v < last; ++v) r += count_[dd - 1][rem - v];
      rem -= last;
    }
    return static_cast<int>(r);
  }

private:
  // colex order: outer loop over the last entry
  void fill(int dd, int nn, std::vector<int>& cur) {
    if (dd == 1) {
      cur[0] = nn;
      types_.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= nn; ++v) {
      cur[static_cast<std::size_t>(dd - 1)] = v;
      fill(dd - 1, nn - v, cur);
    }
    cur[static_cast<std::size_t>(dd - 1)] = 0;
  }

  int d_;
  int n_;
  std::vector<std::vector<std::int64_t>> count_;
  std::vector<TypeVector> types_;
  std::vector<double> mult_;
};

inline SymSpace enumerate_types(int d, int n) { return SymSpace(d, n); }

// All (r_1..r_m) with sum r_i = t and |r_i| = part_sizes[i].
inline std::vector<std::vector<TypeVector>> split_type(const TypeVector& t, const std::vector<int>& part_sizes) {
  if (std::accumulate(part_sizes.begin(), part_sizes.end(), 0) != t.total())
    throw SizeMismatch("part sizes do not add up to the type total");
  std::vector<std::vector<TypeVector>> out;
  std::vector<TypeVector> prefix;
  const int d = t.dim();

  auto rec = [&](auto&& self, const TypeVector& rest, std::size_t part) -> void {
    if (part + 1 == part_sizes.size()) {
      prefix.push_back(rest);
      out.push_back(prefix);
      prefix.pop_back();
      return;
    }
    TypeVector r = TypeVector::zero(d);
    auto choose = [&](auto&& choose_self, int k, int left) -> void {
      if (k == d) {
        if (left == 0) {
          prefix.push_back(r);
          self(self, rest - r, part + 1);
          prefix.pop_back();
        }
        return;
      }
      for (int v = std::min(left, rest[k]); v >= 0; --v) {
        r.counts[static_cast<std::size_t>(k)] = v;
        choose_self(choose_self, k + 1, left - v);
      }
      r.counts[static_cast<std::size_t>(k)] = 0;
    };
    choose(choose, 0, part_sizes[part]);
  };
  if (part_sizes.empty()) return out;
  rec(rec, t, 0);
  return out;
}

struct SinglePartyTerm {
  int i;  // input index
  int o;  // output index
  TypeVector s;
  Rational weight;     // coefficient in |Sym(t)> = sum |u>|Sym(s)>
  double norm_weight;  // coefficient in |sym(t)> = sum c |u>|sym(s)>
};

// t = e_u + s with u = i * d_ES + o.
inline std::vector<SinglePartyTerm> single_party_decompose(const TypeVector& t, int d_ES) {
  const int n = t.total();
  if (n == 0) throw EmptyType("cannot split a party off the empty type");
  if (t.dim() != d_ES * d_ES) throw DimensionMismatch("type length must equal d_ES^2");
  std::vector<SinglePartyTerm> out;
  for (int k = 0; k < t.dim(); ++k) {
    if (t[k] == 0) continue;
    TypeVector s = t;
    --s.counts[static_cast<std::size_t>(k)];
    out.push_back({k / d_ES, k % d_ES, std::move(s), Rational(1),
                   std::sqrt(static_cast<double>(t[k]) / static_cast<double>(n))});
  }
  return out;
}

}  // namespace envwit
