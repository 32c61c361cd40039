#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "envwit/sparse/reducer.hpp"
#include "envwit/symmetric/projection.hpp"

namespace envwit {

enum class Representation { symmetric, full_space };

inline const char* to_string(Representation r) { return r == Representation::symmetric ? "symmetric" : "full_space"; }

struct RelaxationSpec {
  MeasurementProtocol protocol;
  OutcomeSequence seq;
  int N = 1;
  bool ppt = false;
  Representation representation = Representation::symmetric;

  void validate() const {
    check_compatible(protocol, seq);
    if (N < seq.length()) throw InvalidArgument("hierarchy level N must be at least the sequence length");
    if (ppt && representation != Representation::full_space)
      throw InvalidArgument("PPT constraints require the full-space representation");
  }
};

struct BuildOptions {
  std::int64_t max_variables = 4'000'000;
  std::int64_t max_entries = 40'000'000;  // stored constraint entries
  bool force_complex = false;
  double zero_tol = 1e-12;
};

inline constexpr double kRealTol = 1e-12;

namespace detail {

inline void merge_entries(std::vector<MatEntry<double>>& v, double tol) {
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < v.size();) {
    MatEntry<double> e = v[r++];
    while (r < v.size() && v[r].row == e.row && v[r].col == e.col) e.value += v[r++].value;
    if (std::abs(e.value) > tol) v[w++] = e;
  }
  v.resize(w);
}

// Real and imaginary parts of the complex equality sum_ab c_ab Phi_ab = rhs with real c:
// Re -> (c + c^T)/2, Im -> i (c - c^T)/2.
template <class Scalar>
SparseSym<Scalar> hermitian_part(const std::vector<MatEntry<double>>& c, int part, double tol) {
  std::vector<MatEntry<double>> s;
  s.reserve(2 * c.size());
  const double sign = part == 0 ? 1.0 : -1.0;
  for (const auto& e : c) {
    s.push_back({e.row, e.col, 0.5 * e.value});
    s.push_back({e.col, e.row, sign * 0.5 * e.value});
  }
  merge_entries(s, tol);
  SparseSym<Scalar> out;
  out.reserve(s.size());
  for (const auto& e : s) {
    if constexpr (std::is_same_v<Scalar, double>) {
      out.push_back({e.row, e.col, e.value});
    } else {
      out.push_back({e.row, e.col, part == 0 ? cplx(e.value, 0.0) : cplx(0.0, e.value)});
    }
  }
  return out;
}

template <class Scalar>
SparseSym<Scalar> identity_matrix(int offset, int n) {
  SparseSym<Scalar> m;
  for (int i = 0; i < n; ++i) m.push_back({offset + i, offset + i, Scalar(1)});
  return m;
}

}  // namespace detail

template <class Scalar>
SparseSym<Scalar> to_sparse_sym(const SparseC& x, double zero_tol = kRealTol) {
  SparseSym<Scalar> out;
  for (int k = 0; k < x.outerSize(); ++k)
    for (SparseC::InnerIterator it(x, k); it; ++it) {
      if (std::abs(it.value()) <= zero_tol) continue;
      if constexpr (std::is_same_v<Scalar, double>) {
        if (std::abs(it.value().real()) > zero_tol)
          out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value().real()});
      } else {
        out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
      }
    }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
  return out;
}

inline double max_imag(const SparseC& x) {
  double m = 0.0;
  for (int k = 0; k < x.outerSize(); ++k)
    for (SparseC::InnerIterator it(x, k); it; ++it) m = std::max(m, std::abs(it.value().imag()));
  return m;
}

// Partial-trace equalities Tr_O1 phi = 1_I1/d (x) Tr_A1 phi over the symmetric basis, generated lazily.
// Keys p = (i, s) with s a type of N - 1 parties; one equality per canonical pair p <= q,
// split into its real part and, with imaginary parts enabled, its imaginary part.
// Id 0 is the trace normalization.
template <class Scalar>
class SymmetricTraceConstraints : public ConstraintSource<Scalar> {
public:
  SymmetricTraceConstraints(int d_ES, int N, bool imaginary_parts)
      : d_(d_ES), q_(d_ES * d_ES), full_(d_ES * d_ES, N), rest_(d_ES * d_ES, N - 1), imag_(imaginary_parts) {
    if (N < 1) throw InvalidArgument("hierarchy level must be positive");
    if (std::is_same_v<Scalar, double> && imag_) throw ComplexNotRealified("imaginary constraint parts need complex data");
    R_ = rest_.size();
    P_ = static_cast<std::int64_t>(d_) * R_;
    add_.resize(static_cast<std::size_t>(R_) * q_);
    for (int s = 0; s < R_; ++s) {
      TypeVector t = rest_.type(s);
      for (int u = 0; u < q_; ++u) {
        ++t.counts[static_cast<std::size_t>(u)];
        add_[static_cast<std::size_t>(s) * q_ + u] = full_.index_of(t);
        --t.counts[static_cast<std::size_t>(u)];
      }
    }
    sub_.assign(static_cast<std::size_t>(full_.size()) * q_, -1);
    for (int a = 0; a < full_.size(); ++a) {
      TypeVector t = full_.type(a);
      for (int u = 0; u < q_; ++u) {
        if (t[u] == 0) continue;
        --t.counts[static_cast<std::size_t>(u)];
        sub_[static_cast<std::size_t>(a) * q_ + u] = rest_.index_of(t);
        ++t.counts[static_cast<std::size_t>(u)];
      }
    }
  }

  int dim() const override { return full_.size(); }
  std::int64_t key_count() const { return P_; }
  std::int64_t pair_count() const { return P_ * (P_ + 1) / 2; }
  std::int64_t size() const override { return 1 + pair_count() * (imag_ ? 2 : 1); }
  std::int64_t raw_size() const override { return P_ * P_ + 1; }
  bool imaginary_parts() const { return imag_; }
  const SymSpace& space() const { return full_; }

  std::int64_t raw_weight(std::int64_t id) const override {
    if (id == 0) return 1;
    const auto [p, q, part] = decode(id);
    if (imag_) return 1;
    return p == q ? 1 : 2;
  }

  std::vector<std::int64_t> inhomogeneous() const override { return {0}; }

  Constraint<Scalar> get(std::int64_t id) const override {
    if (id == 0) return {detail::identity_matrix<Scalar>(0, full_.size()), 1.0};
    const auto [p, q, part] = decode(id);
    if (part == 1 && p == q) return {{}, 0.0};
    return {detail::hermitian_part<Scalar>(raw(p, q), part, 1e-14), 0.0};
  }

  void touching(int a, int b, std::vector<std::int64_t>& ids) const override {
    if (a == b) ids.push_back(0);
    const std::size_t first = ids.size();
    const TypeVector& ta = full_.type(a);
    const TypeVector& tb = full_.type(b);
    auto add_pair = [&](std::int64_t p, std::int64_t q) {
      if (p > q) std::swap(p, q);
      const std::int64_t pi = pair_index(p, q);
      if (imag_) {
        ids.push_back(1 + 2 * pi);
        if (p != q) ids.push_back(2 + 2 * pi);
      } else {
        ids.push_back(1 + pi);
      }
    };
    for (int k = 0; k < q_; ++k) {
      if (ta[k] == 0) continue;
      for (int k2 = k % d_; k2 < q_; k2 += d_)
        if (tb[k2] > 0)
          add_pair(static_cast<std::int64_t>(k / d_) * R_ + sub(a, k), static_cast<std::int64_t>(k2 / d_) * R_ + sub(b, k2));
      if (tb[k] > 0)
        for (int i = 0; i < d_; ++i)
          add_pair(static_cast<std::int64_t>(i) * R_ + sub(a, k), static_cast<std::int64_t>(i) * R_ + sub(b, k));
    }
    std::sort(ids.begin() + static_cast<std::ptrdiff_t>(first), ids.end());
    ids.erase(std::unique(ids.begin() + static_cast<std::ptrdiff_t>(first), ids.end()), ids.end());
    // drop candidates whose coefficients cancel at (a, b)
    std::size_t w = first;
    for (std::size_t r = first; r < ids.size(); ++r) {
      const Constraint<Scalar> c = get(ids[r]);
      const bool hit = std::any_of(c.matrix.begin(), c.matrix.end(), [&](const auto& e) {
        return (e.row == a && e.col == b) || (e.row == b && e.col == a);
      });
      if (hit) ids[w++] = ids[r];
    }
    ids.resize(w);
  }

  // Coefficients c_ab of the complex equality for keys p = (i, s), q = (i', s').
  // Bra and ket of the untouched parties use the unnormalized symmetric vectors, so
  // <u, sym s| sym t> contributes sqrt(t_u) up to a factor common to the whole row.
  std::vector<MatEntry<double>> raw(std::int64_t p, std::int64_t q) const {
    const int i = static_cast<int>(p / R_), s = static_cast<int>(p % R_);
    const int i2 = static_cast<int>(q / R_), s2 = static_cast<int>(q % R_);
    const TypeVector& ts = rest_.type(s);
    const TypeVector& ts2 = rest_.type(s2);
    std::vector<MatEntry<double>> c;
    c.reserve(static_cast<std::size_t>(d_ + (i == i2 ? q_ : 0)));
    for (int o = 0; o < d_; ++o) {
      const int u = i * d_ + o, u2 = i2 * d_ + o;
      c.push_back({add(s, u), add(s2, u2), std::sqrt(static_cast<double>((ts[u] + 1) * (ts2[u2] + 1)))});
    }
    if (i == i2)
      for (int u = 0; u < q_; ++u)
        c.push_back({add(s, u), add(s2, u), -std::sqrt(static_cast<double>((ts[u] + 1) * (ts2[u] + 1))) / d_});
    return c;
  }

  struct Decoded {
    std::int64_t p, q;
    int part;
  };

  Decoded decode(std::int64_t id) const {
    std::int64_t k = id - 1;
    int part = 0;
    if (imag_) {
      part = static_cast<int>(k % 2);
      k /= 2;
    }
    // largest p with base(p) <= k
    std::int64_t lo = 0, hi = P_ - 1;
    while (lo < hi) {
      const std::int64_t mid = (lo + hi + 1) / 2;
      if (base(mid) <= k) lo = mid;
      else hi = mid - 1;
    }
    return {lo, lo + (k - base(lo)), part};
  }

private:
  std::int64_t base(std::int64_t p) const { return p * P_ - p * (p - 1) / 2; }
  std::int64_t pair_index(std::int64_t p, std::int64_t q) const { return base(p) + (q - p); }
  int add(int s, int u) const { return add_[static_cast<std::size_t>(s) * q_ + u]; }
  int sub(int a, int u) const { return sub_[static_cast<std::size_t>(a) * q_ + u]; }

  int d_;
  int q_;
  SymSpace full_;
  SymSpace rest_;
  bool imag_;
  int R_ = 0;
  std::int64_t P_ = 0;
  std::vector<int> add_;
  std::vector<int> sub_;
};

inline double definetti_error_bound(int L, int d_ES, int N) {
  if (L < 1 || N < L) throw InvalidArgument("de Finetti bound needs N >= L >= 1");
  const double d2 = static_cast<double>(d_ES) * d_ES;
  return 2.0 * L * (L + d2 + 1.0) / (N + d2);
}

// Projected objective over SymSpace(d_ES^2, N).
inline SparseC symmetric_objective(const RelaxationSpec& spec, const SymSpace& space) {
  return project_objective(build_objective(spec.protocol, spec.seq), spec.N, space);
}

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

inline ComplexSdp build_symmetric(const RelaxationSpec& spec, const BuildOptions& opt) {
  const int d = spec.protocol.d_ES();
  const std::int64_t size = to_int64(type_count_exact(d * d, spec.N), "symmetric dimension");
  const std::int64_t keys = d * to_int64(type_count_exact(d * d, spec.N - 1), "type count");
  if (size * size > opt.max_variables)
    throw IntractableSize("symmetric relaxation needs " + std::to_string(size * size) + " scalar variables");
  if (keys * (keys + 1) / 2 * 2 * (d + d * d) > opt.max_entries)
    throw IntractableSize("symmetric relaxation constraint data exceeds the entry budget");

  SymSpace space(d * d, spec.N);
  const SparseC x = symmetric_objective(spec, space);
  const bool complex = opt.force_complex || max_imag(x) > kRealTol;
  SymmetricTraceConstraints<cplx> src(d, spec.N, complex);

  ComplexSdp p;
  p.blocks = {{0, space.size()}};
  p.objective = to_sparse_sym<cplx>(x, opt.zero_tol);
  p.constraints.reserve(static_cast<std::size_t>(src.size()));
  for (std::int64_t id = 0; id < src.size(); ++id) {
    Constraint<cplx> c = src.get(id);
    if (!c.matrix.empty()) p.constraints.push_back(std::move(c));
  }
  p.raw_constraint_count = src.raw_size();
  return p;
}

inline ComplexSdp build_full_space(const RelaxationSpec& spec, const BuildOptions& opt) {
  const int d = spec.protocol.d_ES();
  const int q = d * d;
  const int N = spec.N;
  const std::int64_t D = ipow(q, N);
  const int nppt = spec.ppt ? N / 2 : 0;
  if (D * D * (1 + nppt) > opt.max_variables)
    throw IntractableSize("full-space relaxation needs " + std::to_string(D * D * (1 + nppt)) + " scalar variables");
  const std::int64_t est = D * D * 8 + nppt * D * D * 4 + ipow(q, N - 1) * ipow(q, N - 1) * d * d * (d + q);
  if (est > opt.max_entries) throw IntractableSize("full-space relaxation constraint data exceeds the entry budget");

  const ObjectiveOperator X = build_objective(spec.protocol, spec.seq);
  const int L = X.L();
  const std::int64_t tail = ipow(q, N - L);
  std::vector<MatEntry<cplx>> obj;
  double imag = 0.0;
  for (const auto& e : X.nonzeros(50'000'000, opt.zero_tol)) {
    std::int64_t r0 = 0, c0 = 0;
    for (int l = 0; l < L; ++l) {
      r0 = r0 * q + e.col[static_cast<std::size_t>(l)];
      c0 = c0 * q + e.row[static_cast<std::size_t>(l)];
    }
    imag = std::max(imag, std::abs(e.value.imag()));
    for (std::int64_t r = 0; r < tail; ++r)
      obj.push_back({static_cast<int>(r0 * tail + r), static_cast<int>(c0 * tail + r), e.value});
  }
  const bool complex = opt.force_complex || imag > kRealTol;
  const double tol = 1e-14;

  ComplexSdp p;
  const int n = static_cast<int>(D);
  p.blocks.push_back({0, n});
  for (int k = 1; k <= nppt; ++k) p.blocks.push_back({k * n, n});
  p.objective = std::move(obj);
  p.constraints.push_back({identity_matrix<cplx>(0, n), 1.0});

  auto emit = [&](const std::vector<MatEntry<double>>& c, bool imag_part) {
    auto re = hermitian_part<cplx>(c, 0, tol);
    if (!re.empty()) p.constraints.push_back({std::move(re), 0.0});
    if (complex && imag_part) {
      auto im = hermitian_part<cplx>(c, 1, tol);
      if (!im.empty()) p.constraints.push_back({std::move(im), 0.0});
    }
  };

  // support on the symmetric subspace: (P+ Phi)_ab = Phi_ab, P+_ac = [type a = type c] / mult
  SymSpace types(q, N);
  std::vector<int> type_of_index(static_cast<std::size_t>(D));
  std::vector<std::vector<int>> orbit(static_cast<std::size_t>(types.size()));
  std::vector<int> digits(static_cast<std::size_t>(q));
  for (int a = 0; a < n; ++a) {
    std::fill(digits.begin(), digits.end(), 0);
    for (int v = a, l = 0; l < N; ++l, v /= q) ++digits[static_cast<std::size_t>(v % q)];
    type_of_index[static_cast<std::size_t>(a)] = types.index_of(digits.data());
    orbit[static_cast<std::size_t>(type_of_index[static_cast<std::size_t>(a)])].push_back(a);
  }
  std::vector<MatEntry<double>> c;
  for (int a = 0; a < n; ++a) {
    const auto& orb = orbit[static_cast<std::size_t>(type_of_index[static_cast<std::size_t>(a)])];
    if (orb.size() == 1) continue;
    const double m = static_cast<double>(orb.size());
    for (int b = 0; b < n; ++b) {
      c.clear();
      for (int cc : orb) c.push_back({cc, b, 1.0 / m - (cc == a ? 1.0 : 0.0)});
      emit(c, true);
    }
  }

  // Tr_O1 Phi = 1_I1/d (x) Tr_A1 Phi, first party most significant
  const std::int64_t rest = ipow(q, N - 1);
  const std::int64_t keys = d * rest;
  for (std::int64_t pk = 0; pk < keys; ++pk)
    for (std::int64_t qk = pk; qk < keys; ++qk) {
      const int i = static_cast<int>(pk / rest), i2 = static_cast<int>(qk / rest);
      const std::int64_t R = pk % rest, R2 = qk % rest;
      c.clear();
      for (int o = 0; o < d; ++o)
        c.push_back({static_cast<int>((i * d + o) * rest + R), static_cast<int>((i2 * d + o) * rest + R2), 1.0});
      if (i == i2)
        for (int u = 0; u < q; ++u)
          c.push_back({static_cast<int>(u * rest + R), static_cast<int>(u * rest + R2), -1.0 / d});
      emit(c, pk != qk);
    }

  // Y_k = Phi^{T_k}, transposing the first k parties
  for (int k = 1; k <= nppt; ++k) {
    const std::int64_t low = ipow(q, N - k);
    const int off = k * n;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const std::int64_t ah = a / low, al = a % low, bh = b / low, bl = b % low;
        c.clear();
        c.push_back({off + a, off + b, 1.0});
        c.push_back({static_cast<int>(bh * low + al), static_cast<int>(ah * low + bl), -1.0});
        emit(c, a != b);
      }
  }
  p.raw_constraint_count = 1 + D * D + keys * keys + nppt * D * D;
  return p;
}

}  // namespace detail

inline ComplexSdp build_relaxation(const RelaxationSpec& spec, const BuildOptions& opt = {}) {
  spec.validate();
  return spec.representation == Representation::symmetric ? detail::build_symmetric(spec, opt)
                                                          : detail::build_full_space(spec, opt);
}

inline double max_imag(const ComplexSdp& p) {
  double m = 0.0;
  for (const auto& e : p.objective) m = std::max(m, std::abs(e.value.imag()));
  for (const auto& c : p.constraints)
    for (const auto& e : c.matrix) m = std::max(m, std::abs(e.value.imag()));
  return m;
}

// Real data is copied; otherwise each n-block becomes the 2n-block [[A, -B], [B, A]] / 2.
inline RealSdp realify(const ComplexSdp& p, bool force_embed = false) {
  RealSdp out;
  out.raw_constraint_count = p.raw_constraint_count;
  if (!force_embed && max_imag(p) <= kRealTol) {
    out.realify_mode = RealifyMode::drop_imaginary;
    out.blocks = p.blocks;
    auto conv = [](const SparseSym<cplx>& m) {
      SparseSym<double> r;
      r.reserve(m.size());
      for (const auto& e : m)
        if (e.value.real() != 0.0) r.push_back({e.row, e.col, e.value.real()});
      return r;
    };
    out.objective = conv(p.objective);
    for (const auto& c : p.constraints) out.constraints.push_back({conv(c.matrix), c.rhs});
    return out;
  }
  out.realify_mode = RealifyMode::embed;
  const std::vector<int> bid = p.block_index();
  for (const Block& b : p.blocks) out.blocks.push_back({2 * b.offset, 2 * b.size});
  auto conv = [&](const SparseSym<cplx>& m) {
    SparseSym<double> r;
    r.reserve(4 * m.size());
    for (const auto& e : m) {
      const Block& b = p.blocks[static_cast<std::size_t>(bid[static_cast<std::size_t>(e.row)])];
      const int i = e.row - b.offset, j = e.col - b.offset, o = 2 * b.offset, n = b.size;
      const double re = 0.5 * e.value.real(), im = 0.5 * e.value.imag();
      if (re != 0.0) {
        r.push_back({o + i, o + j, re});
        r.push_back({o + n + i, o + n + j, re});
      }
      if (im != 0.0) {
        r.push_back({o + i, o + n + j, -im});
        r.push_back({o + n + i, o + j, im});
      }
    }
    return r;
  };
  out.objective = conv(p.objective);
  for (const auto& c : p.constraints) out.constraints.push_back({conv(c.matrix), c.rhs});
  return out;
}

// Complex Hermitian block recovered from its real embedding.
inline CMatrix unembed(const RMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = cplx(0.5 * (x(i, j) + x(n + i, n + j)), 0.5 * (x(n + i, j) - x(i, n + j)));
  return out;
}

}  // namespace envwit
