#ifndef GCOT_GROUP_HPP_
#define GCOT_GROUP_HPP_

// Normed Abelian groups built as weighted l1 products of elementary factors:
// Z (weighted absolute value), rational slices of R (weighted absolute value)
// and finite factors Z_{m1} x ... x Z_{mr} carrying an explicit norm table.

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/rational.hpp"

namespace gcot {

enum class FactorKind { kInt, kReal, kMod };

struct FactorSpec {
  FactorKind kind = FactorKind::kInt;
  Scalar weight = 1;                // kInt / kReal
  std::vector<int> moduli;          // kMod; first modulus is most significant
  std::vector<Scalar> norm_table;   // kMod; indexed by mixed-radix residues

  static FactorSpec Int(Scalar w = 1) {
    return FactorSpec{FactorKind::kInt, std::move(w), {}, {}};
  }
  static FactorSpec Real(Scalar w = 1) {
    return FactorSpec{FactorKind::kReal, std::move(w), {}, {}};
  }
  static FactorSpec Mod(std::vector<int> moduli, std::vector<Scalar> table) {
    return FactorSpec{FactorKind::kMod, 1, std::move(moduli), std::move(table)};
  }
  // Z_2 with |1| = w.
  static FactorSpec Z2(Scalar w = 1) { return Mod({2}, {Scalar(0), std::move(w)}); }

  // Number of coordinate slots this factor occupies in a GroupElement.
  int width() const {
    return kind == FactorKind::kMod ? static_cast<int>(moduli.size()) : 1;
  }
  bool finite() const { return kind == FactorKind::kMod; }
  // True for a single Z_2 (the parity solver's domain).
  bool is_parity() const {
    return kind == FactorKind::kMod && moduli.size() == 1 && moduli[0] == 2;
  }
  std::int64_t order() const {
    std::int64_t n = 1;
    for (int m : moduli) n *= m;
    return n;
  }

  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

// A group element: one Scalar per coordinate slot. Integer slots (Z factors
// and residues of finite factors) hold integral values.
struct GroupElement {
  std::vector<Scalar> coords;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.coords == b.coords;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return a.coords < b.coords;
  }
};

class GroupSpec {
 public:
  GroupSpec() = default;

  explicit GroupSpec(std::vector<FactorSpec> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
      throw Error(ErrorCode::kInvalidInput, "group spec needs at least one factor");
    }
    int offset = 0;
    for (const FactorSpec& f : factors_) {
      offsets_.push_back(offset);
      offset += f.width();
      if (f.kind == FactorKind::kMod) {
        if (f.moduli.empty()) {
          throw Error(ErrorCode::kInvalidInput, "finite factor without moduli");
        }
        for (int m : f.moduli) {
          if (m < 2) throw Error(ErrorCode::kInvalidInput, "modulus must be >= 2");
        }
        if (static_cast<std::int64_t>(f.norm_table.size()) != f.order()) {
          throw Error(ErrorCode::kInvalidInput,
                      "norm table size " + std::to_string(f.norm_table.size()) +
                          " does not match factor order " + std::to_string(f.order()));
        }
      }
    }
    width_ = offset;
  }

  const std::vector<FactorSpec>& factors() const { return factors_; }
  const FactorSpec& factor(std::size_t i) const { return factors_.at(i); }
  std::size_t factor_count() const { return factors_.size(); }
  int width() const { return width_; }
  int offset(std::size_t factor) const { return offsets_.at(factor); }

  bool is_finite() const {
    for (const FactorSpec& f : factors_) {
      if (!f.finite()) return false;
    }
    return true;
  }
  // Group order; only meaningful when is_finite().
  std::int64_t order() const {
    std::int64_t n = 1;
    for (const FactorSpec& f : factors_) n *= f.order();
    return n;
  }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<FactorSpec> factors_;
  std::vector<int> offsets_;
  int width_ = 0;
};

namespace detail {

inline long residue_of(const Scalar& x) { return x.get_num().get_si(); }

inline long mod_reduce(long v, int m) {
  long r = v % m;
  return r < 0 ? r + m : r;
}

// Mixed-radix index of a finite factor's residue tuple.
inline std::size_t table_index(const FactorSpec& f, const GroupElement& x, int offset) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < f.moduli.size(); ++k) {
    idx = idx * static_cast<std::size_t>(f.moduli[k]) +
          static_cast<std::size_t>(residue_of(x.coords[offset + k]));
  }
  return idx;
}

inline std::vector<int> table_digits(const FactorSpec& f, std::size_t idx) {
  std::vector<int> digits(f.moduli.size());
  for (std::size_t k = f.moduli.size(); k-- > 0;) {
    digits[k] = static_cast<int>(idx % f.moduli[k]);
    idx /= f.moduli[k];
  }
  return digits;
}

}  // namespace detail

// Returns an empty string when x conforms to spec, otherwise a reason.
inline std::string conformance_error(const GroupSpec& spec, const GroupElement& x) {
  if (static_cast<int>(x.coords.size()) != spec.width()) {
    return "element has " + std::to_string(x.coords.size()) + " coordinates, group has " +
           std::to_string(spec.width());
  }
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    int off = spec.offset(f);
    switch (fs.kind) {
      case FactorKind::kInt:
        if (!is_integer(x.coords[off])) {
          return "coordinate " + std::to_string(off) + " of a Z factor is not an integer";
        }
        break;
      case FactorKind::kReal:
        break;
      case FactorKind::kMod:
        for (std::size_t k = 0; k < fs.moduli.size(); ++k) {
          const Scalar& c = x.coords[off + k];
          if (!is_integer(c) || c < 0 || c >= fs.moduli[k]) {
            return "coordinate " + std::to_string(off + k) + " is not a residue mod " +
                   std::to_string(fs.moduli[k]);
          }
        }
        break;
    }
  }
  return {};
}

inline bool conforms(const GroupSpec& spec, const GroupElement& x) {
  return conformance_error(spec, x).empty();
}

inline void require_conforms(const GroupSpec& spec, const GroupElement& x) {
  std::string why = conformance_error(spec, x);
  if (!why.empty()) throw Error(ErrorCode::kShapeMismatch, why);
}

inline GroupElement zero(const GroupSpec& spec) {
  return GroupElement{std::vector<Scalar>(spec.width(), Scalar(0))};
}

inline bool is_zero(const GroupElement& x) {
  for (const Scalar& c : x.coords) {
    if (c != 0) return false;
  }
  return true;
}

inline GroupElement add(const GroupSpec& spec, const GroupElement& x, const GroupElement& y) {
  require_conforms(spec, x);
  require_conforms(spec, y);
  GroupElement out = x;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    int off = spec.offset(f);
    if (fs.kind == FactorKind::kMod) {
      for (std::size_t k = 0; k < fs.moduli.size(); ++k) {
        long v = detail::residue_of(x.coords[off + k]) + detail::residue_of(y.coords[off + k]);
        out.coords[off + k] = detail::mod_reduce(v, fs.moduli[k]);
      }
    } else {
      out.coords[off] += y.coords[off];
    }
  }
  return out;
}

inline GroupElement neg(const GroupSpec& spec, const GroupElement& x) {
  require_conforms(spec, x);
  GroupElement out = x;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    int off = spec.offset(f);
    if (fs.kind == FactorKind::kMod) {
      for (std::size_t k = 0; k < fs.moduli.size(); ++k) {
        out.coords[off + k] = detail::mod_reduce(-detail::residue_of(x.coords[off + k]), fs.moduli[k]);
      }
    } else {
      out.coords[off] = -x.coords[off];
    }
  }
  return out;
}

inline GroupElement sub(const GroupSpec& spec, const GroupElement& x, const GroupElement& y) {
  return add(spec, x, neg(spec, y));
}

// n * x for an integer n (negative n allowed).
inline GroupElement multiple(const GroupSpec& spec, long n, const GroupElement& x) {
  require_conforms(spec, x);
  GroupElement out = x;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    int off = spec.offset(f);
    if (fs.kind == FactorKind::kMod) {
      for (std::size_t k = 0; k < fs.moduli.size(); ++k) {
        long r = detail::mod_reduce(n % fs.moduli[k], fs.moduli[k]);
        out.coords[off + k] =
            detail::mod_reduce(r * detail::residue_of(x.coords[off + k]), fs.moduli[k]);
      }
    } else {
      out.coords[off] = x.coords[off] * n;
    }
  }
  return out;
}

// Norm of the f-th factor's component of x (weight included).
inline Scalar factor_norm(const GroupSpec& spec, std::size_t f, const GroupElement& x) {
  const FactorSpec& fs = spec.factor(f);
  int off = spec.offset(f);
  if (fs.kind == FactorKind::kMod) return fs.norm_table[detail::table_index(fs, x, off)];
  return fs.weight * abs_value(x.coords[off]);
}

inline Scalar norm(const GroupSpec& spec, const GroupElement& x) {
  require_conforms(spec, x);
  Scalar total = 0;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) total += factor_norm(spec, f, x);
  return total;
}

// Order of x, or nullopt when x has infinite order.
inline std::optional<std::int64_t> element_order(const GroupSpec& spec, const GroupElement& x) {
  require_conforms(spec, x);
  std::int64_t order = 1;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    int off = spec.offset(f);
    if (fs.kind != FactorKind::kMod) {
      if (x.coords[off] != 0) return std::nullopt;
      continue;
    }
    for (std::size_t k = 0; k < fs.moduli.size(); ++k) {
      long r = detail::residue_of(x.coords[off + k]);
      std::int64_t m = fs.moduli[k];
      std::int64_t ord = m / std::gcd(m, static_cast<std::int64_t>(r));
      order = std::lcm(order, ord);
    }
  }
  return order;
}

// Single-factor group consisting of factor f of spec.
inline GroupSpec project_spec(const GroupSpec& spec, std::size_t f) {
  return GroupSpec({spec.factor(f)});
}

inline GroupElement project(const GroupSpec& spec, std::size_t f, const GroupElement& x) {
  int off = spec.offset(f);
  int w = spec.factor(f).width();
  return GroupElement{std::vector<Scalar>(x.coords.begin() + off, x.coords.begin() + off + w)};
}

// Element of spec that is y in factor f and zero elsewhere.
inline GroupElement embed(const GroupSpec& spec, std::size_t f, const GroupElement& y) {
  GroupElement out = zero(spec);
  int off = spec.offset(f);
  for (int k = 0; k < spec.factor(f).width(); ++k) out.coords[off + k] = y.coords.at(k);
  return out;
}

// Dense index over a finite group. Element i is the i-th element in
// lexicographic coordinate order, so index order equals enumeration order.
class FiniteGroup {
 public:
  static constexpr std::int64_t kMaxOrder = std::int64_t{1} << 22;

  explicit FiniteGroup(GroupSpec spec) : spec_(std::move(spec)) {
    if (!spec_.is_finite()) {
      throw Error(ErrorCode::kInfiniteGroup, "group has a Z or R factor");
    }
    if (spec_.order() > kMaxOrder) {
      throw Error(ErrorCode::kBudgetExceeded, "group order exceeds enumeration limit");
    }
    for (const FactorSpec& f : spec_.factors()) {
      for (int m : f.moduli) radices_.push_back(m);
    }
    std::size_t n = static_cast<std::size_t>(spec_.order());
    elements_.reserve(n);
    norms_.reserve(n);
    std::vector<int> digits(radices_.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement e;
      e.coords.reserve(digits.size());
      for (int d : digits) e.coords.emplace_back(d);
      norms_.push_back(norm(spec_, e));
      elements_.push_back(std::move(e));
      digits_.push_back(digits);
      for (std::size_t k = digits.size(); k-- > 0;) {
        if (++digits[k] < radices_[k]) break;
        digits[k] = 0;
      }
    }
    neg_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < radices_.size(); ++k) {
        idx = idx * radices_[k] + static_cast<std::size_t>((radices_[k] - digits_[i][k]) % radices_[k]);
      }
      neg_[i] = idx;
    }
    if (n <= 512) {
      add_table_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) add_table_[i * n + j] = compute_add(i, j);
      }
    }
  }

  const GroupSpec& spec() const { return spec_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const Scalar& norm_of(std::size_t i) const { return norms_[i]; }

  std::size_t index_of(const GroupElement& x) const {
    require_conforms(spec_, x);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < radices_.size(); ++k) {
      idx = idx * radices_[k] + static_cast<std::size_t>(detail::residue_of(x.coords[k]));
    }
    return idx;
  }

  std::size_t add(std::size_t i, std::size_t j) const {
    if (!add_table_.empty()) return add_table_[i * size() + j];
    return compute_add(i, j);
  }
  std::size_t neg(std::size_t i) const { return neg_[i]; }
  std::size_t sub(std::size_t i, std::size_t j) const { return add(i, neg_[j]); }

 private:
  std::size_t compute_add(std::size_t i, std::size_t j) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < radices_.size(); ++k) {
      idx = idx * radices_[k] + static_cast<std::size_t>((digits_[i][k] + digits_[j][k]) % radices_[k]);
    }
    return idx;
  }

  GroupSpec spec_;
  std::vector<int> radices_;
  std::vector<GroupElement> elements_;
  std::vector<std::vector<int>> digits_;
  std::vector<Scalar> norms_;
  std::vector<std::size_t> neg_;
  std::vector<std::size_t> add_table_;
};

// All elements of a finite group in lexicographic order.
inline std::vector<GroupElement> enumerate_elements(const GroupSpec& spec) {
  return FiniteGroup(spec).elements();
}

using Triple = std::array<GroupElement, 3>;

// Zero-mean triples a + b + c = 0 other than (0,0,0), one per permutation
// class, each listed with a <= b <= c in enumeration order.
inline std::vector<Triple> enumerate_zero_mean_triples(const FiniteGroup& g) {
  std::vector<Triple> out;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a; b < g.size(); ++b) {
      std::size_t c = g.neg(g.add(a, b));
      if (c < b) continue;
      if (a == 0 && b == 0 && c == 0) continue;
      out.push_back({g.element(a), g.element(b), g.element(c)});
    }
  }
  return out;
}

inline std::vector<Triple> enumerate_zero_mean_triples(const GroupSpec& spec) {
  return enumerate_zero_mean_triples(FiniteGroup(spec));
}

enum class NormAxiom { kPositiveWeight, kZeroAtIdentity, kDefiniteness, kSymmetry, kSubadditivity };

inline std::string_view axiom_name(NormAxiom a) {
  switch (a) {
    case NormAxiom::kPositiveWeight: return "positive_weight";
    case NormAxiom::kZeroAtIdentity: return "zero_at_identity";
    case NormAxiom::kDefiniteness: return "definiteness";
    case NormAxiom::kSymmetry: return "symmetry";
    case NormAxiom::kSubadditivity: return "subadditivity";
  }
  return "unknown";
}

struct NormViolation {
  NormAxiom axiom;
  std::size_t factor = 0;
  // Residue tuples (factor-local) of the elements involved.
  std::vector<std::vector<int>> witnesses;
  std::string message;
};

namespace detail {

inline std::string digits_label(const std::vector<int>& d) {
  if (d.size() == 1) return std::to_string(d[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d[i]);
  }
  return s + ")";
}

}  // namespace detail

// Checks the norm axioms on every factor (exhaustively on finite tables).
// Returns the first violation found, scanning factors in order and, within a
// table, zero / definiteness / symmetry / subadditivity in lexicographic order.
inline std::optional<NormViolation> validate_norm(const GroupSpec& spec) {
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    if (fs.kind != FactorKind::kMod) {
      if (fs.weight <= 0) {
        return NormViolation{NormAxiom::kPositiveWeight, f, {},
                             "weight " + to_string(fs.weight) + " is not positive"};
      }
      continue;
    }
    FiniteGroup g(GroupSpec({fs}));
    const auto& t = fs.norm_table;
    auto label = [&](std::size_t i) { return detail::digits_label(detail::table_digits(fs, i)); };
    auto digits = [&](std::size_t i) { return detail::table_digits(fs, i); };
    if (t[0] != 0) {
      return NormViolation{NormAxiom::kZeroAtIdentity, f, {digits(0)},
                           "|0| = " + to_string(t[0]) + " != 0"};
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (t[i] <= 0) {
        return NormViolation{NormAxiom::kDefiniteness, f, {digits(i)},
                             "|" + label(i) + "| = " + to_string(t[i]) + " is not positive"};
      }
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
      std::size_t j = g.neg(i);
      if (t[i] != t[j]) {
        return NormViolation{NormAxiom::kSymmetry, f, {digits(i), digits(j)},
                             "|" + label(i) + "| = " + to_string(t[i]) + " != " + to_string(t[j]) +
                                 " = |" + label(j) + "|"};
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        std::size_t k = g.add(i, j);
        if (t[k] > t[i] + t[j]) {
          return NormViolation{NormAxiom::kSubadditivity, f, {digits(i), digits(j), digits(k)},
                               "|" + label(i) + "|+|" + label(j) + "| = " + to_string(t[i] + t[j]) +
                                   " < " + to_string(t[k]) + " = |" + label(k) + "|"};
        }
      }
    }
  }
  return std::nullopt;
}

inline void require_valid_norm(const GroupSpec& spec) {
  if (auto v = validate_norm(spec)) throw Error(ErrorCode::kInvalidNorm, v->message);
}

// Human-readable element, e.g. "(1,0)" or "3/2".
inline std::string element_label(const GroupElement& x) {
  if (x.coords.size() == 1) return to_string(x.coords[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) s += ",";
    s += to_string(x.coords[i]);
  }
  return s + ")";
}

// Convenience constructor from integers.
inline GroupElement elem(std::initializer_list<long> coords) {
  GroupElement e;
  for (long c : coords) e.coords.emplace_back(c);
  return e;
}

inline GroupElement sum_elements(const GroupSpec& spec, const std::vector<GroupElement>& xs) {
  GroupElement total = zero(spec);
  for (const GroupElement& x : xs) total = add(spec, total, x);
  return total;
}

}  // namespace gcot

#endif  // GCOT_GROUP_HPP_
