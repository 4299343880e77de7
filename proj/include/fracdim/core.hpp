#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fracdim {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline Rat rat(long num, long den = 1) { return Rat(BigInt(num), BigInt(den)); }

double to_double(const Rat& r);
BigInt floor_rat(const Rat& r);
BigInt ceil_rat(const Rat& r);
bool is_dyadic(const Rat& r);               // denominator a power of two
Rat pow_rat(const Rat& base, unsigned exp);
Rat parse_rat(const std::string& text);     // "3/4", "-2", "0.25"
std::string rat_to_string(const Rat& r);

/// Nonnegative real extended with +infinity. Comparisons are total and
/// x + inf = inf, x * inf = inf for x > 0.
class ExtReal {
 public:
  ExtReal() : v_(0.0) {}
  explicit ExtReal(double v) : v_(v) {
    if (!(v >= 0.0)) throw std::invalid_argument("ExtReal: negative or NaN value");
  }
  static ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  bool is_inf() const { return std::isinf(v_); }
  bool is_zero() const { return v_ == 0.0; }
  double value() const { return v_; }

  ExtReal operator+(const ExtReal& o) const { return ExtReal(v_ + o.v_); }
  ExtReal& operator+=(const ExtReal& o) { v_ += o.v_; return *this; }
  // measure-theoretic convention 0 * inf = 0
  ExtReal operator*(const ExtReal& o) const {
    if (v_ == 0.0 || o.v_ == 0.0) return ExtReal(0.0);
    return ExtReal(v_ * o.v_);
  }
  auto operator<=>(const ExtReal& o) const = default;

 private:
  double v_;
};

/// Exact squared diameter: a nonnegative rational, or +infinity. All shipped
/// cell diameters are square roots of rationals, so sup/ordering and
/// "diam <= delta" tests stay exact; the square root is taken only when a
/// floating-point diameter is finally needed.
class DiamSq {
 public:
  DiamSq() : sq_(0), inf_(false) {}
  explicit DiamSq(Rat sq) : sq_(std::move(sq)), inf_(false) {
    if (sq_ < Rat(0)) throw std::invalid_argument("DiamSq: negative");
  }
  static DiamSq infinity() { DiamSq d; d.inf_ = true; return d; }

  bool is_inf() const { return inf_; }
  const Rat& sq() const { return sq_; }
  ExtReal diameter() const {
    if (inf_) return ExtReal::infinity();
    return ExtReal(std::sqrt(to_double(sq_)));
  }
  /// diam^s as a double (exp((s/2) log sq)); 0^0 = 1.
  double pow(double s) const;

  bool operator==(const DiamSq& o) const { return inf_ == o.inf_ && (inf_ || sq_ == o.sq_); }
  bool operator<(const DiamSq& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return sq_ < o.sq_;
  }
  bool operator<=(const DiamSq& o) const { return *this < o || *this == o; }

  static DiamSq max(const DiamSq& a, const DiamSq& b) { return a < b ? b : a; }

 private:
  Rat sq_;
  bool inf_;
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct RatInterval {
  Rat lo, hi;
  RatInterval() = default;
  RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw std::invalid_argument("RatInterval: hi < lo");
  }
  Rat length() const { return hi - lo; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool meets(const RatInterval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool contains_interval(const RatInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

/// Product of closed intervals with exact rational endpoints. Degenerate
/// sides (lo == hi) are allowed, so points and axis-parallel segments embed.
struct AxisBox {
  std::vector<RatInterval> iv;

  AxisBox() = default;
  explicit AxisBox(std::vector<RatInterval> v) : iv(std::move(v)) {}
  static AxisBox interval(Rat lo, Rat hi) { return AxisBox({RatInterval(std::move(lo), std::move(hi))}); }

  int dim() const { return static_cast<int>(iv.size()); }
  DiamSq diam_sq() const {
    Rat s(0);
    for (const auto& i : iv) s += i.length() * i.length();
    return DiamSq(s);
  }
  bool meets(const AxisBox& o) const;
  bool contains_box(const AxisBox& o) const;
  bool contains_point(const std::vector<Rat>& p) const;
  Rat volume() const {
    Rat v(1);
    for (const auto& i : iv) v *= i.length();
    return v;
  }
};

struct PointGeom {
  std::vector<Rat> xs;
};

struct SegmentGeom {
  std::vector<Rat> a, b;
};

/// Exact affine map x -> linear * x + shift.
struct AffineMap {
  std::vector<std::vector<Rat>> linear;  // d x d, row major
  std::vector<Rat> shift;

  int dim() const { return static_cast<int>(shift.size()); }
  static AffineMap identity(int d);
  static AffineMap scale_1d(Rat factor, Rat offset);  // x -> factor*x + offset
  std::vector<Rat> apply(const std::vector<Rat>& x) const;
  AffineMap compose(const AffineMap& inner) const;    // this(inner(x))
  /// Exact squared operator norm when computable in closed form (diagonal or
  /// antidiagonal linear part); otherwise nullopt.
  std::optional<Rat> operator_norm_sq_exact() const;
};

class IFSystem;  // ifs.hpp

struct UnboundedComplementGeom {
  AxisBox open_box;  // cell = R^d \ interior(open_box)
};

struct MappedGeom;

using CellGeometry =
    std::variant<AxisBox, PointGeom, SegmentGeom, MappedGeom, UnboundedComplementGeom>;

/// Affine image of an inner set: either a box (exact image geometry) or an
/// attractor reference whose diameter is known.
struct MappedGeom {
  AffineMap map;
  struct AttractorInner {
    std::shared_ptr<const IFSystem> ifs;
    DiamSq diam_sq;
  };
  std::variant<AxisBox, AttractorInner> inner;
  /// Similarity factor of `map` when it is a similarity (exact); the mapped
  /// diameter is then factor * diam(inner).
  std::optional<Rat> similarity_factor;
};

DiamSq geometry_diam_sq(const CellGeometry& g);
/// Bounding axis box (hull) of a geometry; nullopt for unbounded cells.
std::optional<AxisBox> geometry_hull(const CellGeometry& g);
/// Exact test: does the geometry meet the given closed axis box? Supported
/// for AxisBox/Point/Segment/UnboundedComplement and for MappedGeom with box
/// inner in dimension <= 2 (separating-axis test on the image parallelogram).
bool geometry_meets_box(const CellGeometry& g, const AxisBox& box);
/// Exact containment of `inner` inside `outer` where both are (possibly
/// mapped) boxes; used by refinement checks.
bool geometry_contains(const CellGeometry& outer, const CellGeometry& inner);

/// Cell of a level: geometry plus an address (word over the map alphabet for
/// IFS structures, lattice index for grids) that is unique within the level.
struct Cell {
  CellGeometry geometry;
  std::vector<std::int64_t> address;
  int level = 0;

  DiamSq diam_sq() const { return geometry_diam_sq(geometry); }
};

}  // namespace fracdim
