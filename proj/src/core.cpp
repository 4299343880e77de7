#include "fracdim/core.hpp"

#include <algorithm>
#include <sstream>

namespace fracdim {

double to_double(const Rat& r) {
  // Scale so numerator/denominator convert without overflow, then divide.
  const BigInt& n = r.numerator();
  const BigInt& d = r.denominator();
  if (n == 0) return 0.0;
  using boost::multiprecision::msb;
  BigInt an = n < 0 ? BigInt(-n) : n;
  long shift = static_cast<long>(msb(an)) - static_cast<long>(msb(d));
  // bring |n/d| into [2^-64, 2^64] before conversion
  BigInt n2 = an, d2 = d;
  long e = 0;
  while (shift > 52) { d2 <<= 8; shift -= 8; e += 8; }
  while (shift < -52) { n2 <<= 8; shift += 8; e -= 8; }
  double q = n2.convert_to<double>() / d2.convert_to<double>();
  double res = std::ldexp(q, static_cast<int>(e));
  return n < 0 ? -res : res;
}

BigInt floor_rat(const Rat& r) {
  BigInt q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return q;
}

BigInt ceil_rat(const Rat& r) {
  BigInt q = r.numerator() / r.denominator();
  if (r.numerator() > 0 && q * r.denominator() != r.numerator()) ++q;
  return q;
}

bool is_dyadic(const Rat& r) {
  BigInt d = r.denominator();
  while (d % 2 == 0) d /= 2;
  return d == 1;
}

Rat pow_rat(const Rat& base, unsigned exp) {
  Rat result(1);
  Rat b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rat: zero denominator in '" + text + "'");
    return Rat(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    BigInt num(digits);
    BigInt den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rat(num, den);
  }
  return Rat(BigInt(text), BigInt(1));
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

double DiamSq::pow(double s) const {
  if (inf_) return std::numeric_limits<double>::infinity();
  if (sq_ == 0) return s == 0.0 ? 1.0 : 0.0;
  if (s == 0.0) return 1.0;
  return std::exp(0.5 * s * std::log(to_double(sq_)));
}

// ---------------------------------------------------------------------------

bool AxisBox::meets(const AxisBox& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("AxisBox::meets: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!iv[i].meets(o.iv[i])) return false;
  return true;
}

bool AxisBox::contains_box(const AxisBox& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("AxisBox::contains_box: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!iv[i].contains_interval(o.iv[i])) return false;
  return true;
}

bool AxisBox::contains_point(const std::vector<Rat>& p) const {
  if (static_cast<int>(p.size()) != dim())
    throw std::invalid_argument("AxisBox::contains_point: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!iv[i].contains(p[i])) return false;
  return true;
}

AffineMap AffineMap::identity(int d) {
  AffineMap m;
  m.linear.assign(d, std::vector<Rat>(d, Rat(0)));
  for (int i = 0; i < d; ++i) m.linear[i][i] = Rat(1);
  m.shift.assign(d, Rat(0));
  return m;
}

AffineMap AffineMap::scale_1d(Rat factor, Rat offset) {
  AffineMap m;
  m.linear = {{std::move(factor)}};
  m.shift = {std::move(offset)};
  return m;
}

std::vector<Rat> AffineMap::apply(const std::vector<Rat>& x) const {
  int d = dim();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("AffineMap::apply: dimension");
  std::vector<Rat> y(d, Rat(0));
  for (int i = 0; i < d; ++i) {
    Rat acc = shift[i];
    for (int j = 0; j < d; ++j) acc += linear[i][j] * x[j];
    y[i] = acc;
  }
  return y;
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
  int d = dim();
  if (inner.dim() != d) throw std::invalid_argument("AffineMap::compose: dimension");
  AffineMap r;
  r.linear.assign(d, std::vector<Rat>(d, Rat(0)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Rat acc(0);
      for (int k = 0; k < d; ++k) acc += linear[i][k] * inner.linear[k][j];
      r.linear[i][j] = acc;
    }
  r.shift = apply(inner.shift);
  return r;
}

std::optional<Rat> AffineMap::operator_norm_sq_exact() const {
  int d = dim();
  // diagonal: norm = max |a_ii|; antidiagonal: max |a_{i,d-1-i}|
  bool diag = true, anti = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (linear[i][j] != 0 && i != j) diag = false;
      if (linear[i][j] != 0 && j != d - 1 - i) anti = false;
    }
  if (!diag && !anti) return std::nullopt;
  Rat best(0);
  for (int i = 0; i < d; ++i) {
    Rat a = diag ? linear[i][i] : linear[i][d - 1 - i];
    Rat asq = a * a;
    if (asq > best) best = asq;
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<Rat>> box_vertices(const AxisBox& b) {
  int d = b.dim();
  std::vector<std::vector<Rat>> out;
  size_t total = size_t{1} << d;
  out.reserve(total);
  for (size_t mask = 0; mask < total; ++mask) {
    std::vector<Rat> v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? b.iv[i].hi : b.iv[i].lo;
    out.push_back(std::move(v));
  }
  return out;
}

Rat dist_sq(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) {
    Rat d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

DiamSq mapped_diam_sq(const MappedGeom& m) {
  if (m.similarity_factor) {
    Rat f2 = *m.similarity_factor * *m.similarity_factor;
    if (const auto* box = std::get_if<AxisBox>(&m.inner))
      return DiamSq(f2 * box->diam_sq().sq());
    const auto& att = std::get<MappedGeom::AttractorInner>(m.inner);
    if (att.diam_sq.is_inf()) return DiamSq::infinity();
    return DiamSq(f2 * att.diam_sq.sq());
  }
  // general affine image of a box: diameter over the image vertices
  const auto* box = std::get_if<AxisBox>(&m.inner);
  if (!box)
    throw std::logic_error("MappedGeom: non-similarity map over an attractor inner set");
  auto verts = box_vertices(*box);
  for (auto& v : verts) v = m.map.apply(v);
  Rat best(0);
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j)
      best = std::max(best, dist_sq(verts[i], verts[j]));
  return DiamSq(best);
}

AxisBox mapped_hull(const MappedGeom& m) {
  const AxisBox* box = std::get_if<AxisBox>(&m.inner);
  AxisBox inner_box;
  if (box) {
    inner_box = *box;
  } else {
    throw std::logic_error("MappedGeom hull: attractor inner without box form");
  }
  auto verts = box_vertices(inner_box);
  int d = m.map.dim();
  std::vector<Rat> lo, hi;
  bool first = true;
  for (auto& v : verts) {
    auto w = m.map.apply(v);
    if (first) {
      lo = w;
      hi = w;
      first = false;
    } else {
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], w[i]);
        hi[i] = std::max(hi[i], w[i]);
      }
    }
  }
  std::vector<RatInterval> iv;
  for (int i = 0; i < d; ++i) iv.emplace_back(lo[i], hi[i]);
  return AxisBox(std::move(iv));
}

// Exact parallelogram-vs-box overlap in 2-D via separating axes. The image of
// a box under an invertible affine map is a parallelogram; its edge normals
// plus the coordinate axes are the candidate separating directions.
bool parallelogram_meets_box_2d(const MappedGeom& m, const AxisBox& box) {
  const auto& inner = std::get<AxisBox>(m.inner);
  auto verts = box_vertices(inner);
  for (auto& v : verts) v = m.map.apply(v);
  auto bverts = box_vertices(box);

  auto separated = [](const std::vector<std::vector<Rat>>& A,
                      const std::vector<std::vector<Rat>>& B, const Rat& nx, const Rat& ny) {
    Rat aMin, aMax, bMin, bMax;
    bool fa = true, fb = true;
    for (const auto& p : A) {
      Rat d = nx * p[0] + ny * p[1];
      if (fa) { aMin = aMax = d; fa = false; }
      else { aMin = std::min(aMin, d); aMax = std::max(aMax, d); }
    }
    for (const auto& p : B) {
      Rat d = nx * p[0] + ny * p[1];
      if (fb) { bMin = bMax = d; fb = false; }
      else { bMin = std::min(bMin, d); bMax = std::max(bMax, d); }
    }
    return aMax < bMin || bMax < aMin;
  };

  // axes of the box
  if (separated(verts, bverts, Rat(1), Rat(0))) return false;
  if (separated(verts, bverts, Rat(0), Rat(1))) return false;
  // normals of the parallelogram edges: columns of the linear part rotated 90°
  for (int col = 0; col < 2; ++col) {
    Rat ex = m.map.linear[0][col], ey = m.map.linear[1][col];
    if (ex == 0 && ey == 0) continue;
    if (separated(verts, bverts, -ey, ex)) return false;
  }
  return true;
}

bool segment_meets_box(const SegmentGeom& s, const AxisBox& box) {
  // exact Liang-Barsky clip of the parametric segment a + t(b-a), t in [0,1]
  size_t d = s.a.size();
  Rat t0(0), t1(1);
  for (size_t i = 0; i < d; ++i) {
    Rat delta = s.b[i] - s.a[i];
    Rat lo = box.iv[i].lo - s.a[i];
    Rat hi = box.iv[i].hi - s.a[i];
    if (delta == 0) {
      if (lo > Rat(0) || hi < Rat(0)) return false;
      continue;
    }
    Rat ta = lo / delta, tb = hi / delta;
    if (delta < 0) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

DiamSq geometry_diam_sq(const CellGeometry& g) {
  return std::visit(
      [](const auto& v) -> DiamSq {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AxisBox>) return v.diam_sq();
        else if constexpr (std::is_same_v<T, PointGeom>) return DiamSq(Rat(0));
        else if constexpr (std::is_same_v<T, SegmentGeom>) return DiamSq(dist_sq(v.a, v.b));
        else if constexpr (std::is_same_v<T, MappedGeom>) return mapped_diam_sq(v);
        else return DiamSq::infinity();  // UnboundedComplementGeom
      },
      g);
}

std::optional<AxisBox> geometry_hull(const CellGeometry& g) {
  return std::visit(
      [](const auto& v) -> std::optional<AxisBox> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AxisBox>) return v;
        else if constexpr (std::is_same_v<T, PointGeom>) {
          std::vector<RatInterval> iv;
          for (const auto& x : v.xs) iv.emplace_back(x, x);
          return AxisBox(std::move(iv));
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          std::vector<RatInterval> iv;
          for (size_t i = 0; i < v.a.size(); ++i)
            iv.emplace_back(std::min(v.a[i], v.b[i]), std::max(v.a[i], v.b[i]));
          return AxisBox(std::move(iv));
        } else if constexpr (std::is_same_v<T, MappedGeom>) {
          return mapped_hull(v);
        } else {
          return std::nullopt;
        }
      },
      g);
}

bool geometry_meets_box(const CellGeometry& g, const AxisBox& box) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AxisBox>) {
          return v.meets(box);
        } else if constexpr (std::is_same_v<T, PointGeom>) {
          return box.contains_point(v.xs);
        } else if constexpr (std::is_same_v<T, SegmentGeom>) {
          return segment_meets_box(v, box);
        } else if constexpr (std::is_same_v<T, MappedGeom>) {
          AxisBox hull = mapped_hull(v);
          if (!hull.meets(box)) return false;
          if (v.map.dim() == 1 || !std::holds_alternative<AxisBox>(v.inner)) return true;
          if (v.map.dim() == 2) return parallelogram_meets_box_2d(v, box);
          return true;  // hull overlap as the (conservative) answer for d >= 3
        } else {  // UnboundedComplementGeom: complement of an open box
          const AxisBox& open = v.open_box;
          // box misses the cell iff box lies strictly inside the open box
          for (int i = 0; i < open.dim(); ++i)
            if (!(open.iv[i].lo < box.iv[i].lo && box.iv[i].hi < open.iv[i].hi)) return true;
          return false;
        }
      },
      g);
}

bool geometry_contains(const CellGeometry& outer, const CellGeometry& inner) {
  // hull-based exact containment for the shipped cases
  if (const auto* uo = std::get_if<UnboundedComplementGeom>(&outer)) {
    if (const auto* ui = std::get_if<UnboundedComplementGeom>(&inner))
      return ui->open_box.contains_box(uo->open_box);  // smaller open hole => bigger cell
    auto h = geometry_hull(inner);
    if (!h) return false;
    // bounded cell inside the complement iff it misses the open box interior,
    // i.e. it is separated from the open box in some axis
    for (int i = 0; i < uo->open_box.dim(); ++i) {
      const auto& o = uo->open_box.iv[i];
      const auto& b = h->iv[i];
      if (b.hi <= o.lo || b.lo >= o.hi) return true;
    }
    return false;
  }
  auto ho = geometry_hull(outer);
  auto hi = geometry_hull(inner);
  if (!ho || !hi) return false;
  if (std::holds_alternative<AxisBox>(outer) || std::holds_alternative<MappedGeom>(outer)) {
    if (std::holds_alternative<MappedGeom>(outer) && ho->dim() == 2) {
      // exact: every vertex of the inner hull inside the outer parallelogram
      const auto& mo = std::get<MappedGeom>(outer);
      if (std::holds_alternative<AxisBox>(mo.inner)) {
        // vertices of inner hull must lie in the image; test via inverse map
        // by solving the 2x2 system exactly
        const auto& L = mo.map.linear;
        Rat det = L[0][0] * L[1][1] - L[0][1] * L[1][0];
        if (det == 0) return ho->contains_box(*hi);
        const auto& ib = std::get<AxisBox>(mo.inner);
        auto inv_in = [&](const Rat& x, const Rat& y) {
          Rat rx = x - mo.map.shift[0], ry = y - mo.map.shift[1];
          Rat u = (L[1][1] * rx - L[0][1] * ry) / det;
          Rat v = (-L[1][0] * rx + L[0][0] * ry) / det;
          return ib.iv[0].contains(u) && ib.iv[1].contains(v);
        };
        for (const auto& p : box_vertices(*hi))
          if (!inv_in(p[0], p[1])) return false;
        return true;
      }
    }
    return ho->contains_box(*hi);
  }
  return ho->contains_box(*hi);
}

}  // namespace fracdim
