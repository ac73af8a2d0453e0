#include "rsm/geometry.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <numeric>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

double unit_ball_volume(unsigned d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Body Body::standard_simplex(unsigned dim) {
  if (dim == 0) throw UsageError("simplex dimension must be >= 1");
  Body b;
  b.kind_ = BodyKind::kStandardSimplex;
  b.dim_ = dim;
  return b;
}

Body Body::cube(unsigned dim, double side) {
  if (dim == 0 || !(side > 0)) throw UsageError("cube needs dim >= 1 and side > 0");
  Body b;
  b.kind_ = BodyKind::kCube;
  b.dim_ = dim;
  b.side_ = side;
  return b;
}

Body Body::ball(unsigned dim) {
  if (dim == 0) throw UsageError("ball dimension must be >= 1");
  Body b;
  b.kind_ = BodyKind::kBall;
  b.dim_ = dim;
  return b;
}

Body Body::halfball(unsigned dim) {
  if (dim < 1) throw UsageError("halfball dimension must be >= 1");
  Body b;
  b.kind_ = BodyKind::kHalfball;
  b.dim_ = dim;
  return b;
}

Body Body::product(const Body& base, double height) {
  if (!(height > 0) || !std::isfinite(height)) throw UsageError("product height must be positive");
  Body b;
  b.kind_ = BodyKind::kProduct;
  b.dim_ = base.dim() + 1;
  b.height_ = height;
  b.base_ = std::make_shared<const Body>(base.without_fixed_point());
  return b;
}

bool Body::is_polytope() const {
  switch (kind_) {
    case BodyKind::kStandardSimplex:
    case BodyKind::kCube:
      return true;
    case BodyKind::kBall:
    case BodyKind::kHalfball:
      return dim_ == 1;
    case BodyKind::kProduct:
      return base_->is_polytope();
  }
  return false;
}

std::string Body::name() const {
  switch (kind_) {
    case BodyKind::kStandardSimplex:
      if (dim_ == 2) return "T2";
      if (dim_ == 3) return "T3";
      return "simplex:" + std::to_string(dim_);
    case BodyKind::kCube:
      return "cube:" + std::to_string(dim_) + (side_ == 1.0 ? "" : ":" + format_real(side_));
    case BodyKind::kBall:
      return "ball:" + std::to_string(dim_);
    case BodyKind::kHalfball:
      return "halfball:" + std::to_string(dim_);
    case BodyKind::kProduct:
      return "prism(" + base_->name() + "," + format_real(height_) + ")";
  }
  return "?";
}

bool Body::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case BodyKind::kStandardSimplex: {
      double s = 0.0;
      for (double v : x) {
        if (v < -tol) return false;
        s += v;
      }
      return s <= 1.0 + tol;
    }
    case BodyKind::kCube:
      for (double v : x)
        if (v < -tol || v > side_ + tol) return false;
      return true;
    case BodyKind::kBall:
      return norm(x) <= 1.0 + tol;
    case BodyKind::kHalfball:
      return norm(x) <= 1.0 + tol && x.back() >= -tol;
    case BodyKind::kProduct:
      return base_->contains(x.first(dim_ - 1), tol) && x.back() >= -tol && x.back() <= height_ + tol;
  }
  return false;
}

bool Body::on_boundary(std::span<const double> x, double tol) const {
  if (!contains(x, tol)) return false;
  switch (kind_) {
    case BodyKind::kStandardSimplex: {
      double s = 0.0;
      bool on_face = false;
      for (double v : x) {
        on_face = on_face || std::abs(v) <= tol;
        s += v;
      }
      return on_face || std::abs(s - 1.0) <= tol;
    }
    case BodyKind::kCube:
      for (double v : x)
        if (std::abs(v) <= tol || std::abs(v - side_) <= tol) return true;
      return false;
    case BodyKind::kBall:
      return std::abs(norm(x) - 1.0) <= tol;
    case BodyKind::kHalfball:
      return std::abs(x.back()) <= tol || std::abs(norm(x) - 1.0) <= tol;
    case BodyKind::kProduct:
      return std::abs(x.back()) <= tol || std::abs(x.back() - height_) <= tol ||
             base_->on_boundary(x.first(dim_ - 1), tol);
  }
  return false;
}

Body Body::with_fixed_point(Point x) const {
  if (x.size() != dim_) throw UsageError("fixed point has dimension " + std::to_string(x.size()) +
                                         ", body " + name() + " has " + std::to_string(dim_));
  if (!on_boundary(x, 1e-12)) throw UsageError("fixed point is not on the boundary of " + name());
  Body b = *this;
  b.fixed_ = std::move(x);
  return b;
}

Body Body::without_fixed_point() const {
  Body b = *this;
  b.fixed_.reset();
  return b;
}

nlohmann::json Body::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case BodyKind::kStandardSimplex:
      j["kind"] = dim_ == 2 ? "triangle-T2" : (dim_ == 3 ? "tetrahedron-T3" : "standard-simplex");
      break;
    case BodyKind::kCube:
      j["kind"] = "cube";
      if (side_ != 1.0) j["side"] = format_real(side_);
      break;
    case BodyKind::kBall:
      j["kind"] = "ball";
      break;
    case BodyKind::kHalfball:
      j["kind"] = "halfball";
      break;
    case BodyKind::kProduct:
      j["kind"] = "product";
      j["base"] = base_->to_json();
      j["height"] = format_real(height_);
      break;
  }
  j["dim"] = dim_;
  if (fixed_) j["fixed_point"] = *fixed_;
  return j;
}

Body Body::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw UsageError("body descriptor needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  auto dim = [&]() -> unsigned {
    if (!j.contains("dim")) throw UsageError("body descriptor '" + kind + "' needs 'dim'");
    return j.at("dim").get<unsigned>();
  };
  auto real_field = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    return v.is_string() ? ExactRational::parse(v.get<std::string>()).to_double() : v.get<double>();
  };
  Body b;
  if (kind == "triangle-T2") {
    b = triangle_t2();
  } else if (kind == "tetrahedron-T3") {
    b = tetrahedron_t3();
  } else if (kind == "standard-simplex") {
    b = standard_simplex(dim());
  } else if (kind == "cube") {
    b = cube(dim(), real_field("side", 1.0));
  } else if (kind == "ball") {
    b = ball(dim());
  } else if (kind == "halfball") {
    b = halfball(dim());
  } else if (kind == "product") {
    if (!j.contains("base")) throw UsageError("product descriptor needs 'base'");
    b = product(from_json(j.at("base")), real_field("height", 0.0));
  } else {
    throw UsageError("unsupported body kind '" + kind + "'");
  }
  if (j.contains("dim") && j.at("dim").get<unsigned>() != b.dim())
    throw UsageError("body descriptor dim does not match kind '" + kind + "'");
  if (j.contains("fixed_point") && !j.at("fixed_point").is_null())
    b = b.with_fixed_point(j.at("fixed_point").get<Point>());
  return b;
}

Body Body::parse(const std::string& text) {
  if (!text.empty() && text.front() == '{') return from_json(nlohmann::json::parse(text));
  if (text == "T2") return triangle_t2();
  if (text == "T3") return tetrahedron_t3();
  if (text == "segment") return standard_simplex(1);
  if (text.rfind("prism(", 0) == 0 && text.back() == ')') {
    const std::string inner = text.substr(6, text.size() - 7);
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(' || inner[i] == '{') ++depth;
      if (inner[i] == ')' || inner[i] == '}') --depth;
      if (inner[i] == ',' && depth == 0) split = i;
    }
    if (split == std::string::npos) throw UsageError("prism(<body>,<height>) expected, got '" + text + "'");
    return product(parse(inner.substr(0, split)), ExactRational::parse(inner.substr(split + 1)).to_double());
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("unknown body '" + text + "'");
  const std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  std::string extra;
  if (auto c2 = rest.find(':'); c2 != std::string::npos) {
    extra = rest.substr(c2 + 1);
    rest = rest.substr(0, c2);
  }
  unsigned d = 0;
  try {
    d = static_cast<unsigned>(std::stoul(rest));
  } catch (const std::exception&) {
    throw UsageError("bad dimension in body '" + text + "'");
  }
  if (kind == "simplex") return standard_simplex(d);
  if (kind == "cube") return cube(d, extra.empty() ? 1.0 : ExactRational::parse(extra).to_double());
  if (kind == "ball") return ball(d);
  if (kind == "halfball") return halfball(d);
  throw UsageError("unknown body kind '" + kind + "'");
}

BodyMeasures body_measures(const Body& b) {
  const unsigned d = b.dim();
  switch (b.kind()) {
    case BodyKind::kStandardSimplex: {
      const double fd1 = factorial(d - 1).get_d();
      return {1.0 / factorial(d).get_d(), d / fd1 + std::sqrt(static_cast<double>(d)) / fd1};
    }
    case BodyKind::kCube:
      return {std::pow(b.side(), d), 2.0 * d * std::pow(b.side(), d - 1.0)};
    case BodyKind::kBall: {
      const double w = unit_ball_volume(d);
      return {w, d * w};
    }
    case BodyKind::kHalfball: {
      const double w = unit_ball_volume(d);
      return {w / 2.0, d * w / 2.0 + unit_ball_volume(d - 1)};
    }
    case BodyKind::kProduct: {
      const BodyMeasures m = body_measures(b.base());
      return {m.volume * b.height(), 2.0 * m.volume + m.surface * b.height()};
    }
  }
  throw UsageError("body_measures: unsupported kind");
}

std::vector<Face> boundary_faces(const Body& b) {
  const unsigned d = b.dim();
  std::vector<Face> faces;
  switch (b.kind()) {
    case BodyKind::kStandardSimplex: {
      std::vector<Point> verts(d + 1, Point(d, 0.0));
      for (unsigned i = 1; i <= d; ++i) verts[i][i - 1] = 1.0;
      for (unsigned skip = 0; skip <= d; ++skip) {
        Face f;
        f.kind = Face::Kind::kSimplex;
        for (unsigned i = 0; i <= d; ++i)
          if (i != skip) f.vertices.push_back(verts[i]);
        f.measure = d == 1 ? 1.0 : gram_volume(f.vertices);
        faces.push_back(std::move(f));
      }
      return faces;
    }
    case BodyKind::kCube:
      for (unsigned axis = 0; axis < d; ++axis) {
        for (double level : {0.0, b.side()}) {
          Face f;
          f.kind = Face::Kind::kBox;
          f.lo.assign(d, 0.0);
          f.hi.assign(d, b.side());
          f.lo[axis] = f.hi[axis] = level;
          f.measure = std::pow(b.side(), d - 1.0);
          faces.push_back(std::move(f));
        }
      }
      return faces;
    case BodyKind::kProduct: {
      const auto base = std::make_shared<const Body>(b.base());
      const double base_volume = body_measures(*base).volume;
      for (double level : {0.0, b.height()}) {
        Face f;
        f.kind = Face::Kind::kCap;
        f.body = base;
        f.level = level;
        f.measure = base_volume;
        f.flat_cap = true;
        faces.push_back(std::move(f));
      }
      for (auto& inner : boundary_faces(*base)) {
        Face f;
        f.kind = Face::Kind::kExtruded;
        f.measure = inner.measure * b.height();
        f.height = b.height();
        f.inner = std::make_shared<const Face>(std::move(inner));
        faces.push_back(std::move(f));
      }
      return faces;
    }
    case BodyKind::kBall:
    case BodyKind::kHalfball:
      break;
  }
  throw UsageError("boundary faces are only available for polytopes, not " + b.name());
}

double gram_volume(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw UsageError("gram_volume needs at least two points");
  const std::size_t d = pts[0].size();
  if (n > d + 1) throw UsageError("gram_volume: more than d+1 points in R^d");
  for (const auto& p : pts)
    if (p.size() != d) throw UsageError("gram_volume: points of mixed dimension");

  std::vector<Point> q;
  q.reserve(n - 1);
  double vol = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    Point v(d);
    for (std::size_t c = 0; c < d; ++c) v[c] = pts[i][c] - pts[0][c];
    const double original = norm(v);
    for (const auto& u : q) {
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) dot += v[c] * u[c];
      for (std::size_t c = 0; c < d; ++c) v[c] -= dot * u[c];
    }
    const double r = norm(v);
    if (r <= 1e-13 * original || r == 0.0) return 0.0;
    for (double& c : v) c /= r;
    q.push_back(std::move(v));
    vol *= r;
  }
  return vol / factorial(static_cast<unsigned>(n - 1)).get_d();
}

ExactRational gram_determinant(std::span<const std::vector<ExactRational>> pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw UsageError("gram_determinant needs at least two points");
  const std::size_t d = pts[0].size();
  std::vector<std::vector<ExactRational>> edges(n - 1, std::vector<ExactRational>(d));
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].size() != d) throw UsageError("gram_determinant: points of mixed dimension");
    for (std::size_t c = 0; c < d; ++c) edges[i - 1][c] = pts[i][c] - pts[0][c];
  }
  const std::size_t m = n - 1;
  std::vector<std::vector<ExactRational>> g(m, std::vector<ExactRational>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t c = 0; c < d; ++c) g[i][j] += edges[i][c] * edges[j][c];

  ExactRational det(1);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && g[pivot][col].is_zero()) ++pivot;
    if (pivot == m) return ExactRational(0);
    if (pivot != col) {
      std::swap(g[pivot], g[col]);
      det = -det;
    }
    det *= g[col][col];
    for (std::size_t r = col + 1; r < m; ++r) {
      if (g[r][col].is_zero()) continue;
      const ExactRational f = g[r][col] / g[col][col];
      for (std::size_t c = col; c < m; ++c) g[r][c] -= f * g[col][c];
    }
  }
  return det;
}

double gram_volume_exact(std::span<const std::vector<ExactRational>> pts) {
  const ExactRational det = gram_determinant(pts);
  return std::sqrt(det.to_double()) / factorial(static_cast<unsigned>(pts.size() - 1)).get_d();
}

const BigInt& factorial(unsigned n) {
  static std::mutex mu;
  static std::deque<BigInt> table{BigInt(1)};
  std::lock_guard lock(mu);
  while (table.size() <= n) table.push_back(table.back() * static_cast<unsigned long>(table.size()));
  return table[n];
}

ExactRational monomial_integral_T3(unsigned l, unsigned m, unsigned n) {
  return ExactRational(factorial(l) * factorial(m) * factorial(n), factorial(l + m + n + 3));
}

}  // namespace rsm
