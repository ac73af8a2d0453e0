#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsm/rational.hpp"

namespace rsm {

using Point = std::vector<double>;

enum class BodyKind { kStandardSimplex, kCube, kBall, kHalfball, kProduct };

// Convex body from a fixed catalog, optionally carrying a distinguished
// boundary point. Immutable once built.
//   standard simplex(d): conv(0, e_1, ..., e_d); d = 2 is T2, d = 3 is T3
//   cube(d, side):       [0, side]^d
//   ball(d):             unit ball at the origin
//   halfball(d):         unit ball intersected with {x_d >= 0}
//   product(base, h):    base x [0, h]
class Body {
 public:
  static Body standard_simplex(unsigned dim);
  static Body triangle_t2() { return standard_simplex(2); }
  static Body tetrahedron_t3() { return standard_simplex(3); }
  static Body cube(unsigned dim, double side = 1.0);
  static Body ball(unsigned dim);
  static Body halfball(unsigned dim);
  static Body product(const Body& base, double height);

  BodyKind kind() const { return kind_; }
  unsigned dim() const { return dim_; }
  double side() const { return side_; }
  double height() const { return height_; }
  // Only valid for products.
  const Body& base() const { return *base_; }
  bool is_polytope() const;
  std::string name() const;

  // Signed-distance style membership with tolerance.
  bool contains(std::span<const double> x, double tol = 1e-12) const;
  bool on_boundary(std::span<const double> x, double tol = 1e-12) const;

  const std::optional<Point>& fixed_point() const { return fixed_; }
  // Copy with a boundary point attached; throws UsageError if x is not on bd.
  Body with_fixed_point(Point x) const;
  Body without_fixed_point() const;

  nlohmann::json to_json() const;
  static Body from_json(const nlohmann::json& j);
  // Compact text form: T2, T3, simplex:d, cube:d[:side], ball:d, halfball:d,
  // segment, prism(<body>,<height>), or a JSON object.
  static Body parse(const std::string& text);

 private:
  Body() = default;
  BodyKind kind_ = BodyKind::kStandardSimplex;
  unsigned dim_ = 0;
  double side_ = 1.0;
  double height_ = 0.0;
  std::shared_ptr<const Body> base_;
  std::optional<Point> fixed_;
};

struct BodyMeasures {
  double volume = 0.0;
  double surface = 0.0;
};

BodyMeasures body_measures(const Body& b);

// A (d-1)-dimensional boundary piece of a polytope, with its measure.
struct Face {
  enum class Kind {
    kSimplex,   // conv(vertices)
    kBox,       // axis box [lo, hi]; one coordinate has lo == hi
    kCap,       // a copy of `body` with an extra last coordinate fixed to `level`
    kExtruded,  // `inner` (a face of the base) times [0, height]
  };
  Kind kind = Kind::kSimplex;
  double measure = 0.0;
  std::vector<Point> vertices;
  Point lo, hi;
  std::shared_ptr<const Body> body;
  double level = 0.0;
  std::shared_ptr<const Face> inner;
  double height = 0.0;
  // For faces of a product body: true for the two caps base x {0} and base x {h}.
  bool flat_cap = false;
};

// Boundary facets of a polytope in the catalog; UsageError for curved bodies.
std::vector<Face> boundary_faces(const Body& b);

// (n-1)-volume of conv(pts) for 2 <= n <= d+1 points in R^d, via a modified
// Gram-Schmidt factorization of the edge vectors x_i - x_0.
double gram_volume(std::span<const Point> pts);
// det(M^T M) for the edge matrix M, exactly.
ExactRational gram_determinant(std::span<const std::vector<ExactRational>> pts);
// sqrt(det(M^T M)) / (n-1)! from exact coordinates; only the root is inexact.
double gram_volume_exact(std::span<const std::vector<ExactRational>> pts);

// n! as an arbitrary-precision integer, memoized and thread-safe.
const BigInt& factorial(unsigned n);

// Integral of x^l y^m z^n over T3: l! m! n! / (l+m+n+3)!.
ExactRational monomial_integral_T3(unsigned l, unsigned m, unsigned n);

}  // namespace rsm
