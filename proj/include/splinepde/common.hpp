#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace splinepde {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Error hierarchy. Each condition named in a module contract gets its own type
// so callers can catch precisely.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateTriangle : Error {
  explicit DegenerateTriangle(const std::string& msg) : Error(msg) {}
};
struct NonManifoldEdge : Error {
  explicit NonManifoldEdge(const std::string& msg) : Error(msg) {}
};
struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};
struct PointOutsideDomain : Error {
  explicit PointOutsideDomain(const std::string& msg) : Error(msg) {}
};
struct DegreeTooLow : Error {
  explicit DegreeTooLow(const std::string& msg) : Error(msg) {}
};
struct TriangleMismatch : Error {
  explicit TriangleMismatch(const std::string& msg) : Error(msg) {}
};
struct UnsupportedOrder : Error {
  explicit UnsupportedOrder(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct SingularSystem : Error {
  explicit SingularSystem(const std::string& msg) : Error(msg) {}
};
struct SingularLocalMass : Error {
  explicit SingularLocalMass(const std::string& msg) : Error(msg) {}
};
struct NoExactSolution : Error {
  explicit NoExactSolution(const std::string& msg) : Error(msg) {}
};
struct UnknownProblem : Error {
  explicit UnknownProblem(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace splinepde
