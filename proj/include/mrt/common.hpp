#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrt {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Component convention: c1 is the angular/x coordinate, c2 the radial/y
// coordinate, matching the order used by models and grids.
struct Point2 {
    double c1 = 0.0;
    double c2 = 0.0;
};

using Vec2 = Point2;

struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a21; }
};

// G = g g^T, always symmetric.
inline Mat2 gram(const Mat2& g) {
    Mat2 G;
    G.a11 = g.a11 * g.a11 + g.a12 * g.a12;
    G.a12 = g.a11 * g.a21 + g.a12 * g.a22;
    G.a21 = G.a12;
    G.a22 = g.a21 * g.a21 + g.a22 * g.a22;
    return G;
}

// Difference wrapped into (-pi, pi].
inline double principal_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

// Wrap into [0, 2pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct ModelError : Error {
    explicit ModelError(const std::string& m) : Error("model", m) {}
};
struct GridError : Error {
    explicit GridError(const std::string& m) : Error("grid", m) {}
};
struct SolveError : Error {
    explicit SolveError(const std::string& m) : Error("solve", m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

}  // namespace mrt
