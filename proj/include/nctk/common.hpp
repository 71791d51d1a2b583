#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace nctk {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a * (1.0 / norm(a)); }

// Base class for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Configuration problems carry the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error(field.empty() ? msg : field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Warnings go to stderr unless a sink is installed (tests capture them).
using WarnSink = std::function<void(const std::string&)>;
void set_warn_sink(WarnSink sink);
void warn(const std::string& msg);
long warning_count();

}  // namespace nctk
