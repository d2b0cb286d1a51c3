#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace meolb {

namespace constants {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kEarthMu = 398600.4418;           // km^3/s^2
inline constexpr double kEarthRadiusKm = 6371.0;          // spherical model
inline constexpr double kEarthRotationRate = 7.2921150e-5;  // rad/s
inline constexpr double kWgs84A = 6378.137;               // km
inline constexpr double kWgs84F = 1.0 / 298.257223563;
}  // namespace constants

inline constexpr double deg2rad(double deg) { return deg * constants::kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / constants::kPi; }

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return from_db(dbm - 30.0); }
inline double watt_to_dbm(double watt) { return to_db(watt) + 30.0; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const { return *this * (1.0 / norm()); }
};

/// Dense row-major matrix used for the per-slot K×I and K×K tables.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }
  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Raised for scenario content that cannot be simulated; carries a JSON-path prefix.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace meolb
