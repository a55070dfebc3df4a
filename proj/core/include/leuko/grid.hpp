#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace leuko {

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel& l, const Pixel& r) {
    if (auto c = l.y <=> r.y; c != 0) return c;
    return l.x <=> r.x;
  }
};

/// Dense row-major 2-D container. Every image type in the library is a Grid
/// of some pixel type; dimensions are fixed at construction.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                                  std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw std::invalid_argument("grid data size does not match width x height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool contains(Pixel p) const noexcept { return contains(p.x, p.y); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& operator[](Pixel p) noexcept { return data_[index(p.x, p.y)]; }
  const T& operator[](Pixel p) const noexcept { return data_[index(p.x, p.y)]; }

  /// Edge-replicate access.
  const T& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RasterImage = Grid<Rgb>;
using GrayImage = Grid<std::uint8_t>;
using RealImage = Grid<double>;

/// Boolean segmentation mask; bits are stored as 0/1 bytes.
class BinaryMask : public Grid<std::uint8_t> {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false) : Grid<std::uint8_t>(width, height, fill ? 1 : 0) {}

  bool test(int x, int y) const noexcept { return (*this)(x, y) != 0; }
  bool test(Pixel p) const noexcept { return (*this)[p] != 0; }
  /// Out-of-bounds reads as false.
  bool test_safe(int x, int y) const noexcept { return contains(x, y) && test(x, y); }
  void set(int x, int y, bool on = true) noexcept { (*this)(x, y) = on ? 1 : 0; }
  void set(Pixel p, bool on = true) noexcept { (*this)[p] = on ? 1 : 0; }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : data()) n += v != 0;
    return n;
  }
};

BinaryMask operator|(const BinaryMask& l, const BinaryMask& r);
BinaryMask operator&(const BinaryMask& l, const BinaryMask& r);

}  // namespace leuko
