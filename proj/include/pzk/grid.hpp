#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace pzk {

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

/// Dense row-major rectangular grid.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width), data_(static_cast<std::size_t>(height * width), fill) {}

  int height() const { return height_; }
  int width() const { return width_; }
  bool contains(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_; }

  T& operator[](Cell c) { return data_[index(c)]; }
  const T& operator[](Cell c) const { return data_[index(c)]; }
  T& at(int r, int c) { return data_[index({r, c})]; }
  const T& at(int r, int c) const { return data_[index({r, c})]; }

  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row * width_ + c.col); }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

/// Rule broken by a candidate solution, with the place it was detected.
struct Violation {
  std::string rule;
  std::string location;

  friend bool operator==(const Violation&, const Violation&) = default;
};

}  // namespace pzk
