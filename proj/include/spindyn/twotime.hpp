// twotime.hpp - lower-triangular storage of two-time block functions and causal trapezoid sums
#pragma once
#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "spindyn/errors.hpp"

namespace spindyn {

struct TimeGrid {
  std::size_t n_steps = 2;
  double dt = 1.0;

  TimeGrid() = default;
  TimeGrid(std::size_t n, double h) : n_steps(n), dt(h) { validate(); }
  void validate() const {
    if (!(dt > 0.0)) throw ValidationError("TimeGrid: dt must be positive");
    if (n_steps < 2) throw ValidationError("TimeGrid: n_steps must be at least 2");
  }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

enum class Parity { symmetric, antisymmetric };

// Full keeps every (i, j <= i); EqualTime keeps only the diagonal, used when
// nothing in the equations needs off-diagonal history.
enum class Storage { full, equal_time };

// Trapezoid weight (in units of h) of node k on [a, b]; zero on an empty interval.
inline double trapezoid_weight(std::size_t k, std::size_t a, std::size_t b) {
  if (a == b || k < a || k > b) return 0.0;
  return (k == a || k == b) ? 0.5 : 1.0;
}

// h * sum_k w_k f(k) over [a, b]; f(k) returns a block (or scalar) expression
template <typename F>
auto causal_integral(F&& f, std::size_t a, std::size_t b, double h) {
  using R = std::decay_t<decltype(f(a))>;
  if constexpr (std::is_arithmetic_v<R>) {
    if (a == b) return R(0);
    R acc = 0.5 * (f(a) + f(b));
    for (std::size_t k = a + 1; k < b; ++k) acc += f(k);
    return h * acc;
  } else {
    using Plain = typename R::PlainObject;
    if (a == b) {
      Plain z = f(a);
      z.setZero();
      return z;
    }
    Plain acc = 0.5 * (f(a) + f(b));
    for (std::size_t k = a + 1; k < b; ++k) acc += f(k);
    return Plain(h * acc);
  }
}

template <typename Scalar, int Dim = Eigen::Dynamic>
class TwoTimeFunction {
 public:
  using Block = Eigen::Matrix<Scalar, Dim, Dim>;
  using BlockMap = Eigen::Map<Block>;
  using ConstBlockMap = Eigen::Map<const Block>;

  TwoTimeFunction() = default;
  TwoTimeFunction(TimeGrid grid, Parity parity, Eigen::Index dim = Dim,
                  Storage storage = Storage::full)
      : grid_(grid), parity_(parity), dim_(dim), storage_(storage) {
    if (dim_ <= 0) throw ValidationError("TwoTimeFunction: block dimension must be positive");
    data_.reserve(capacity_entries() * block_size());
  }

  const TimeGrid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  Storage storage() const { return storage_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t filled_rows() const { return rows_; }
  std::size_t block_size() const { return static_cast<std::size_t>(dim_ * dim_); }

  // bytes reserved for the full grid; Theta(N_t^2) blocks in full storage
  std::size_t allocated_bytes() const { return data_.capacity() * sizeof(Scalar); }

  // append a zero-initialized row (i = filled_rows())
  void append_row() {
    if (rows_ >= grid_.n_steps) throw OutOfExtent("append_row beyond n_steps");
    const std::size_t add = storage_ == Storage::full ? rows_ + 1 : 1;
    data_.resize(data_.size() + add * block_size(), Scalar(0));
    ++rows_;
  }

  // drop rows above n (used when a step is rolled back)
  void truncate(std::size_t n) {
    if (n > rows_) return;
    data_.resize(entry_offset(n, 0));
    rows_ = n;
  }

  bool stored(std::size_t i, std::size_t j) const {
    return j <= i && i < rows_ && (storage_ == Storage::full || i == j);
  }

  // direct access to stored entries (j <= i)
  BlockMap at(std::size_t i, std::size_t j) {
    check_stored(i, j);
    return BlockMap(data_.data() + entry_offset(i, j), dim_, dim_);
  }
  ConstBlockMap at(std::size_t i, std::size_t j) const {
    check_stored(i, j);
    return ConstBlockMap(data_.data() + entry_offset(i, j), dim_, dim_);
  }

  // unchecked versions for inner loops
  BlockMap ref(std::size_t i, std::size_t j) {
    return BlockMap(data_.data() + entry_offset(i, j), dim_, dim_);
  }
  ConstBlockMap ref(std::size_t i, std::size_t j) const {
    return ConstBlockMap(data_.data() + entry_offset(i, j), dim_, dim_);
  }
  const Scalar* ptr(std::size_t i, std::size_t j) const { return data_.data() + entry_offset(i, j); }
  Scalar* ptr(std::size_t i, std::size_t j) { return data_.data() + entry_offset(i, j); }

  // any (i, j) inside the filled extent, reflecting by parity when j > i
  Block get(std::size_t i, std::size_t j) const {
    if (j <= i) return at(i, j);
    const Block b = at(j, i).transpose();
    return parity_ == Parity::symmetric ? b : Block(-b);
  }

  void set(std::size_t i, std::size_t j, const Block& b) {
    if (j <= i) {
      at(i, j) = b;
    } else {
      at(j, i) = parity_ == Parity::symmetric ? Block(b.transpose()) : Block(-b.transpose());
    }
  }

  // binary checkpoint: magic, version, n_steps, filled rows, dt, dim, dim,
  // parity, storage, then row-major complex doubles in triangle order;
  // little-endian throughout
  void write(std::ostream& os) const;
  static TwoTimeFunction read(std::istream& is);

 private:
  std::size_t capacity_entries() const {
    const std::size_t n = grid_.n_steps;
    return storage_ == Storage::full ? n * (n + 1) / 2 : n;
  }
  std::size_t entry_offset(std::size_t i, std::size_t j) const {
    const std::size_t e = storage_ == Storage::full ? i * (i + 1) / 2 + j : i;
    return e * block_size();
  }
  void check_stored(std::size_t i, std::size_t j) const {
    if (!stored(i, j))
      throw OutOfExtent("two-time access (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside filled extent of " + std::to_string(rows_) + " rows");
  }

  TimeGrid grid_{};
  Parity parity_ = Parity::symmetric;
  Eigen::Index dim_ = Dim == Eigen::Dynamic ? 1 : Dim;
  Storage storage_ = Storage::full;
  std::size_t rows_ = 0;
  std::vector<Scalar> data_;
};

namespace detail {
static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little-endian");
template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T take(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("checkpoint truncated");
  return v;
}
inline constexpr char kMagic[4] = {'S', 'K', 'T', 'T'};
}  // namespace detail

template <typename Scalar, int Dim>
void TwoTimeFunction<Scalar, Dim>::write(std::ostream& os) const {
  os.write(detail::kMagic, 4);
  detail::put<std::uint32_t>(os, 1);
  detail::put<std::uint64_t>(os, grid_.n_steps);
  detail::put<std::uint64_t>(os, rows_);
  detail::put<double>(os, grid_.dt);
  detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(dim_));
  detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(dim_));
  detail::put<std::uint8_t>(os, parity_ == Parity::symmetric ? 0 : 1);
  detail::put<std::uint8_t>(os, storage_ == Storage::full ? 0 : 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::size_t j0 = storage_ == Storage::full ? 0 : i;
    for (std::size_t j = j0; j <= i; ++j) {
      const auto b = ref(i, j);
      for (Eigen::Index r = 0; r < dim_; ++r)
        for (Eigen::Index c = 0; c < dim_; ++c) {
          const std::complex<double> z(b(r, c));
          detail::put<double>(os, z.real());
          detail::put<double>(os, z.imag());
        }
    }
  }
  if (!os) throw IoError("checkpoint write failed");
}

template <typename Scalar, int Dim>
TwoTimeFunction<Scalar, Dim> TwoTimeFunction<Scalar, Dim>::read(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, detail::kMagic, 4) != 0) throw IoError("not a two-time checkpoint");
  if (detail::take<std::uint32_t>(is) != 1) throw IoError("unsupported checkpoint version");
  const auto n = detail::take<std::uint64_t>(is);
  const auto rows = detail::take<std::uint64_t>(is);
  const auto dt = detail::take<double>(is);
  const auto d0 = detail::take<std::uint64_t>(is);
  const auto d1 = detail::take<std::uint64_t>(is);
  const auto par = detail::take<std::uint8_t>(is);
  const auto sto = detail::take<std::uint8_t>(is);
  if (d0 != d1 || (Dim != Eigen::Dynamic && d0 != static_cast<std::uint64_t>(Dim)))
    throw IoError("checkpoint block shape mismatch");
  TwoTimeFunction f(TimeGrid(n, dt), par == 0 ? Parity::symmetric : Parity::antisymmetric,
                    static_cast<Eigen::Index>(d0), sto == 0 ? Storage::full : Storage::equal_time);
  for (std::size_t i = 0; i < rows; ++i) {
    f.append_row();
    const std::size_t j0 = f.storage_ == Storage::full ? 0 : i;
    for (std::size_t j = j0; j <= i; ++j) {
      auto b = f.ref(i, j);
      for (Eigen::Index r = 0; r < f.dim_; ++r)
        for (Eigen::Index c = 0; c < f.dim_; ++c) {
          const double re = detail::take<double>(is);
          const double im = detail::take<double>(is);
          if constexpr (std::is_floating_point_v<Scalar>) {
            if (im != 0.0) throw IoError("complex checkpoint read into a real function");
            b(r, c) = re;
          } else {
            b(r, c) = Scalar(re, im);
          }
        }
    }
  }
  return f;
}

}  // namespace spindyn
