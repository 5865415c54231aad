#pragma once

// Word-packed GF(2) linear algebra: rank, kernel/image bases, membership and
// affine solves. Columns are bit vectors; all routines run in-place Gaussian
// elimination over machine words.

#include <cstdint>
#include <optional>
#include <vector>

namespace ups {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t bits) : bits_(bits), w_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    if (v) w_[i >> 6] |= (std::uint64_t{1} << (i & 63));
    else w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void flip(std::size_t i) { w_[i >> 6] ^= (std::uint64_t{1} << (i & 63)); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  bool any() const {
    for (auto w : w_) if (w) return true;
    return false;
  }
  // Index of the lowest set bit, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t lowest() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return (i << 6) + static_cast<std::size_t>(__builtin_ctzll(w_[i]));
    return npos;
  }
  friend bool operator==(const BitVec& a, const BitVec& b) { return a.w_ == b.w_; }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> w_;
};

// Reduced basis maintained by pivot position; supports span membership and
// incremental insertion.
class Gf2Basis {
 public:
  // Reduce v against the basis; returns the residue.
  BitVec reduce(BitVec v) const {
    for (const auto& b : rows_) {
      std::size_t p = b.lowest();
      if (p != BitVec::npos && v.size() > p && v.get(p)) v ^= b;
    }
    return v;
  }
  bool contains(const BitVec& v) const { return !reduce(v).any(); }
  // Insert v if independent; returns true if the rank grew.
  bool insert(BitVec v) {
    v = reduce(std::move(v));
    if (!v.any()) return false;
    rows_.push_back(std::move(v));
    return true;
  }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<BitVec>& rows() const { return rows_; }

 private:
  std::vector<BitVec> rows_;
};

inline std::size_t gf2_rank(std::vector<BitVec> cols) {
  Gf2Basis b;
  for (auto& c : cols) b.insert(std::move(c));
  return b.rank();
}

// Kernel basis of the linear map sending unit vector e_i to cols[i]:
// vectors of coefficient masks (length = cols.size()) spanning {x : A x = 0}.
inline std::vector<BitVec> gf2_kernel(const std::vector<BitVec>& cols,
                                      std::size_t out_dim) {
  std::size_t n = cols.size();
  // Augment each column with its coefficient identity row tail.
  std::vector<BitVec> work(n, BitVec(out_dim + n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < out_dim; ++j)
      if (cols[i].size() > j && cols[i].get(j)) work[i].set(j);
    work[i].set(out_dim + i);
  }
  std::vector<BitVec> reduced;  // rows with pivot < out_dim
  std::vector<BitVec> kernel;
  for (auto& v : work) {
    for (const auto& b : reduced) {
      std::size_t p = b.lowest();
      if (p < out_dim && v.get(p)) v ^= b;
    }
    std::size_t p = v.lowest();
    if (p != BitVec::npos && p < out_dim) {
      reduced.push_back(std::move(v));
    } else {
      BitVec coeff(n);
      for (std::size_t i = 0; i < n; ++i)
        if (v.get(out_dim + i)) coeff.set(i);
      kernel.push_back(std::move(coeff));
    }
  }
  return kernel;
}

// Solve A x = target where column i of A is cols[i]; returns a coefficient
// mask over the columns, or nullopt when the target is outside the image.
inline std::optional<BitVec> gf2_solve(const std::vector<BitVec>& cols,
                                       std::size_t out_dim, const BitVec& target) {
  std::size_t n = cols.size();
  std::vector<BitVec> work;
  work.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitVec v(out_dim + n);
    for (std::size_t j = 0; j < out_dim; ++j)
      if (cols[i].size() > j && cols[i].get(j)) v.set(j);
    v.set(out_dim + i);
    work.push_back(std::move(v));
  }
  std::vector<BitVec> reduced;
  for (auto& v : work) {
    for (const auto& b : reduced) {
      std::size_t p = b.lowest();
      if (p < out_dim && v.get(p)) v ^= b;
    }
    if (v.lowest() < out_dim) reduced.push_back(std::move(v));
  }
  BitVec t(out_dim + n);
  for (std::size_t j = 0; j < out_dim; ++j)
    if (target.size() > j && target.get(j)) t.set(j);
  for (const auto& b : reduced) {
    std::size_t p = b.lowest();
    if (p < out_dim && t.get(p)) t ^= b;
  }
  for (std::size_t j = 0; j < out_dim; ++j)
    if (t.get(j)) return std::nullopt;
  BitVec coeff(n);
  for (std::size_t i = 0; i < n; ++i)
    if (t.get(out_dim + i)) coeff.set(i);
  return coeff;
}

}  // namespace ups
