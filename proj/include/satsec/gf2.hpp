#pragma once

// Word-packed vectors and matrices over GF(2).

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "satsec/errors.hpp"

namespace satsec {

/// Fixed-length bit vector; bit i lives in word i / 64 at position i % 64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  /// Low `n` bits of `value`, bit i = (value >> i) & 1.
  static BitVector from_uint(std::uint64_t value, std::size_t n) {
    if (n < 64 && (value >> n) != 0) throw DomainError("value does not fit in the requested bit length");
    BitVector v(n);
    if (n > 0) v.w_[0] = value;
    return v;
  }

  /// Hex string read as a big-endian integer (optional 0x prefix); bit i of
  /// the vector is bit i of that integer.
  static BitVector from_hex(std::string_view hex, std::size_t n) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    if (hex.empty()) throw DomainError("empty hex string");
    BitVector v(n);
    std::size_t pos = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, pos += 4) {
      const int d = hex_digit(*it);
      for (int b = 0; b < 4; ++b) {
        if (!((d >> b) & 1)) continue;
        if (pos + b >= n) throw DomainError("hex value '" + std::string(hex) + "' exceeds " + std::to_string(n) + " bits");
        v.set(pos + b, true);
      }
    }
    return v;
  }

  /// String of '0'/'1' characters, first character is bit 0.
  static BitVector from_bits(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1')
        v.set(i, true);
      else if (bits[i] != '0')
        throw DomainError("bit string may only contain '0' and '1'");
    }
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool b) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (b)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w == 0; });
  }

  BitVector& operator^=(const BitVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector& a, const BitVector& b) = default;
  friend auto operator<=>(const BitVector& a, const BitVector& b) = default;

  /// <a, b> over GF(2).
  friend bool dot(const BitVector& a, const BitVector& b) {
    a.check_same(b);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
    return std::popcount(acc) & 1;
  }

  BitVector slice(std::size_t pos, std::size_t len) const {
    if (pos + len > n_) throw DomainError("bit slice out of range");
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i)
      if (get(pos + i)) out.set(i, true);
    return out;
  }

  static BitVector concat(const BitVector& a, const BitVector& b) {
    BitVector out(a.n_ + b.n_);
    out.w_ = a.w_;
    out.w_.resize((out.n_ + 63) / 64, 0);
    for (std::size_t i = 0; i < b.n_; ++i)
      if (b.get(i)) out.set(a.n_ + i, true);
    return out;
  }

  std::uint64_t to_uint() const {
    if (n_ > 64) throw DomainError("bit vector longer than 64 bits");
    return w_.empty() ? 0 : w_[0];
  }

  /// ceil(n/4) lowercase hex digits, no prefix.
  std::string to_hex() const {
    const std::size_t digits = std::max<std::size_t>(1, (n_ + 3) / 4);
    std::string s(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
      int v = 0;
      for (int b = 0; b < 4; ++b)
        if (4 * d + b < n_ && get(4 * d + b)) v |= 1 << b;
      s[digits - 1 - d] = "0123456789abcdef"[v];
    }
    return s;
  }

  std::string to_bits() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l >= 'a' && l <= 'f') return l - 'a' + 10;
    throw DomainError(std::string("invalid hex digit '") + c + "'");
  }

  void check_same(const BitVector& o) const {
    if (n_ != o.n_) throw DomainError("bit vector length mismatch");
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Dense GF(2) matrix stored as packed rows.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

  static Gf2Matrix identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static Gf2Matrix from_rows(std::vector<BitVector> rows, std::size_t cols) {
    Gf2Matrix m;
    m.cols_ = cols;
    for (const auto& r : rows)
      if (r.size() != cols) throw DomainError("matrix rows must have equal length");
    m.rows_ = std::move(rows);
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool b) { rows_[i].set(j, b); }
  const BitVector& row(std::size_t i) const { return rows_[i]; }
  BitVector& row(std::size_t i) { return rows_[i]; }

  /// M v
  BitVector operator*(const BitVector& v) const {
    if (v.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    BitVector out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (dot(rows_[i], v)) out.set(i, true);
    return out;
  }

  /// u^T M, i.e. the XOR of the rows selected by u.
  BitVector left_multiply(const BitVector& u) const {
    if (u.size() != rows_.size()) throw DomainError("vector-matrix dimension mismatch");
    BitVector out(cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (u.get(i)) out ^= rows_[i];
    return out;
  }

  friend Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols_ != b.rows()) throw DomainError("matrix-matrix dimension mismatch");
    Gf2Matrix out;
    out.cols_ = b.cols_;
    out.rows_.reserve(a.rows());
    for (const auto& r : a.rows_) out.rows_.push_back(b.left_multiply(r));
    return out;
  }

  Gf2Matrix transpose() const {
    Gf2Matrix t(cols_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i, true);
    return t;
  }

  /// [A | B] column concatenation.
  static Gf2Matrix hconcat(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.rows() != b.rows()) throw DomainError("hconcat row mismatch");
    Gf2Matrix out;
    out.cols_ = a.cols_ + b.cols_;
    for (std::size_t i = 0; i < a.rows(); ++i) out.rows_.push_back(BitVector::concat(a.rows_[i], b.rows_[i]));
    return out;
  }

  std::size_t rank() const {
    Gf2Matrix m = *this;
    return m.row_reduce().size();
  }

  /// In-place reduced row echelon form; returns the pivot columns.
  std::vector<std::size_t> row_reduce() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_.size(); ++c) {
      std::size_t p = r;
      while (p < rows_.size() && !rows_[p].get(c)) ++p;
      if (p == rows_.size()) continue;
      std::swap(rows_[r], rows_[p]);
      for (std::size_t i = 0; i < rows_.size(); ++i)
        if (i != r && rows_[i].get(c)) rows_[i] ^= rows_[r];
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  friend bool operator==(const Gf2Matrix& a, const Gf2Matrix& b) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

}  // namespace satsec
