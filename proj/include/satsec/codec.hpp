#pragma once

// Wiretap codec: Toeplitz-hash privacy amplification wrapped around a binary
// linear inner code (coset encoding), plus an exhaustive leakage oracle.
//
// Bit layout. The inner code carries u = (u_msg, u_sac) with the k message
// positions first and the k' sacrifice positions after them. The hash is
// F(u) = u_msg xor T u_sac with T the k x k' Toeplitz matrix
// T[i][j] = S[i - j + k' - 1] of a (k + k' - 1)-bit seed S.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "satsec/errors.hpp"
#include "satsec/gf2.hpp"
#include "satsec/infotheory.hpp"

namespace satsec {

/// Fixed default for every seeded random stream.
inline constexpr std::uint64_t kDefaultRandomSeed = 0x5eed2024u;

struct HashSeed {
  BitVector bits;

  static std::size_t length_for(std::size_t k, std::size_t k_prime) {
    if (k == 0) throw DomainError("hash output length k must be >= 1");
    return k + k_prime - 1;
  }

  static HashSeed from_uint(std::uint64_t value, std::size_t k, std::size_t k_prime) {
    return {BitVector::from_uint(value, length_for(k, k_prime))};
  }
  static HashSeed from_hex(std::string_view hex, std::size_t k, std::size_t k_prime) {
    return {BitVector::from_hex(hex, length_for(k, k_prime))};
  }
  static HashSeed from_bits(std::string_view bits) { return {BitVector::from_bits(bits)}; }

  template <class URBG>
  static HashSeed random(std::size_t k, std::size_t k_prime, URBG& rng) {
    const std::size_t len = length_for(k, k_prime);
    std::bernoulli_distribution coin(0.5);
    HashSeed s{BitVector(len)};
    for (std::size_t i = 0; i < len; ++i)
      if (coin(rng)) s.bits.set(i, true);
    return s;
  }
};

class ToeplitzHash {
 public:
  ToeplitzHash(std::size_t k, std::size_t k_prime, HashSeed seed) : k_(k), kp_(k_prime), seed_(std::move(seed)) {
    if (seed_.bits.size() != HashSeed::length_for(k, k_prime))
      throw DomainError("hash seed must have k + k' - 1 = " + std::to_string(HashSeed::length_for(k, k_prime)) +
                        " bits, got " + std::to_string(seed_.bits.size()));
    t_ = Gf2Matrix(k_, kp_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < kp_; ++j)
        if (seed_.bits.get(i + kp_ - 1 - j)) t_.set(i, j, true);
  }

  std::size_t k() const { return k_; }
  std::size_t k_prime() const { return kp_; }
  const HashSeed& seed() const { return seed_; }
  const Gf2Matrix& toeplitz() const { return t_; }

  /// T l
  BitVector mix(const BitVector& l) const {
    if (l.size() != kp_) throw DomainError("sacrifice block must have k' bits");
    return t_ * l;
  }

  /// F(v) = v_msg xor T v_sac for v of length k + k'.
  BitVector apply(const BitVector& v) const {
    if (v.size() != k_ + kp_) throw DomainError("hash input must have k + k' bits");
    return v.slice(0, k_) ^ mix(v.slice(k_, kp_));
  }

  /// (I | T), k x (k + k').
  Gf2Matrix matrix() const { return Gf2Matrix::hconcat(Gf2Matrix::identity(k_), t_); }

 private:
  std::size_t k_;
  std::size_t kp_;
  HashSeed seed_;
  Gf2Matrix t_;
};

/// Binary linear code given by a full-rank K x N generator. Decoding is
/// bounded-distance syndrome decoding up to floor((d_min - 1) / 2) errors.
class LinearCode {
 public:
  explicit LinearCode(Gf2Matrix generator) : g_(std::move(generator)) {
    const std::size_t K = g_.rows();
    const std::size_t N = g_.cols();
    if (K == 0 || N < K) throw DomainError("generator must be K x N with 1 <= K <= N");

    // [G | I] -> [R | A] with A G = R in reduced row echelon form
    Gf2Matrix aug = Gf2Matrix::hconcat(g_, Gf2Matrix::identity(K));
    auto piv = aug.row_reduce();
    if (piv.size() != K || piv.back() >= N) throw DomainError("generator matrix is not full rank");
    pivots_ = piv;
    a_ = Gf2Matrix(K, K);
    Gf2Matrix r(K, N);
    for (std::size_t i = 0; i < K; ++i) {
      r.row(i) = aug.row(i).slice(0, N);
      a_.row(i) = aug.row(i).slice(N, K);
    }

    // one parity row per free column
    std::vector<bool> is_pivot(N, false);
    for (auto p : pivots_) is_pivot[p] = true;
    std::vector<BitVector> hrows;
    for (std::size_t f = 0; f < N; ++f) {
      if (is_pivot[f]) continue;
      BitVector h(N);
      h.set(f, true);
      for (std::size_t i = 0; i < K; ++i)
        if (r.get(i, f)) h.set(pivots_[i], true);
      hrows.push_back(std::move(h));
    }
    h_ = Gf2Matrix::from_rows(std::move(hrows), N);

    d_min_ = compute_min_distance();
    build_syndrome_table();
  }

  static LinearCode identity(std::size_t K) { return LinearCode(Gf2Matrix::identity(K)); }

  /// Systematic Hamming(7,4): G = [I_4 | P].
  static LinearCode hamming74() {
    const char* rows[] = {"1000110", "0100101", "0010011", "0001111"};
    std::vector<BitVector> g;
    for (auto r : rows) g.push_back(BitVector::from_bits(r));
    return LinearCode(Gf2Matrix::from_rows(std::move(g), 7));
  }

  /// Block-diagonal repetition of `code`.
  static LinearCode direct_sum(const LinearCode& code, std::size_t copies) {
    if (copies == 0) throw DomainError("direct sum needs at least one copy");
    const std::size_t K = code.dimension();
    const std::size_t N = code.length();
    Gf2Matrix g(K * copies, N * copies);
    for (std::size_t c = 0; c < copies; ++c)
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < N; ++j)
          if (code.generator().get(i, j)) g.set(c * K + i, c * N + j, true);
    return LinearCode(std::move(g));
  }

  /// Descriptor text: "K N" followed by K generator rows in hex (row bit j is
  /// integer bit j). Blank lines and '#' comments are ignored.
  static LinearCode parse_descriptor(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.size() < 2) throw ConfigError("code", "descriptor needs 'K N' followed by K hex rows");
    std::size_t K = 0, N = 0;
    try {
      K = std::stoul(tokens[0]);
      N = std::stoul(tokens[1]);
    } catch (const std::exception&) {
      throw ConfigError("code", "descriptor dimensions must be integers");
    }
    if (tokens.size() != 2 + K)
      throw ConfigError("code", "descriptor declares " + std::to_string(K) + " rows but has " +
                                    std::to_string(tokens.size() - 2));
    std::vector<BitVector> rows;
    try {
      for (std::size_t i = 0; i < K; ++i) rows.push_back(BitVector::from_hex(tokens[2 + i], N));
      return LinearCode(Gf2Matrix::from_rows(std::move(rows), N));
    } catch (const DomainError& e) {
      throw ConfigError("code", e.what());
    }
  }

  static LinearCode load_descriptor(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("code", "cannot open descriptor '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_descriptor(ss.str());
  }

  std::string descriptor() const {
    std::string out = std::to_string(dimension()) + " " + std::to_string(length()) + "\n";
    for (std::size_t i = 0; i < dimension(); ++i) out += g_.row(i).to_hex() + "\n";
    return out;
  }

  std::size_t dimension() const { return g_.rows(); }
  std::size_t length() const { return g_.cols(); }
  const Gf2Matrix& generator() const { return g_; }
  const Gf2Matrix& parity_check() const { return h_; }
  /// 0 when K is too large to enumerate.
  std::size_t min_distance() const { return d_min_; }
  std::size_t correction_radius() const { return radius_; }

  BitVector encode(const BitVector& u) const {
    if (u.size() != dimension()) throw DomainError("inner message must have K bits");
    return g_.left_multiply(u);
  }

  /// Inverse of encode on codewords.
  BitVector unencode(const BitVector& c) const {
    BitVector v(dimension());
    for (std::size_t i = 0; i < pivots_.size(); ++i)
      if (c.get(pivots_[i])) v.set(i, true);
    return a_.left_multiply(v);
  }

  std::optional<BitVector> decode(const BitVector& y) const {
    if (y.size() != length()) throw DomainError("received word must have N bits");
    const auto it = leaders_.find(h_ * y);
    if (it == leaders_.end()) return std::nullopt;
    return unencode(y ^ it->second);
  }

 private:
  std::size_t compute_min_distance() const {
    const std::size_t K = dimension();
    if (K > 20) return 0;
    std::size_t best = length();
    // Gray-code walk over all nonzero messages
    BitVector c(length());
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << K); ++i) {
      c ^= g_.row(static_cast<std::size_t>(std::countr_zero(i)));
      best = std::min(best, c.popcount());
    }
    return best;
  }

  void build_syndrome_table() {
    const std::size_t N = length();
    radius_ = d_min_ == 0 ? 0 : (d_min_ - 1) / 2;
    // keep the table at a manageable size
    auto patterns = [N](std::size_t t) {
      double total = 0, c = 1;
      for (std::size_t w = 0; w <= t; ++w) {
        total += c;
        c = c * static_cast<double>(N - w) / static_cast<double>(w + 1);
      }
      return total;
    };
    while (radius_ > 0 && patterns(radius_) > 1e6) --radius_;

    std::vector<std::size_t> idx;
    BitVector e(N);
    auto rec = [&](auto&& self, std::size_t start, std::size_t left) -> void {
      leaders_.emplace(h_ * e, e);
      if (left == 0) return;
      for (std::size_t i = start; i < N; ++i) {
        e.set(i, true);
        self(self, i + 1, left - 1);
        e.set(i, false);
      }
    };
    rec(rec, 0, radius_);
  }

  Gf2Matrix g_;
  Gf2Matrix a_;
  Gf2Matrix h_;
  std::vector<std::size_t> pivots_;
  std::size_t d_min_ = 0;
  std::size_t radius_ = 0;
  std::map<BitVector, BitVector> leaders_;
};

/// Coset encoder phi_e((m xor T l, l)) and decoder m = F(phi_d(y)).
class CosetCode {
 public:
  CosetCode(LinearCode inner, ToeplitzHash hash) : inner_(std::move(inner)), hash_(std::move(hash)) {
    if (inner_.dimension() != hash_.k() + hash_.k_prime())
      throw DomainError("inner code dimension " + std::to_string(inner_.dimension()) + " must equal k + k' = " +
                        std::to_string(hash_.k() + hash_.k_prime()));
  }

  const LinearCode& inner() const { return inner_; }
  const ToeplitzHash& hash() const { return hash_; }
  std::size_t k() const { return hash_.k(); }
  std::size_t k_prime() const { return hash_.k_prime(); }
  std::size_t n() const { return inner_.length(); }

  /// (m, l) -> (m xor T l, l) before the inner encoder.
  BitVector premix(const BitVector& m, const BitVector& l) const {
    if (m.size() != k()) throw DomainError("message must have k bits");
    return BitVector::concat(m ^ hash_.mix(l), l);
  }

  /// [[I, T], [0, I]] as a (k + k') square matrix acting on (m, l).
  Gf2Matrix premix_matrix() const {
    const std::size_t K = k() + k_prime();
    Gf2Matrix out(K, K);
    for (std::size_t i = 0; i < K; ++i) out.set(i, i, true);
    for (std::size_t i = 0; i < k(); ++i)
      for (std::size_t j = 0; j < k_prime(); ++j)
        if (hash_.toeplitz().get(i, j)) out.set(i, k() + j, true);
    return out;
  }

  BitVector encode(const BitVector& m, const BitVector& l) const { return inner_.encode(premix(m, l)); }

  template <class URBG>
  BitVector encode_random(const BitVector& m, URBG& rng) const {
    std::bernoulli_distribution coin(0.5);
    BitVector l(k_prime());
    for (std::size_t i = 0; i < l.size(); ++i)
      if (coin(rng)) l.set(i, true);
    return encode(m, l);
  }

  std::optional<BitVector> decode(const BitVector& y) const {
    auto u = inner_.decode(y);
    if (!u) return std::nullopt;
    return hash_.apply(*u);
  }

  /// |F^{-1}(m)| for every message m, by exhaustion over the 2^(k+k') inner messages.
  std::vector<std::size_t> preimage_sizes() const {
    const std::size_t K = k() + k_prime();
    if (K > 24) throw SizeGuardError("preimage count needs k + k' <= 24");
    std::vector<std::size_t> counts(std::size_t{1} << k(), 0);
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << K); ++u)
      ++counts[hash_.apply(BitVector::from_uint(u, K)).to_uint()];
    return counts;
  }

 private:
  LinearCode inner_;
  ToeplitzHash hash_;
};

/// Per seed, the number of message pairs (a, b) with F(a) == F(b), and the
/// number of seeds. Enumerates all 2^(k+k'-1) seeds.
struct CollisionCount {
  std::vector<std::uint64_t> collisions;  // one entry per pair
  std::uint64_t seeds = 0;

  double max_fraction() const {
    std::uint64_t worst = 0;
    for (auto c : collisions) worst = std::max(worst, c);
    return static_cast<double>(worst) / static_cast<double>(seeds);
  }
};

inline CollisionCount exhaustive_collisions(std::size_t k, std::size_t k_prime,
                                            std::span<const std::pair<BitVector, BitVector>> pairs) {
  const std::size_t len = HashSeed::length_for(k, k_prime);
  if (len > 24) throw SizeGuardError("seed enumeration needs k + k' - 1 <= 24");
  CollisionCount out;
  out.collisions.assign(pairs.size(), 0);
  out.seeds = std::uint64_t{1} << len;
  for (std::uint64_t s = 0; s < out.seeds; ++s) {
    const ToeplitzHash h(k, k_prime, HashSeed::from_uint(s, k, k_prime));
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (h.apply(pairs[p].first) == h.apply(pairs[p].second)) ++out.collisions[p];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact leakage of the coset code over a discrete memoryless channel.

struct LeakageResult {
  double mi_bits = 0.0;          // I(M; Z^n)
  double divergence_bits = 0.0;  // sum_m p(m) D(P_{Z|M=m} || Q_Z), Q_Z from uniform inner input
};

struct SeedAveragedLeakage {
  double mi_bits = 0.0;
  double divergence_bits = 0.0;
  double mi_stderr = 0.0;  // 0 when exhaustive
  double divergence_stderr = 0.0;
  std::uint64_t seeds = 0;
  bool exhaustive = true;
};

inline constexpr double kLeakageTermLimit = 16777216.0;  // 2^24
inline constexpr std::size_t kExhaustiveSeedBits = 16;
inline constexpr std::uint64_t kMinSampledSeeds = 10000;

class LeakageOracle {
 public:
  LeakageOracle(LinearCode inner, std::size_t k, std::size_t k_prime, DiscreteChannel ch,
                std::vector<double> message_dist = {})
      : inner_(std::move(inner)), k_(k), kp_(k_prime), ch_(std::move(ch)), pm_(std::move(message_dist)) {
    HashSeed::length_for(k_, kp_);
    if (inner_.dimension() != k_ + kp_) throw DomainError("inner code dimension must equal k + k'");
    if (ch_.inputs() != 2) throw DomainError("leakage oracle needs a binary-input channel");
    const std::size_t K = k_ + kp_;
    n_ = inner_.length();
    const double terms = std::ldexp(std::pow(static_cast<double>(ch_.outputs()), static_cast<double>(n_)),
                                    static_cast<int>(K));
    if (!(terms <= kLeakageTermLimit))
      throw SizeGuardError("leakage enumeration needs 2^(k+k') |Z|^n <= 2^24 terms");
    if (pm_.empty()) pm_ = uniform_distribution(std::size_t{1} << k_);
    detail::check_distribution(pm_, std::size_t{1} << k_);

    zs_ = 1;
    for (std::size_t i = 0; i < n_; ++i) zs_ *= ch_.outputs();

    // W^n(z | c(u)) for every inner message u
    like_.assign((std::size_t{1} << K) * zs_, 0.0);
    q_.assign(zs_, 0.0);
    const double uw = std::ldexp(1.0, -static_cast<int>(K));
    for (std::size_t u = 0; u < (std::size_t{1} << K); ++u) {
      const BitVector c = inner_.encode(BitVector::from_uint(u, K));
      double* row = &like_[u * zs_];
      row[0] = 1.0;
      std::size_t filled = 1;
      // expand symbol by symbol; z index digit i (base |Z|) is z_i
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t x = c.get(i) ? 1 : 0;
        for (std::size_t zi = ch_.outputs(); zi-- > 0;)
          for (std::size_t j = 0; j < filled; ++j) row[zi * filled + j] = row[j] * ch_(x, zi);
        filled *= ch_.outputs();
      }
      for (std::size_t z = 0; z < zs_; ++z) q_[z] += uw * row[z];
    }
  }

  std::size_t k() const { return k_; }
  std::size_t k_prime() const { return kp_; }
  std::size_t n() const { return n_; }
  std::size_t seed_bits() const { return k_ + kp_ - 1; }

  LeakageResult for_seed(const HashSeed& seed) const {
    const ToeplitzHash h(k_, kp_, seed);
    const std::size_t M = std::size_t{1} << k_;
    const std::size_t L = std::size_t{1} << kp_;
    std::vector<std::uint64_t> tl(L);
    for (std::size_t l = 0; l < L; ++l) tl[l] = h.mix(BitVector::from_uint(l, kp_)).to_uint();

    const double lw = std::ldexp(1.0, -static_cast<int>(kp_));
    std::vector<double> pzm(M * zs_, 0.0);
    std::vector<double> pz(zs_, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      double* out = &pzm[m * zs_];
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t u = (m ^ tl[l]) | (l << k_);
        const double* row = &like_[u * zs_];
        for (std::size_t z = 0; z < zs_; ++z) out[z] += row[z];
      }
      for (std::size_t z = 0; z < zs_; ++z) {
        out[z] *= lw;
        pz[z] += pm_[m] * out[z];
      }
    }

    LeakageResult r;
    for (std::size_t m = 0; m < M; ++m) {
      if (pm_[m] == 0.0) continue;
      const double* p = &pzm[m * zs_];
      double mi = 0.0, dv = 0.0;
      for (std::size_t z = 0; z < zs_; ++z) {
        if (p[z] <= 0.0) continue;
        mi += p[z] * std::log2(p[z] / pz[z]);
        dv += p[z] * std::log2(p[z] / q_[z]);
      }
      r.mi_bits += pm_[m] * mi;
      r.divergence_bits += pm_[m] * dv;
    }
    r.mi_bits = std::max(r.mi_bits, 0.0);
    r.divergence_bits = std::max(r.divergence_bits, 0.0);
    return r;
  }

  /// Hash average over uniform seeds: exhaustive up to 16 seed bits, else
  /// `samples` (>= 10^4) seeds drawn from rng with standard errors.
  template <class URBG>
  SeedAveragedLeakage seed_average(URBG& rng, std::uint64_t samples = kMinSampledSeeds) const {
    SeedAveragedLeakage out;
    double s1 = 0, s2 = 0, d1 = 0, d2 = 0;
    auto add = [&](const LeakageResult& r) {
      s1 += r.mi_bits;
      s2 += r.mi_bits * r.mi_bits;
      d1 += r.divergence_bits;
      d2 += r.divergence_bits * r.divergence_bits;
    };
    if (seed_bits() <= kExhaustiveSeedBits) {
      out.seeds = std::uint64_t{1} << seed_bits();
      for (std::uint64_t s = 0; s < out.seeds; ++s) add(for_seed(HashSeed::from_uint(s, k_, kp_)));
    } else {
      out.exhaustive = false;
      out.seeds = std::max(samples, kMinSampledSeeds);
      for (std::uint64_t i = 0; i < out.seeds; ++i) add(for_seed(HashSeed::random(k_, kp_, rng)));
    }
    const double n = static_cast<double>(out.seeds);
    out.mi_bits = s1 / n;
    out.divergence_bits = d1 / n;
    if (!out.exhaustive) {
      out.mi_stderr = std::sqrt(std::max(0.0, s2 / n - out.mi_bits * out.mi_bits) / (n - 1));
      out.divergence_stderr = std::sqrt(std::max(0.0, d2 / n - out.divergence_bits * out.divergence_bits) / (n - 1));
    }
    return out;
  }

  SeedAveragedLeakage seed_average() const {
    std::mt19937_64 rng(kDefaultRandomSeed);
    return seed_average(rng);
  }

 private:
  LinearCode inner_;
  std::size_t k_;
  std::size_t kp_;
  DiscreteChannel ch_;
  std::vector<double> pm_;
  std::size_t n_ = 0;
  std::size_t zs_ = 1;
  std::vector<double> like_;
  std::vector<double> q_;
};

}  // namespace satsec
