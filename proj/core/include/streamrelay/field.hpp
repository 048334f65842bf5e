#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace streamrelay {

/// One field element. Wide enough for GF(2^16); GF(2^8) values stay below 256.
using Symbol = std::uint16_t;

struct FieldConfig {
  unsigned bits = 8;                        ///< extension degree m, 8 or 16
  std::uint32_t reduction_polynomial = 0x11D;

  static FieldConfig gf256() { return {8, 0x11D}; }
  static FieldConfig gf65536() { return {16, 0x1100B}; }
  /// Smallest supported field whose size is at least `blocklength`.
  static FieldConfig for_blocklength(std::size_t blocklength);

  std::uint32_t size() const { return 1u << bits; }
  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

/// Arithmetic in GF(2^m). GF(2^8) uses log/antilog tables, GF(2^16)
/// multiplies carry-less and reduces modulo the polynomial.
class GaloisField {
 public:
  explicit GaloisField(FieldConfig cfg = FieldConfig::gf256());

  const FieldConfig& config() const { return cfg_; }
  std::uint32_t size() const { return cfg_.size(); }

  static Symbol add(Symbol a, Symbol b) { return static_cast<Symbol>(a ^ b); }
  static Symbol sub(Symbol a, Symbol b) { return add(a, b); }
  Symbol mul(Symbol a, Symbol b) const;
  /// Throws Error{ZeroInverse} for a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

 private:
  Symbol mul_carryless(Symbol a, Symbol b) const;

  FieldConfig cfg_;
  std::array<Symbol, 512> exp_{};
  std::array<Symbol, 256> log_{};
};

/// Dense row-major matrix over a field.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Symbol> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  Symbol& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Symbol at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const Symbol> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Systematic generator [I ; C]: `message_dim` identity rows followed by the
/// parity rows of C. Every square submatrix of C is invertible.
struct SystematicMdsMatrix {
  std::size_t message_dim = 0;
  Matrix parity;  ///< parity_count x message_dim Cauchy block

  std::size_t parity_count() const { return parity.rows; }
  std::size_t blocklength() const { return message_dim + parity.rows; }
  /// Row `r` of the full (message_dim + parity_count) x message_dim generator.
  std::vector<Symbol> generator_row(std::size_t r) const;
};

/// Cauchy construction C[i][j] = 1 / (x_i + y_j) with x_i = message_dim + i,
/// y_j = j. Throws FieldTooSmall if message_dim + parity_count > field size.
SystematicMdsMatrix build_mds_generator(std::size_t message_dim, std::size_t parity_count,
                                        const GaloisField& field);

struct SolveResult {
  std::size_t rank = 0;
  /// values[i] is set iff the unit vector e_i lies in the row space.
  std::vector<std::optional<Symbol>> values;

  bool all_determined() const;
};

/// Gauss-Jordan elimination. Unknowns that are not pinned down by the
/// equations are reported as unset rather than raising.
SolveResult solve_linear_system(const Matrix& rows, std::span<const Symbol> rhs,
                                const GaloisField& field);

/// Rank of a matrix (used by the MDS checks).
std::size_t matrix_rank(const Matrix& m, const GaloisField& field);

}  // namespace streamrelay
