#include "streamrelay/field.hpp"

#include <algorithm>
#include <string>

#include "streamrelay/error.hpp"

namespace streamrelay {

FieldConfig FieldConfig::for_blocklength(std::size_t blocklength) {
  if (blocklength <= 256) return gf256();
  if (blocklength <= 65536) return gf65536();
  throw Error(ErrorCode::FieldTooSmall,
              "blocklength " + std::to_string(blocklength) + " exceeds GF(2^16)");
}

GaloisField::GaloisField(FieldConfig cfg) : cfg_(cfg) {
  if (cfg_.bits != 8 && cfg_.bits != 16) {
    throw Error(ErrorCode::InvalidArgument, "field degree must be 8 or 16");
  }
  if ((cfg_.reduction_polynomial >> cfg_.bits) != 1u) {
    throw Error(ErrorCode::InvalidArgument, "reduction polynomial has wrong degree");
  }
  if (cfg_.bits == 8) {
    // 2 must be a generator of the multiplicative group for 0x11D.
    std::uint32_t x = 1;
    for (unsigned i = 0; i < 255; ++i) {
      exp_[i] = static_cast<Symbol>(x);
      log_[x] = static_cast<Symbol>(i);
      x <<= 1;
      if (x & 0x100u) x ^= cfg_.reduction_polynomial;
    }
    for (unsigned i = 255; i < exp_.size(); ++i) exp_[i] = exp_[i - 255];
  }
}

Symbol GaloisField::mul_carryless(Symbol a, Symbol b) const {
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  for (std::uint32_t y = b; y != 0; y >>= 1) {
    if (y & 1u) acc ^= x;
    x <<= 1;
    if (x >> cfg_.bits) x ^= cfg_.reduction_polynomial;
  }
  return static_cast<Symbol>(acc);
}

Symbol GaloisField::mul(Symbol a, Symbol b) const {
  if (a == 0 || b == 0) return 0;
  if (cfg_.bits == 8) return exp_[log_[a] + log_[b]];
  return mul_carryless(a, b);
}

Symbol GaloisField::inv(Symbol a) const {
  if (a == 0) throw Error(ErrorCode::ZeroInverse, "inverse of zero");
  if (cfg_.bits == 8) return exp_[255 - log_[a]];
  // a^(2^m - 2)
  Symbol result = 1;
  Symbol base = a;
  std::uint32_t e = size() - 2;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::vector<Symbol> SystematicMdsMatrix::generator_row(std::size_t r) const {
  std::vector<Symbol> out(message_dim, 0);
  if (r < message_dim) {
    out[r] = 1;
  } else {
    const auto src = parity.row(r - message_dim);
    std::copy(src.begin(), src.end(), out.begin());
  }
  return out;
}

SystematicMdsMatrix build_mds_generator(std::size_t message_dim, std::size_t parity_count,
                                        const GaloisField& field) {
  if (message_dim == 0) throw Error(ErrorCode::InvalidArgument, "message_dim must be positive");
  if (message_dim + parity_count > field.size()) {
    throw Error(ErrorCode::FieldTooSmall,
                "blocklength " + std::to_string(message_dim + parity_count) +
                    " exceeds field size " + std::to_string(field.size()));
  }
  SystematicMdsMatrix g;
  g.message_dim = message_dim;
  g.parity = Matrix(parity_count, message_dim);
  for (std::size_t i = 0; i < parity_count; ++i) {
    const auto x = static_cast<Symbol>(message_dim + i);
    for (std::size_t j = 0; j < message_dim; ++j) {
      const auto y = static_cast<Symbol>(j);
      g.parity.at(i, j) = field.inv(GaloisField::add(x, y));
    }
  }
  return g;
}

bool SolveResult::all_determined() const {
  return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

namespace {

// Reduces [A | b] to reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& a, std::vector<Symbol>& b, const GaloisField& field) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
    std::size_t sel = row;
    while (sel < a.rows && a.at(sel, col) == 0) ++sel;
    if (sel == a.rows) continue;
    if (sel != row) {
      for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(sel, c), a.at(row, c));
      if (!b.empty()) std::swap(b[sel], b[row]);
    }
    const Symbol scale = field.inv(a.at(row, col));
    for (std::size_t c = col; c < a.cols; ++c) a.at(row, c) = field.mul(a.at(row, c), scale);
    if (!b.empty()) b[row] = field.mul(b[row], scale);
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == row) continue;
      const Symbol f = a.at(r, col);
      if (f == 0) continue;
      for (std::size_t c = col; c < a.cols; ++c) {
        a.at(r, c) = GaloisField::sub(a.at(r, c), field.mul(f, a.at(row, c)));
      }
      if (!b.empty()) b[r] = GaloisField::sub(b[r], field.mul(f, b[row]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

SolveResult solve_linear_system(const Matrix& rows, std::span<const Symbol> rhs,
                                const GaloisField& field) {
  if (rhs.size() != rows.rows) {
    throw Error(ErrorCode::InvalidArgument, "rhs length does not match row count");
  }
  Matrix a = rows;
  std::vector<Symbol> b(rhs.begin(), rhs.end());
  const auto pivots = rref(a, b, field);

  SolveResult out;
  out.rank = pivots.size();
  out.values.assign(rows.cols, std::nullopt);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const std::size_t pc = pivots[r];
    bool unit = true;
    for (std::size_t c = 0; c < a.cols && unit; ++c) {
      if (c != pc && a.at(r, c) != 0) unit = false;
    }
    if (unit) out.values[pc] = b[r];
  }
  return out;
}

std::size_t matrix_rank(const Matrix& m, const GaloisField& field) {
  Matrix a = m;
  std::vector<Symbol> none;
  return rref(a, none, field).size();
}

}  // namespace streamrelay
