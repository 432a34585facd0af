#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "gwnn/matrix.hpp"

namespace gwnn {

// Which heat-kernel sign goes where.
//   kHeatInverse: psi_inv = exp(-sL) (the localized heat kernel), psi = exp(+sL).
//   kHeatForward: the two are swapped (--swap-kernel).
enum class KernelConvention : std::int32_t {
  kHeatInverse = 0,
  kHeatForward = 1,
};

enum class BasisMethod : std::int32_t {
  kExact = 0,
  kChebyshev = 1,
};

// Kernel sign applied to psi_inv under `c` (-1 for exp(-sL)); psi uses the opposite sign.
inline int inverse_sign(KernelConvention c) { return c == KernelConvention::kHeatInverse ? -1 : 1; }

std::string to_string(KernelConvention c);
std::string to_string(BasisMethod m);

// A matched wavelet pair (psi_s, psi_s^{-1}) after thresholding at t.
struct SpectralBasis {
  SparseMatrix psi;
  SparseMatrix psi_inv;
  double scale = 0.0;
  double threshold = 0.0;
  BasisMethod method = BasisMethod::kExact;
  // Chebyshev truncation order; 0 for the exact method.
  std::size_t order = 0;
  double lambda_max = 2.0;
  KernelConvention convention = KernelConvention::kHeatInverse;

  std::size_t size() const { return psi.rows(); }
  // e.g. "chebyshev(30)" or "exact".
  std::string method_tag() const;
};

// Binary basis cache, see docs/formats.md. Little-endian, versioned.
inline constexpr std::uint32_t kBasisFormatVersion = 1;

void write_basis(const SpectralBasis& basis, std::ostream& out);
SpectralBasis read_basis(std::istream& in, const std::string& source_name = "<stream>");
void save_basis(const SpectralBasis& basis, const std::filesystem::path& path);
SpectralBasis load_basis(const std::filesystem::path& path);

}  // namespace gwnn
