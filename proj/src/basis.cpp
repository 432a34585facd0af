#include "gwnn/basis.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "gwnn/errors.hpp"

namespace gwnn {

static_assert(std::endian::native == std::endian::little,
              "basis cache I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'W', 'N', 'N', 'B', 'A', 'S', 'S'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& src) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw DataError(src + ": truncated basis cache");
  }
  return v;
}

void put_csr(std::ostream& out, const SparseMatrix& m) {
  put<std::uint64_t>(out, m.rows());
  put<std::uint64_t>(out, m.cols());
  put<std::uint64_t>(out, m.nnz());
  for (std::size_t p : m.row_ptr()) put<std::uint64_t>(out, p);
  for (std::size_t c : m.col_idx()) put<std::uint64_t>(out, c);
  out.write(reinterpret_cast<const char*>(m.values().data()),
            static_cast<std::streamsize>(m.nnz() * sizeof(double)));
}

SparseMatrix get_csr(std::istream& in, const std::string& src) {
  const auto rows = get<std::uint64_t>(in, src);
  const auto cols = get<std::uint64_t>(in, src);
  const auto nnz = get<std::uint64_t>(in, src);
  std::vector<std::size_t> ptr(rows + 1), idx(nnz);
  std::vector<double> vals(nnz);
  for (auto& p : ptr) p = get<std::uint64_t>(in, src);
  for (auto& c : idx) c = get<std::uint64_t>(in, src);
  if (!in.read(reinterpret_cast<char*>(vals.data()),
               static_cast<std::streamsize>(nnz * sizeof(double)))) {
    throw DataError(src + ": truncated basis cache");
  }
  try {
    return SparseMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(vals));
  } catch (const DimensionError& e) {
    throw DataError(src + ": corrupt CSR block: " + e.what());
  }
}

}  // namespace

std::string to_string(KernelConvention c) {
  return c == KernelConvention::kHeatInverse ? "psi_inv=exp(-sL),psi=exp(+sL)"
                                             : "psi_inv=exp(+sL),psi=exp(-sL)";
}

std::string to_string(BasisMethod m) { return m == BasisMethod::kExact ? "exact" : "chebyshev"; }

std::string SpectralBasis::method_tag() const {
  if (method == BasisMethod::kExact) return "exact";
  return "chebyshev(" + std::to_string(order) + ")";
}

void write_basis(const SpectralBasis& b, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kBasisFormatVersion);
  put<std::int32_t>(out, static_cast<std::int32_t>(b.method));
  put<std::int32_t>(out, static_cast<std::int32_t>(b.convention));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(b.order));
  put<std::uint64_t>(out, b.size());
  put<double>(out, b.scale);
  put<double>(out, b.threshold);
  put<double>(out, b.lambda_max);
  put_csr(out, b.psi);
  put_csr(out, b.psi_inv);
}

SpectralBasis read_basis(std::istream& in, const std::string& src) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError(src + ": not a basis cache (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, src);
  if (version != kBasisFormatVersion) {
    throw DataError(src + ": unsupported basis cache version " + std::to_string(version));
  }
  SpectralBasis b;
  const auto method = get<std::int32_t>(in, src);
  const auto convention = get<std::int32_t>(in, src);
  if (method < 0 || method > 1 || convention < 0 || convention > 1) {
    throw DataError(src + ": unknown method or kernel convention tag");
  }
  b.method = static_cast<BasisMethod>(method);
  b.convention = static_cast<KernelConvention>(convention);
  b.order = get<std::uint32_t>(in, src);
  const auto n = get<std::uint64_t>(in, src);
  b.scale = get<double>(in, src);
  b.threshold = get<double>(in, src);
  b.lambda_max = get<double>(in, src);
  b.psi = get_csr(in, src);
  b.psi_inv = get_csr(in, src);
  if (b.psi.rows() != n || b.psi.cols() != n || b.psi_inv.rows() != n || b.psi_inv.cols() != n) {
    throw DataError(src + ": matrix shapes disagree with header n=" + std::to_string(n));
  }
  return b;
}

void save_basis(const SpectralBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write basis cache " + path.string());
  write_basis(basis, out);
  if (!out) throw DataError("failed writing basis cache " + path.string());
}

SpectralBasis load_basis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open basis cache " + path.string());
  return read_basis(in, path.string());
}

}  // namespace gwnn
