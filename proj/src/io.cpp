#include "netmorph/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "netmorph/error.hpp"
#include "netmorph/format.hpp"

namespace netmorph {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

namespace {

void append_doubles(std::string& out, std::span<const double> values) {
  const std::size_t offset = out.size();
  out.resize(offset + values.size() * sizeof(double));
  char* dst = out.data() + offset;
  for (double v : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    std::memcpy(dst, &bits, sizeof bits);
    dst += sizeof bits;
  }
}

std::vector<double> read_doubles(std::string_view bytes, std::size_t count) {
  std::vector<double> out(count);
  const char* src = bytes.data();
  for (double& v : out) {
    std::uint64_t bits;
    std::memcpy(&bits, src, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
    src += sizeof bits;
  }
  return out;
}

std::string header(const char* kind, int n) {
  return "NETMORPH1 " + std::string(kind) + " " + std::to_string(n) + "\n";
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::string encode_snapshot(const ScalarField& field) {
  std::string out = header("scalar", field.n());
  append_doubles(out, field.values());
  return out;
}

std::string encode_snapshot(const TensorField& field) {
  std::string out = header("tensor", field.n());
  for (int k = 0; k < 3; ++k) append_doubles(out, field.component(k).values());
  return out;
}

Snapshot decode_snapshot(std::string_view bytes, const std::string& source) {
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos || eol > 64) {
    throw FormatError(source + ": missing snapshot header");
  }
  std::istringstream head{std::string(bytes.substr(0, eol))};
  std::string magic, kind, extra;
  long long n = 0;
  if (!(head >> magic >> kind >> n) || (head >> extra) || magic != "NETMORPH1" ||
      (kind != "scalar" && kind != "tensor") || n < 1 || n > 1'000'000) {
    throw FormatError(source + ": bad snapshot header '" + std::string(bytes.substr(0, eol)) + "'");
  }
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t blocks = kind == "tensor" ? 3 : 1;
  const std::string_view payload = bytes.substr(eol + 1);
  if (payload.size() != blocks * cells * sizeof(double)) {
    throw FormatError(source + ": expected " + std::to_string(blocks * cells * sizeof(double)) +
                      " data bytes for N=" + std::to_string(n) + ", found " +
                      std::to_string(payload.size()));
  }
  const Grid grid(static_cast<int>(n));
  if (blocks == 1) return ScalarField(grid, read_doubles(payload, cells));
  const std::size_t block = cells * sizeof(double);
  return TensorField(ScalarField(grid, read_doubles(payload.substr(0, block), cells)),
                     ScalarField(grid, read_doubles(payload.substr(block, block), cells)),
                     ScalarField(grid, read_doubles(payload.substr(2 * block, block), cells)));
}

void write_snapshot(const fs::path& path, const ScalarField& field) {
  write_file_atomic(path, encode_snapshot(field));
}

void write_snapshot(const fs::path& path, const TensorField& field) {
  write_file_atomic(path, encode_snapshot(field));
}

Snapshot read_snapshot(const fs::path& path) { return decode_snapshot(read_all(path), path.string()); }

TensorField read_tensor_snapshot(const fs::path& path) {
  Snapshot s = read_snapshot(path);
  if (auto* t = std::get_if<TensorField>(&s)) return std::move(*t);
  throw FormatError(path.string() + ": expected a tensor snapshot, found a scalar one");
}

std::string field_csv(const ScalarField& field) {
  std::string out = "i,j,x,y,value\n";
  const Grid& g = field.grid();
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(g.x(i)) + ',' +
             format_double(g.y(j)) + ',' + format_double(field(i, j)) + '\n';
    }
  }
  return out;
}

std::string field_csv(const TensorField& field) {
  std::string out = "i,j,x,y,c11,c12,c22\n";
  const Grid& g = field.grid();
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(g.x(i)) + ',' +
             format_double(g.y(j)) + ',' + format_double(field.c11(i, j)) + ',' +
             format_double(field.c12(i, j)) + ',' + format_double(field.c22(i, j)) + '\n';
    }
  }
  return out;
}

std::string eigenvector_csv(const TensorField& field, int stride) {
  if (stride < 1) throw ConfigError("stride", 0, "must be >= 1");
  std::string out = "i,j,x,y,vx,vy,lambda1,lambda2\n";
  const Grid& g = field.grid();
  for (int i = 0; i < g.n(); i += stride) {
    for (int j = 0; j < g.n(); j += stride) {
      const CellEigen e = principal_eigen(field.c11(i, j), field.c12(i, j), field.c22(i, j));
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(g.x(i)) + ',' +
             format_double(g.y(j)) + ',' + format_double(e.vx) + ',' + format_double(e.vy) + ',' +
             format_double(e.lambda1) + ',' + format_double(e.lambda2) + '\n';
    }
  }
  return out;
}

std::string diagnostics_csv(std::span<const DiagnosticsRecord> records) {
  std::ostringstream os;
  write_diagnostics_csv(os, records);
  return os.str();
}

}  // namespace netmorph
