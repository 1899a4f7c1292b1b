#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <variant>

#include "netmorph/diagnostics.hpp"
#include "netmorph/grid.hpp"

namespace netmorph {

/// Writes `content` to a temporary sibling of `path` and renames it into
/// place, so readers never see a half-written file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Snapshot files: the line `NETMORPH1 <scalar|tensor> <N>` followed by
/// N*N (scalar) or 3*N*N (tensor: c11, c12, c22 blocks) little-endian
/// doubles in row-major order.
std::string encode_snapshot(const ScalarField& field);
std::string encode_snapshot(const TensorField& field);

using Snapshot = std::variant<ScalarField, TensorField>;

/// Throws FormatError naming `source` on a bad header or a size mismatch.
Snapshot decode_snapshot(std::string_view bytes, const std::string& source);

void write_snapshot(const std::filesystem::path& path, const ScalarField& field);
void write_snapshot(const std::filesystem::path& path, const TensorField& field);
Snapshot read_snapshot(const std::filesystem::path& path);
TensorField read_tensor_snapshot(const std::filesystem::path& path);

/// `i,j,x,y,value` and `i,j,x,y,c11,c12,c22`, one row per cell.
std::string field_csv(const ScalarField& field);
std::string field_csv(const TensorField& field);

/// `i,j,x,y,vx,vy,lambda1,lambda2` for every `stride`-th cell in each axis.
std::string eigenvector_csv(const TensorField& field, int stride);

std::string diagnostics_csv(std::span<const DiagnosticsRecord> records);

}  // namespace netmorph
