#pragma once

// JSON serialization (complex numbers as [re, im] pairs) and the compressed
// propagator disk cache.
//
// Propagator schema ("qcat-propagator-v1"):
//   { schema, g, N, r, A: [[entry strings]], intertwiner_dim, period,
//     zeta: [re, im], ord_2N, unitarity_residual, egorov_residual,
//     U: [[[re, im], ...] per row],
//     eigen: [{m, theta: [re, im], basis: rows}] }
// Files on disk are zlib-deflated with an 8-byte "QCZ1" + length header.

#include "qcat/common.hpp"
#include "qcat/propagator.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace qcat {

nlohmann::json cx_to_json(Cx z);
Cx cx_from_json(const nlohmann::json& j);

nlohmann::json mat_to_json(const Mat& M);
Mat mat_from_json(const nlohmann::json& j);

nlohmann::json imat_to_json(const IMat& A);
IMat imat_from_json(const nlohmann::json& j);

nlohmann::json propagator_to_json(const Propagator& P);
Propagator propagator_from_json(const nlohmann::json& j);

std::string zlib_deflate_string(const std::string& raw);
std::string zlib_inflate_string(const std::string& packed);

void write_compressed_file(const std::string& path, const std::string& text);
std::string read_compressed_file(const std::string& path);

// Hash of the tolerance profile; part of every cache key so stale artifacts
// built under other tolerances are never reused.
u64 tolerance_profile_hash(const Tolerances& tol);

class DiskCache {
 public:
  DiskCache() = default;
  explicit DiskCache(std::string dir, bool verify_on_load = true)
      : dir_(std::move(dir)), verify_(verify_on_load) {}

  bool enabled() const { return !dir_.empty(); }
  std::string path_for(const SymplecticMatrix& A, long N, i64 r, const Tolerances& tol) const;

  // Empty optional on miss or verification failure (a corrupt entry is
  // treated as a miss, never an error).
  std::optional<Propagator> load(const SymplecticMatrix& A, long N, i64 r,
                                 const Tolerances& tol) const;
  void store(const Propagator& P, const Tolerances& tol) const;

 private:
  std::string dir_;
  bool verify_ = true;
};

} // namespace qcat
