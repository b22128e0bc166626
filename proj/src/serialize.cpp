#include "qcat/serialize.hpp"

#include "qcat/orders.hpp"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qcat {

nlohmann::json cx_to_json(Cx z) { return nlohmann::json::array({z.real(), z.imag()}); }

Cx cx_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw invalid_input("complex value must be [re, im]");
  return Cx(j[0].get<double>(), j[1].get<double>());
}

nlohmann::json mat_to_json(const Mat& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j < M.cols(); ++j) row.push_back(cx_to_json(M(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw invalid_input("matrix json must be a nonempty array");
  long rows = long(j.size());
  long cols = long(j[0].size());
  Mat M(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long k = 0; k < cols; ++k) M(i, k) = cx_from_json(j[std::size_t(i)][std::size_t(k)]);
  return M;
}

nlohmann::json imat_to_json(const IMat& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < A.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < A.cols; ++j) row.push_back(A.at(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

IMat imat_from_json(const nlohmann::json& j) {
  int rows = int(j.size());
  int cols = rows ? int(j[0].size()) : 0;
  IMat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k)
      A.at(i, k) = Int(j[std::size_t(i)][std::size_t(k)].get<std::string>());
  return A;
}

nlohmann::json propagator_to_json(const Propagator& P) {
  nlohmann::json j;
  j["schema"] = "qcat-propagator-v1";
  j["g"] = P.g;
  j["N"] = P.N;
  j["r"] = P.r;
  j["A"] = imat_to_json(P.A.A);
  j["intertwiner_dim"] = P.intertwiner_dim;
  j["period"] = P.period;
  j["zeta"] = cx_to_json(P.zeta);
  j["ord_2N"] = P.ord_2N;
  j["unitarity_residual"] = P.unitarity_residual;
  j["egorov_residual"] = P.egorov_generator_residual;
  j["U"] = mat_to_json(P.U);
  nlohmann::json eig = nlohmann::json::array();
  for (const EigenSpace& es : P.eigen) {
    nlohmann::json e;
    e["m"] = es.m;
    e["theta"] = cx_to_json(es.theta);
    e["basis"] = mat_to_json(es.basis);
    eig.push_back(std::move(e));
  }
  j["eigen"] = std::move(eig);
  return j;
}

Propagator propagator_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != std::string("qcat-propagator-v1"))
    throw invalid_input("unknown propagator schema");
  Propagator P;
  P.g = j.at("g").get<int>();
  P.N = j.at("N").get<long>();
  P.r = j.at("r").get<i64>();
  P.A = validate(imat_from_json(j.at("A")), P.g);
  P.intertwiner_dim = j.at("intertwiner_dim").get<int>();
  P.period = j.at("period").get<u64>();
  P.zeta = cx_from_json(j.at("zeta"));
  P.ord_2N = j.at("ord_2N").get<u64>();
  P.unitarity_residual = j.at("unitarity_residual").get<double>();
  P.egorov_generator_residual = j.at("egorov_residual").get<double>();
  P.U = mat_from_json(j.at("U"));
  P.D = P.U.rows();
  for (const auto& e : j.at("eigen")) {
    EigenSpace es;
    es.m = e.at("m").get<int>();
    es.theta = cx_from_json(e.at("theta"));
    es.basis = mat_from_json(e.at("basis"));
    P.eigen.push_back(std::move(es));
  }
  return P;
}

std::string zlib_deflate_string(const std::string& raw) {
  uLongf bound = compressBound(uLong(raw.size()));
  std::string out;
  out.resize(8 + bound);
  std::memcpy(out.data(), "QCZ1", 4);
  std::uint32_t len = std::uint32_t(raw.size());
  std::memcpy(out.data() + 4, &len, 4);
  uLongf dest_len = bound;
  int rc = compress2(reinterpret_cast<Bytef*>(out.data() + 8), &dest_len,
                     reinterpret_cast<const Bytef*>(raw.data()), uLong(raw.size()), 6);
  if (rc != Z_OK) throw resource_guard("zlib deflate failed");
  out.resize(8 + dest_len);
  return out;
}

std::string zlib_inflate_string(const std::string& packed) {
  if (packed.size() < 8 || std::memcmp(packed.data(), "QCZ1", 4) != 0)
    throw invalid_input("bad compressed header");
  std::uint32_t len = 0;
  std::memcpy(&len, packed.data() + 4, 4);
  std::string out;
  out.resize(len);
  uLongf dest_len = len;
  int rc = uncompress(reinterpret_cast<Bytef*>(out.data()), &dest_len,
                      reinterpret_cast<const Bytef*>(packed.data() + 8),
                      uLong(packed.size() - 8));
  if (rc != Z_OK || dest_len != len) throw invalid_input("bad compressed payload");
  return out;
}

void write_compressed_file(const std::string& path, const std::string& text) {
  std::string packed = zlib_deflate_string(text);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw invalid_input("cannot open for writing: " + path);
  f.write(packed.data(), std::streamsize(packed.size()));
}

std::string read_compressed_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return zlib_inflate_string(ss.str());
}

u64 tolerance_profile_hash(const Tolerances& tol) {
  const double fields[] = {tol.egorov,        tol.algebra,     tol.unitarity,
                           tol.proportional,  tol.tensor_trans, tol.tensor_prop,
                           tol.scalar_detect, tol.spectral_sum, tol.eigen_label,
                           tol.power_egorov,  tol.twisted_id,   tol.sup_rel,
                           tol.kr_slack,      tol.moment_rel};
  u64 h = 0xcbf29ce484222325ull;
  for (double d : fields) {
    u64 bits = 0;
    std::memcpy(&bits, &d, 8);
    h = (h ^ bits) * 0x100000001b3ull;
  }
  return h;
}

std::string DiskCache::path_for(const SymplecticMatrix& A, long N, i64 r,
                                const Tolerances& tol) const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "prop-%016llx-N%ld-r%lld-t%016llx.qcz",
                (unsigned long long)imat_fingerprint(A.A), N, (long long)r,
                (unsigned long long)tolerance_profile_hash(tol));
  return (std::filesystem::path(dir_) / buf).string();
}

std::optional<Propagator> DiskCache::load(const SymplecticMatrix& A, long N, i64 r,
                                          const Tolerances& tol) const {
  if (!enabled()) return std::nullopt;
  std::string path = path_for(A, N, r, tol);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    Propagator P = propagator_from_json(nlohmann::json::parse(read_compressed_file(path)));
    if (P.N != N || P.r != r || !(P.A.A == A.A)) return std::nullopt;
    if (verify_) {
      for (int i = 0; i < 2 * P.g; ++i) {
        FrequencyVector e(std::size_t(2 * P.g), 0);
        e[std::size_t(i)] = 1;
        if (egorov_residual(P, e) > tol.egorov) return std::nullopt;
      }
    }
    return P;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void DiskCache::store(const Propagator& P, const Tolerances& tol) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  write_compressed_file(path_for(P.A, P.N, P.r, tol), propagator_to_json(P).dump());
}

} // namespace qcat
