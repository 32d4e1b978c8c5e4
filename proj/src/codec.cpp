#include "qra/codec.hpp"

#include <cmath>
#include <string>

#include "qra/errors.hpp"

namespace qra {
namespace {

Vector tanh_map(const Key& key, const Vector& x) {
  if (x.size() != key.nc) {
    throw DataError("codec input has length " + std::to_string(x.size()) + ", key is sized for Nc=" +
                    std::to_string(key.nc));
  }
  const int ne = key.offset_count();
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i))) throw DataError("codec input contains a non-finite value");
    out(i) = std::tanh(key.values(i) * x(i) + key.values(key.nc + i % ne));
  }
  return out;
}

}  // namespace

Key make_key(Vector values, int nc, int num_qubits) {
  if (nc < 1 || num_qubits < 1) throw ConfigError("key sizes must be positive");
  if (values.size() != nc + num_qubits + 1) {
    throw DataError("key has length " + std::to_string(values.size()) + ", expected Nc+Nq+1 = " +
                    std::to_string(nc + num_qubits + 1));
  }
  return Key{std::move(values), nc, num_qubits};
}

Key generate_key(int nc, int num_qubits, Rng& rng) {
  if (nc < 1 || num_qubits < 1) throw ConfigError("key sizes must be positive");
  Vector v(nc + num_qubits + 1);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Key{std::move(v), nc, num_qubits};
}

Vector generate_plaintext(int nc, Rng& rng) {
  if (nc < 1) throw ConfigError("plaintext length must be positive");
  Vector v(nc);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

Vector encode_f(const Key& key, const Vector& c) { return tanh_map(key, c); }

Vector decode_g(const Key& secret, const Vector& e) { return tanh_map(secret, e); }

}  // namespace qra
