#pragma once

#include "qra/random.hpp"
#include "qra/types.hpp"

namespace qra {

/// Key of length Nc + Nq + 1: Nc multiplicative entries, then Nq + 1 cyclic offsets.
struct Key {
  Vector values;
  int nc = 0;
  int num_qubits = 0;

  int offset_count() const { return num_qubits + 1; }
};

Key make_key(Vector values, int nc, int num_qubits);
Key generate_key(int nc, int num_qubits, Rng& rng);

/// Plaintext of length Nc with entries drawn from U(-1, 1).
Vector generate_plaintext(int nc, Rng& rng);

/// out_i = tanh(k_i c_i + k_{Nc + (i mod (Nq+1))})
Vector encode_f(const Key& key, const Vector& c);
/// Same form as encode_f, with the secret key.
Vector decode_g(const Key& secret, const Vector& e);

}  // namespace qra
