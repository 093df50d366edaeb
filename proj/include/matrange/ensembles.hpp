#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "matrange/linalg.hpp"

namespace matrange {

// splitmix64 finalizer applied to (seed, stream); used to key every stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 keyed by derive_seed(seed, stream). Uniforms and normals are built
// from raw 64-bit words here (not std:: distributions, whose output is
// implementation-defined) so a (seed, stream) pair is reproducible everywhere.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  double uniform();       // [0, 1), 53 bits
  double uniform_open();  // (0, 1)
  double normal();        // Box-Muller, caches the second variate
  double rademacher();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class EnsembleKind { wigner, haar_unitary, ginibre };
enum class EntryDistribution { gaussian, rademacher, uniform };

const char* to_string(EnsembleKind k);
const char* to_string(EntryDistribution e);
EnsembleKind parse_ensemble_kind(const std::string& s);
EntryDistribution parse_entry_distribution(const std::string& s);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::wigner;
  int d = 1;
  int N = 1;
  EntryDistribution entries = EntryDistribution::gaussian;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // trial index; matrix k of the tuple uses sub-stream k
};

// Hermitian; diagonal base/sqrt(N), off-diagonal Re and Im base/sqrt(2N).
MatrixTuple sample_wigner(const EnsembleSpec& spec);
// Ginibre -> QR -> Q diag(R_ii / |R_ii|), sign(0) := 1.
MatrixTuple sample_haar(const EnsembleSpec& spec);
// (X1 + i X2)/sqrt(2) with X1, X2 independent GUE.
MatrixTuple sample_ginibre(const EnsembleSpec& spec);
MatrixTuple sample(const EnsembleSpec& spec);

}  // namespace matrange
