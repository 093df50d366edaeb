#include "matrange/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "matrange/error.hpp"

namespace matrange {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_spec(const EnsembleSpec& s, EnsembleKind want) {
  require(s.kind == want, ErrorKind::precondition, "ensemble kind does not match the sampler");
  require(s.d >= 1 && s.N >= 1, ErrorKind::precondition, "ensemble needs d >= 1 and N >= 1");
}

double draw(RngStream& rng, EntryDistribution e) {
  switch (e) {
    case EntryDistribution::gaussian: return rng.normal();
    case EntryDistribution::rademacher: return rng.rademacher();
    case EntryDistribution::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
  }
  fail(ErrorKind::precondition, "unknown entry distribution");
}

CMat wigner_matrix(RngStream& rng, int N, EntryDistribution e) {
  CMat X(N, N);
  const double sd = 1.0 / std::sqrt(static_cast<double>(N));
  const double so = 1.0 / std::sqrt(2.0 * N);
  for (int i = 0; i < N; ++i) {
    X(i, i) = draw(rng, e) * sd;
    for (int j = i + 1; j < N; ++j) {
      const double re = draw(rng, e) * so;
      const double im = draw(rng, e) * so;
      X(i, j) = cplx(re, im);
      X(j, i) = cplx(re, -im);
    }
  }
  return X;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double RngStream::rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::wigner: return "wigner";
    case EnsembleKind::haar_unitary: return "haar";
    case EnsembleKind::ginibre: return "ginibre";
  }
  return "?";
}

const char* to_string(EntryDistribution e) {
  switch (e) {
    case EntryDistribution::gaussian: return "gaussian";
    case EntryDistribution::rademacher: return "rademacher";
    case EntryDistribution::uniform: return "uniform";
  }
  return "?";
}

EnsembleKind parse_ensemble_kind(const std::string& s) {
  if (s == "wigner" || s == "gue") return EnsembleKind::wigner;
  if (s == "haar" || s == "haar-unitary") return EnsembleKind::haar_unitary;
  if (s == "ginibre") return EnsembleKind::ginibre;
  fail(ErrorKind::precondition, "unknown ensemble kind: " + s);
}

EntryDistribution parse_entry_distribution(const std::string& s) {
  if (s == "gaussian") return EntryDistribution::gaussian;
  if (s == "rademacher") return EntryDistribution::rademacher;
  if (s == "uniform") return EntryDistribution::uniform;
  fail(ErrorKind::precondition, "unknown entry distribution: " + s);
}

MatrixTuple sample_wigner(const EnsembleSpec& spec) {
  check_spec(spec, EnsembleKind::wigner);
  const std::uint64_t base = derive_seed(spec.seed, spec.stream);
  std::vector<CMat> mats;
  for (int k = 0; k < spec.d; ++k) {
    RngStream rng(base, static_cast<std::uint64_t>(k));
    mats.push_back(wigner_matrix(rng, spec.N, spec.entries));
  }
  return MatrixTuple{std::move(mats), true};
}

MatrixTuple sample_haar(const EnsembleSpec& spec) {
  check_spec(spec, EnsembleKind::haar_unitary);
  const std::uint64_t base = derive_seed(spec.seed, spec.stream);
  const int N = spec.N;
  std::vector<CMat> mats;
  for (int k = 0; k < spec.d; ++k) {
    RngStream rng(base, static_cast<std::uint64_t>(k));
    CMat G(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const double re = rng.normal(), im = rng.normal();
        G(i, j) = cplx(re, im) * std::sqrt(0.5);
      }
    Eigen::HouseholderQR<CMat> qr(G);
    CMat Q = qr.householderQ();
    const CMat& R = qr.matrixQR();
    for (int j = 0; j < N; ++j) {
      const double a = std::abs(R(j, j));
      const cplx phase = a > 0.0 ? R(j, j) / a : cplx(1.0, 0.0);
      Q.col(j) *= phase;
    }
    mats.push_back(std::move(Q));
  }
  return MatrixTuple{std::move(mats), false};
}

MatrixTuple sample_ginibre(const EnsembleSpec& spec) {
  check_spec(spec, EnsembleKind::ginibre);
  const std::uint64_t base = derive_seed(spec.seed, spec.stream);
  std::vector<CMat> mats;
  for (int k = 0; k < spec.d; ++k) {
    RngStream r1(base, 2 * static_cast<std::uint64_t>(k));
    RngStream r2(base, 2 * static_cast<std::uint64_t>(k) + 1);
    const CMat X1 = wigner_matrix(r1, spec.N, EntryDistribution::gaussian);
    const CMat X2 = wigner_matrix(r2, spec.N, EntryDistribution::gaussian);
    mats.push_back((X1 + cplx(0, 1) * X2) / std::sqrt(2.0));
  }
  return MatrixTuple{std::move(mats), false};
}

MatrixTuple sample(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::wigner: return sample_wigner(spec);
    case EnsembleKind::haar_unitary: return sample_haar(spec);
    case EnsembleKind::ginibre: return sample_ginibre(spec);
  }
  fail(ErrorKind::precondition, "unknown ensemble kind");
}

}  // namespace matrange
