#include "isac/ambiguity.hpp"

#include <cmath>

#include "fft.hpp"
#include "isac/error.hpp"
#include "isac/transforms.hpp"

namespace isac {

AmbiguitySurface ambiguity_surface(const RMat& p) {
  const int nc = int(p.rows());
  const int ns = int(p.cols());
  CMat in = p.cast<cd>();
  CMat tmp(nc, ns);
  AmbiguitySurface s{CMat(nc, ns)};
  detail::dft(in.data(), tmp.data(), {nc, 1, ns, nc, 1, 0}, -1);
  detail::dft(tmp.data(), s.chi.data(), {ns, nc, nc, 1, 1, 0}, +1);
  return s;
}

AmbiguitySurface ambiguity_surface(const FreqWaveform& x, const CVec& a) {
  return ambiguity_surface(power_grid(x, a));
}

double isl(const RMat& p) {
  const double n = double(p.size());
  return n * (p.array() - p.mean()).square().sum();
}

double isl(const FreqWaveform& x, const CVec& a) { return isl(power_grid(x, a)); }

double isl_from_surface(const AmbiguitySurface& s) {
  return s.chi.cwiseAbs2().sum() - std::norm(s.chi(0, 0));
}

double normalized_isl_db(const RMat& p) {
  const double main = p.sum();
  if (main == 0.0) throw Error(ErrorCode::degenerate_mainlobe, "chi(0,0) is zero");
  const double v = isl(p);
  if (v <= 0.0) return kDbFloor;
  return std::max(kDbFloor, 10.0 * std::log10(v / (main * main)));
}

double normalized_isl_db(const FreqWaveform& x, const CVec& a) { return normalized_isl_db(power_grid(x, a)); }

double mag_db(double magnitude, double ref) {
  if (magnitude <= 0.0) return kDbFloor;
  return std::max(kDbFloor, 20.0 * std::log10(magnitude / ref));
}

ZeroSlices zero_slices(const AmbiguitySurface& s) {
  const double ref = std::abs(s.chi(0, 0));
  if (ref == 0.0) throw Error(ErrorCode::degenerate_mainlobe, "chi(0,0) is zero");
  ZeroSlices z{RVec(s.chi.rows()), RVec(s.chi.cols())};
  for (Eigen::Index l = 0; l < s.chi.rows(); ++l) z.zero_doppler[l] = mag_db(std::abs(s.chi(l, 0)), ref);
  for (Eigen::Index v = 0; v < s.chi.cols(); ++v) z.zero_delay[v] = mag_db(std::abs(s.chi(0, v)), ref);
  return z;
}

}  // namespace isac
