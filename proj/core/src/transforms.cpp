#include "isac/transforms.hpp"

#include <cmath>

#include "fft.hpp"
#include "isac/error.hpp"

namespace isac {

CVec steering(double theta_rad, int n, double spacing) {
  CVec a(n);
  const double s = std::sin(theta_rad);
  for (int i = 0; i < n; ++i) {
    const double ph = 2.0 * kPi * i * spacing * s;
    a[i] = {std::cos(ph), std::sin(ph)};
  }
  return a;
}

namespace {

detail::DftShape subcarrier_axis(const GridDims& d) {
  return {d.n_sc, d.n_tx, d.n_sym, d.n_sc * d.n_tx, d.n_tx, 1};
}

void check(const GridDims& d, const CVec& v) {
  if (v.size() != d.total()) throw Error(ErrorCode::bad_dimension, "vector length does not match grid");
}

}  // namespace

void to_time(const GridDims& d, const CVec& x, CVec& w) {
  check(d, x);
  w.resize(x.size());
  detail::dft(x.data(), w.data(), subcarrier_axis(d), +1);
  w *= 1.0 / std::sqrt(double(d.n_sc));
}

void to_freq(const GridDims& d, const CVec& w, CVec& x) {
  check(d, w);
  x.resize(w.size());
  detail::dft(w.data(), x.data(), subcarrier_axis(d), -1);
  x *= 1.0 / std::sqrt(double(d.n_sc));
}

TimeWaveform to_time(const FreqWaveform& x) {
  TimeWaveform w(x.dims);
  to_time(x.dims, x.data, w.data);
  return w;
}

FreqWaveform to_freq(const TimeWaveform& w) {
  FreqWaveform x(w.dims);
  to_freq(w.dims, w.data, x.data);
  return x;
}

CVec beamform(const GridDims& d, const CVec& s, const CVec& a) {
  check(d, s);
  if (a.size() != d.n_tx) throw Error(ErrorCode::bad_dimension, "steering length must equal n_tx");
  const auto cells = d.cells();
  CVec y(cells);
  for (Eigen::Index c = 0; c < cells; ++c) y[c] = a.dot(s.segment(c * d.n_tx, d.n_tx));
  return y;
}

CVec spread(const GridDims& d, const CVec& v, const CVec& a) {
  CVec out(d.total());
  for (Eigen::Index c = 0; c < d.cells(); ++c) out.segment(c * d.n_tx, d.n_tx) = v[c] * a;
  return out;
}

RMat power_grid(const FreqWaveform& x, const CVec& a) {
  const CVec y = beamform(x.dims, x.data, a);
  RMat p(x.dims.n_sc, x.dims.n_sym);
  for (Eigen::Index c = 0; c < y.size(); ++c) p.data()[c] = std::norm(y[c]);
  return p;
}

double illumination_power(const FreqWaveform& x, const CVec& a) {
  CVec w;
  to_time(x.dims, x.data, w);
  return beamform(x.dims, w, a).squaredNorm();
}

double illum_quadratic(const GridDims& d, const CVec& w, const CVec& a) {
  return d.n_tx * w.squaredNorm() - beamform(d, w, a).squaredNorm();
}

}  // namespace isac
