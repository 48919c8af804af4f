#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace isac::detail {

namespace {

using Key = std::tuple<int, int, int, int, int, int, int>;

struct PlanCache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }

  fftw_plan get(const DftShape& s, int sign) {
    const Key key{s.n, s.stride, s.count0, s.dist0, s.count1, s.dist1, sign};
    std::lock_guard lock(mu);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    const std::size_t span = std::size_t(s.n - 1) * s.stride + std::size_t(s.count0 - 1) * s.dist0 +
                             std::size_t(s.count1 - 1) * s.dist1 + 1;
    auto* a = fftw_alloc_complex(span);
    auto* b = fftw_alloc_complex(span);
    fftw_iodim dim{s.n, s.stride, s.stride};
    fftw_iodim loops[2] = {{s.count0, s.dist0, s.dist0}, {s.count1, s.dist1, s.dist1}};
    fftw_plan p = fftw_plan_guru_dft(1, &dim, 2, loops, a, b, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft(const cd* in, cd* out, const DftShape& shape, int sign) {
  fftw_plan p = cache().get(shape, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace isac::detail
