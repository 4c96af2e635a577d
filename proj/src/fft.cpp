#include "chsolver/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace chs::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int modes, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dim, modes, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<int> shape(dim, modes);
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(modes);
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    // UNALIGNED: execution goes through fftw_execute_dft on caller buffers.
    fftw_plan plan = fftw_plan_dft(dim, shape.data(), in, out, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(int dim, int modes, int sign, std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) {
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(modes);
  if (in.size() != total || out.size() != total)
    throw std::invalid_argument("fft::transform: buffer size does not match grid");
  if (in.data() == out.data())
    throw std::invalid_argument("fft::transform: in-place execution is not supported");
  fftw_plan plan = cache().get(dim, modes, sign);
  // Out-of-place complex transforms leave the input untouched.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace chs::fft
