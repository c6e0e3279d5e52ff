#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace nlslab::fft {
namespace {

struct Plan {
  int n;
  fftw_complex* buf_in;
  fftw_complex* buf_out;
  fftw_plan fwd;
  fftw_plan inv;
  explicit Plan(int n_) : n(n_) {
    buf_in = fftw_alloc_complex(n);
    buf_out = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
};

// Plans are cached per size; FFTW's planner is not reentrant, and the shared
// buffers make execution serial as well.
std::mutex g_mutex;
std::map<int, std::unique_ptr<Plan>> g_plans;

void run(const cplx* in, cplx* out, int n, bool fwd) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& slot = g_plans[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  std::memcpy(slot->buf_in, in, sizeof(cplx) * n);
  fftw_execute(fwd ? slot->fwd : slot->inv);
  std::memcpy(static_cast<void*>(out), slot->buf_out, sizeof(cplx) * n);
}

}  // namespace

void forward(const cplx* in, cplx* out, int n) { run(in, out, n, true); }
void inverse(const cplx* in, cplx* out, int n) { run(in, out, n, false); }

}  // namespace nlslab::fft
