#include "besovq/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace besovq::fft {
namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, int size, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(dim, size, sign);
        if (auto it = plans.find(key); it != plans.end()) return it->second;
        std::size_t total = 1;
        int dims[3];
        for (int a = 0; a < dim; ++a) {
            dims[a] = size;
            total *= static_cast<std::size_t>(size);
        }
        std::vector<cplx> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw planning failed");
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(std::span<cplx> data, int dim, int size, int sign) {
    if (size == 1) return;
    fftw_plan plan = cache().get(dim, size, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(std::span<cplx> data, int dim, int size) { run(data, dim, size, FFTW_FORWARD); }
void backward(std::span<cplx> data, int dim, int size) { run(data, dim, size, FFTW_BACKWARD); }

}  // namespace besovq::fft
