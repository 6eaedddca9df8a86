#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace rx {

// Dense row-major 64-bit tensor. Plain data holder; shape arithmetic is
// the owner's responsibility.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(numel(shape), 0.0);
    }

    static std::size_t numel(const std::vector<int>& shape) {
        std::size_t n = 1;
        for (int e : shape) n *= static_cast<std::size_t>(e);
        return n;
    }

    std::size_t size() const { return data.size(); }
    double* begin() { return data.data(); }
    double* end() { return data.data() + data.size(); }
    const double* begin() const { return data.data(); }
    const double* end() const { return data.data() + data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
};

}  // namespace rx
