#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc {

// Dense n-dimensional array, row-major. The scalar type is a template
// parameter: float for training builds, double for gradient checks and DSP.
template <class T>
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<T> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(numel_of(shape), T(0));
    }

    Tensor(std::vector<std::size_t> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != numel_of(shape))
            throw ShapeError("tensor data length " + std::to_string(data.size()) +
                             " does not match shape " + shape_str());
    }

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t d : s) n *= d;
        return n;
    }

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }

    // rank-2 accessors (rows, cols)
    T& at(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
    const T& at(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

    // rank-3 accessors (channels, length, batch)
    T& at(std::size_t c, std::size_t l, std::size_t n) {
        return data[(c * shape[1] + l) * shape[2] + n];
    }
    const T& at(std::size_t c, std::size_t l, std::size_t n) const {
        return data[(c * shape[1] + l) * shape[2] + n];
    }

    Tensor zeros_like() const { return Tensor(shape); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    bool all_finite() const {
        for (const T& v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    void fill(T v) { data.assign(data.size(), v); }

    std::string shape_str() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (i) os << ',';
            os << shape[i];
        }
        os << ')';
        return os.str();
    }

    // Reinterpret as a new shape with the same element count.
    Tensor reshaped(std::vector<std::size_t> s) const {
        if (numel_of(s) != numel())
            throw ShapeError("cannot reshape " + shape_str() + " to a shape with different size");
        Tensor out;
        out.shape = std::move(s);
        out.data = data;
        return out;
    }

    template <class U>
    Tensor<U> cast() const {
        Tensor<U> out;
        out.shape = shape;
        out.data.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

template <class T>
void check_shape(const Tensor<T>& t, const std::vector<std::size_t>& expect, const char* what) {
    if (t.shape != expect) {
        Tensor<T> e;
        e.shape = expect;
        throw ShapeError(std::string(what) + ": expected shape " + e.shape_str() + ", got " +
                         t.shape_str());
    }
}

} // namespace hsc
