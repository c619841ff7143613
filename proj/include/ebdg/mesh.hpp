#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ebdg {

/// Partition of (a,b) into n elements with affine maps to [-1,1].
/// Immutable after construction.
class Mesh1D {
  public:
    explicit Mesh1D(std::vector<double> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.size() < 2) throw std::invalid_argument("Mesh1D: need at least two vertices");
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
            if (!(vertices_[i] < vertices_[i + 1]))
                throw std::invalid_argument("Mesh1D: vertices must be strictly increasing");
    }

    int num_elements() const { return static_cast<int>(vertices_.size()) - 1; }
    double a() const { return vertices_.front(); }
    double b() const { return vertices_.back(); }
    double vertex(int i) const { return vertices_[i]; }

    double left(int j) const { return vertices_[j]; }
    double right(int j) const { return vertices_[j + 1]; }
    double width(int j) const { return vertices_[j + 1] - vertices_[j]; }
    double center(int j) const { return 0.5 * (vertices_[j] + vertices_[j + 1]); }

    double max_width() const {
        double h = 0.0;
        for (int j = 0; j < num_elements(); ++j) h = std::max(h, width(j));
        return h;
    }

    /// h / min_j h_j, the mesh regularity ratio (1 on uniform meshes).
    double regularity_ratio() const {
        double hmin = width(0);
        for (int j = 1; j < num_elements(); ++j) hmin = std::min(hmin, width(j));
        return max_width() / hmin;
    }

    /// Physical x in element j -> reference coordinate in [-1,1].
    double to_reference(int j, double x) const { return 2.0 * (x - left(j)) / width(j) - 1.0; }
    /// Reference xi in element j -> physical coordinate.
    double from_reference(int j, double xi) const { return left(j) + 0.5 * (xi + 1.0) * width(j); }
    /// d(xi)/dx, applied once per derivative order.
    double jacobian(int j) const { return 2.0 / width(j); }

  private:
    std::vector<double> vertices_;
};

inline Mesh1D uniform_mesh(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("uniform_mesh: element count must be >= 1");
    if (!(a < b)) throw std::invalid_argument("uniform_mesh: need a < b");
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / n;
    v[n] = b;
    return Mesh1D(std::move(v));
}

}  // namespace ebdg
