#include "cpdd/operators.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace cpdd {

std::vector<double> interp_weights_1d(int p, double t) {
    if (p < 0 || p > 6) {
        throw Error(ErrorCode::invalid_config, "interp_weights_1d supports degrees 0..6");
    }
    std::vector<double> weights(p + 1, 0.0);
    // Exact node hits short-circuit to a unit vector.
    for (int j = 0; j <= p; ++j) {
        if (t == static_cast<double>(j)) {
            weights[j] = 1.0;
            return weights;
        }
    }
    static constexpr std::array<std::array<double, 7>, 7> kBinom{{
        {1, 0, 0, 0, 0, 0, 0},
        {1, 1, 0, 0, 0, 0, 0},
        {1, 2, 1, 0, 0, 0, 0},
        {1, 3, 3, 1, 0, 0, 0},
        {1, 4, 6, 4, 1, 0, 0},
        {1, 5, 10, 10, 5, 1, 0},
        {1, 6, 15, 20, 15, 6, 1},
    }};
    double denom = 0.0;
    for (int j = 0; j <= p; ++j) {
        double stage = (j % 2 == 0 ? 1.0 : -1.0) * kBinom[p][j];
        weights[j] = stage / (t - j);
        denom += weights[j];
    }
    for (double& w : weights) w /= denom;
    return weights;
}

PointStencil interpolation_stencil(const Band& band, const Vec3& point) {
    const int p = band.degree();
    const int dim = band.dim();
    const Lattice base = band.interp_stencil_base(point);

    std::array<std::vector<double>, 3> axis_weights;
    for (int axis = 0; axis < dim; ++axis) {
        double t = point[axis] / band.dx() - base[axis];
        axis_weights[axis] = interp_weights_1d(p, t);
    }

    PointStencil st;
    const int w = p + 1;
    const int kmax = dim == 3 ? w : 1;
    st.nodes.reserve(static_cast<std::size_t>(w) * w * kmax);
    st.weights.reserve(st.nodes.capacity());
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
            for (int k = 0; k < kmax; ++k) {
                Lattice c{base[0] + i, base[1] + j, base[2] + k};
                std::int32_t idx = band.find(c);
                if (idx < 0 || !band.is_active_index(idx)) {
                    std::ostringstream os;
                    os << "interpolation stencil at (" << point.x << "," << point.y << ","
                       << point.z << ") leaves the active set";
                    throw Error(ErrorCode::stencil_incomplete, os.str());
                }
                double weight = axis_weights[0][i] * axis_weights[1][j];
                if (dim == 3) weight *= axis_weights[2][k];
                st.nodes.push_back(idx);
                st.weights.push_back(weight);
            }
        }
    }
    return st;
}

SparseMatrix assemble_extension(const Band& band) {
    std::vector<SparseMatrix::Triplet> triplets;
    const int per_row = static_cast<int>(std::pow(band.degree() + 1, band.dim()));
    triplets.reserve(static_cast<std::size_t>(band.n_nodes()) * per_row);
    for (std::int32_t i = 0; i < band.n_nodes(); ++i) {
        PointStencil st = interpolation_stencil(band, band.node(i).query.closest_point);
        for (std::size_t k = 0; k < st.nodes.size(); ++k) {
            triplets.push_back({i, st.nodes[k], st.weights[k]});
        }
    }
    // Structural zeros stay: every row carries its full (p+1)^d stencil.
    return SparseMatrix::from_triplets(band.n_nodes(), band.n_active(), std::move(triplets),
                                       /*drop_zeros=*/false);
}

SparseMatrix assemble_laplacian(const Band& band) {
    const double inv_dx2 = 1.0 / (band.dx() * band.dx());
    const double diag = -2.0 * band.dim() * inv_dx2;
    std::vector<SparseMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(band.n_active()) * (2 * band.dim() + 1));
    for (std::int32_t i = 0; i < band.n_active(); ++i) {
        triplets.push_back({i, i, diag});
        for (const Lattice& c : laplacian_neighbors(band.active()[i].lat, band.dim())) {
            std::int32_t idx = band.find(c);
            if (idx < 0) {
                throw Error(ErrorCode::stencil_incomplete,
                            "Laplacian stencil neighbor missing from the band");
            }
            triplets.push_back({i, idx, inv_dx2});
        }
    }
    return SparseMatrix::from_triplets(band.n_active(), band.n_nodes(), std::move(triplets));
}

namespace {

/** Direct row-by-row rebuild used to cross-check the sparse-product assembly. */
void verify_helmholtz(const Band& band, double c, const SparseMatrix& extension,
                      const SparseMatrix& helmholtz) {
    const double inv_dx2 = 1.0 / (band.dx() * band.dx());
    const double shift = c + 2.0 * band.dim() * inv_dx2;
    const double tol = 1e-12 * shift;

    std::vector<double> acc(band.n_active(), 0.0);
    std::vector<std::int32_t> touched;
    for (std::int32_t i = 0; i < band.n_active(); ++i) {
        touched.clear();
        auto add = [&](std::int32_t col, double v) {
            if (acc[col] == 0.0 && v != 0.0) touched.push_back(col);
            acc[col] += v;
        };
        add(i, shift);
        std::vector<std::int32_t> nbrs;
        for (const Lattice& cnb : laplacian_neighbors(band.active()[i].lat, band.dim())) {
            nbrs.push_back(band.find(cnb));
        }
        std::sort(nbrs.begin(), nbrs.end());
        for (std::int32_t m : nbrs) {
            auto cols = extension.row_cols(m);
            auto vals = extension.row_values(m);
            for (std::size_t k = 0; k < cols.size(); ++k) add(cols[k], -inv_dx2 * vals[k]);
        }
        auto cols = helmholtz.row_cols(i);
        auto vals = helmholtz.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            double expect = acc[cols[k]];
            if (std::abs(vals[k] - expect) > tol) {
                throw Error(ErrorCode::dimension_mismatch,
                            "helmholtz assembly mismatch at row " + std::to_string(i));
            }
        }
        // Entries the product dropped must be (numerically) zero here too.
        double remaining = 0.0;
        for (std::int32_t t : touched) remaining += std::abs(acc[t]);
        double kept = 0.0;
        for (double v : vals) kept += std::abs(v);
        if (remaining - kept > tol * static_cast<double>(touched.size() + 1)) {
            throw Error(ErrorCode::dimension_mismatch,
                        "helmholtz assembly dropped nonzero entries at row " + std::to_string(i));
        }
        for (std::int32_t t : touched) acc[t] = 0.0;
    }
}

}  // namespace

SparseMatrix assemble_helmholtz(const Band& band, double c, const SparseMatrix& laplacian,
                                const SparseMatrix& extension) {
    if (!(c > 0.0)) throw Error(ErrorCode::invalid_config, "Helmholtz shift c must be positive");
    const double inv_dx2 = 1.0 / (band.dx() * band.dx());
    const double stab = 2.0 * band.dim() * inv_dx2;

    std::vector<SparseMatrix::Triplet> eye;
    eye.reserve(band.n_active());
    for (std::int32_t i = 0; i < band.n_active(); ++i) eye.push_back({i, i, stab});
    SparseMatrix stab_rect = SparseMatrix::from_triplets(band.n_active(), band.n_nodes(), std::move(eye));

    SparseMatrix m = laplacian.add(stab_rect);
    SparseMatrix product = m.multiply(extension);
    SparseMatrix helmholtz = SparseMatrix::identity(band.n_active(), c + stab).add(product, -1.0);

    verify_helmholtz(band, c, extension, helmholtz);
    return helmholtz;
}

GlobalOperators assemble_global(const Band& band, double c) {
    GlobalOperators ops;
    ops.c = c;
    ops.laplacian = assemble_laplacian(band);
    ops.extension = assemble_extension(band);
    ops.helmholtz = assemble_helmholtz(band, c, ops.laplacian, ops.extension);
    return ops;
}

std::vector<double> sample_rhs(const Band& band, const std::function<double(const Vec3&)>& f) {
    std::vector<double> rhs(band.n_active());
    for (std::int32_t i = 0; i < band.n_active(); ++i) {
        rhs[i] = f(band.active()[i].query.closest_point);
    }
    return rhs;
}

}  // namespace cpdd
