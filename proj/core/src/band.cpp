#include "cpdd/band.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace cpdd {

std::vector<Lattice> laplacian_neighbors(const Lattice& c, int dim) {
    std::vector<Lattice> out;
    out.reserve(2 * dim);
    for (int axis = 0; axis < dim; ++axis) {
        for (int step : {-1, +1}) {
            Lattice n = c;
            n[axis] += step;
            out.push_back(n);
        }
    }
    return out;
}

Band Band::build(const Surface& surface, double dx, int degree) {
    Vec3 seed = surface.default_seed();
    return build(surface, dx, degree, std::span<const Vec3>(&seed, 1));
}

Band Band::build(const Surface& surface, double dx, int degree, std::span<const Vec3> seeds) {
    if (!(dx > 0.0)) throw Error(ErrorCode::invalid_config, "dx must be positive");
    if (degree < 1 || degree > 6) {
        throw Error(ErrorCode::invalid_config, "interpolation degree must lie in 1..6");
    }
    if (seeds.empty()) throw Error(ErrorCode::invalid_config, "at least one band seed is required");

    Band band;
    band.dim_ = surface.dim();
    band.dx_ = dx;
    band.degree_ = degree;
    band.gamma_ = dx * (degree + 2) * std::sqrt(static_cast<double>(band.dim_)) / 2.0;

    if (auto kappa = surface.curvature_bound()) {
        if (band.gamma_ >= 1.0 / *kappa) {
            std::ostringstream os;
            os << "tube radius gamma=" << band.gamma_ << " must stay below 1/kappa_inf="
               << 1.0 / *kappa << "; refine dx or lower the interpolation degree";
            throw Error(ErrorCode::tube_too_wide, os.str());
        }
    } else {
        band.warnings_.push_back(
            "surface has no curvature bound; skipping the gamma < 1/kappa_inf check");
    }

    // Classification map: 1 = active, 0 = ghost.
    std::unordered_map<Lattice, char, LatticeHash> classified;
    std::deque<Lattice> frontier;

    auto classify = [&](const Lattice& c) -> char {
        auto it = classified.find(c);
        if (it != classified.end()) return it->second;
        SurfaceQuery q = surface.closest_point(band.position(c));
        char cls = q.distance <= band.gamma_ ? 1 : 0;
        classified.emplace(c, cls);
        if (cls == 1) {
            frontier.push_back(c);
            band.active_.push_back({c, q});
        } else {
            band.ghost_.push_back({c, q});
        }
        return cls;
    };

    for (const Vec3& seed : seeds) {
        Lattice snapped{static_cast<int>(std::llround(seed.x / dx)),
                        static_cast<int>(std::llround(seed.y / dx)),
                        band.dim_ == 3 ? static_cast<int>(std::llround(seed.z / dx)) : 0};
        if (classify(snapped) != 1) {
            std::ostringstream os;
            os << "seed (" << seed.x << "," << seed.y << "," << seed.z
               << ") is farther than gamma from the surface after lattice snapping";
            throw Error(ErrorCode::seed_off_tube, os.str());
        }
    }

    while (!frontier.empty()) {
        Lattice c = frontier.front();
        frontier.pop_front();
        for (const Lattice& n : laplacian_neighbors(c, band.dim_)) classify(n);
    }

    auto by_lattice = [](const BandNode& a, const BandNode& b) { return a.lat < b.lat; };
    std::sort(band.active_.begin(), band.active_.end(), by_lattice);
    std::sort(band.ghost_.begin(), band.ghost_.end(), by_lattice);

    band.lattice_map_.reserve(classified.size());
    for (std::int32_t i = 0; i < band.n_active(); ++i) band.lattice_map_[band.active_[i].lat] = i;
    for (std::int32_t i = 0; i < band.n_ghost(); ++i) {
        band.lattice_map_[band.ghost_[i].lat] = band.n_active() + i;
    }

    if (!band.active_.empty()) {
        band.bbox_min_ = band.bbox_max_ = band.position(band.active_.front().lat);
        for (const auto& n : band.active_) {
            Vec3 p = band.position(n.lat);
            band.bbox_min_ = {std::min(band.bbox_min_.x, p.x), std::min(band.bbox_min_.y, p.y),
                              std::min(band.bbox_min_.z, p.z)};
            band.bbox_max_ = {std::max(band.bbox_max_.x, p.x), std::max(band.bbox_max_.y, p.y),
                              std::max(band.bbox_max_.z, p.z)};
        }
    }

    band.verify_stencils();
    return band;
}

Lattice Band::interp_stencil_base(const Vec3& point) const {
    Lattice base{0, 0, 0};
    for (int axis = 0; axis < dim_; ++axis) {
        double t = point[axis] / dx_;
        if (degree_ % 2 == 0) {
            base[axis] = static_cast<int>(std::llround(t)) - degree_ / 2;
        } else {
            base[axis] = static_cast<int>(std::floor(t)) - (degree_ - 1) / 2;
        }
    }
    return base;
}

std::vector<Lattice> Band::stencil_coords(const Lattice& base) const {
    const int w = degree_ + 1;
    std::vector<Lattice> out;
    out.reserve(dim_ == 3 ? w * w * w : w * w);
    const int kmax = dim_ == 3 ? w : 1;
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
            for (int k = 0; k < kmax; ++k) {
                out.push_back({base[0] + i, base[1] + j, base[2] + k});
            }
        }
    }
    return out;
}

void Band::verify_stencils() const {
    for (std::int32_t i = 0; i < n_nodes(); ++i) {
        const BandNode& n = node(i);
        Lattice base = interp_stencil_base(n.query.closest_point);
        for (const Lattice& c : stencil_coords(base)) {
            std::int32_t idx = find(c);
            if (idx < 0 || !is_active_index(idx)) {
                std::ostringstream os;
                os << "interpolation stencil of node (" << n.lat[0] << "," << n.lat[1] << ","
                   << n.lat[2] << ") contains non-active lattice point (" << c[0] << "," << c[1]
                   << "," << c[2] << ")";
                throw Error(ErrorCode::stencil_incomplete, os.str());
            }
        }
    }
}

std::string Band::summary_text() const {
    std::ostringstream os;
    os << "band: dim=" << dim_ << " dx=" << dx_ << " degree=" << degree_ << " gamma=" << gamma_
       << "\n"
       << "  active nodes: " << n_active() << "\n"
       << "  ghost nodes:  " << n_ghost() << "\n"
       << "  bbox: [" << bbox_min_.x << "," << bbox_max_.x << "] x [" << bbox_min_.y << ","
       << bbox_max_.y << "]";
    if (dim_ == 3) os << " x [" << bbox_min_.z << "," << bbox_max_.z << "]";
    return os.str();
}

void Band::write_summary_csv(std::ostream& os) const {
    os << "n_active,n_ghost,gamma,dx,degree,dim,bbox_min_x,bbox_min_y,bbox_min_z,"
          "bbox_max_x,bbox_max_y,bbox_max_z\n";
    os << n_active() << "," << n_ghost() << "," << gamma_ << "," << dx_ << "," << degree_ << ","
       << dim_ << "," << bbox_min_.x << "," << bbox_min_.y << "," << bbox_min_.z << ","
       << bbox_max_.x << "," << bbox_max_.y << "," << bbox_max_.z << "\n";
}

}  // namespace cpdd
