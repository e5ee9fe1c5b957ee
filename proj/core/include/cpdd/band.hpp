#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "cpdd/surface.hpp"
#include "cpdd/vec.hpp"

namespace cpdd {

/** The 2d lattice neighbors (+-1 per axis) used by the centered Laplacian. */
std::vector<Lattice> laplacian_neighbors(const Lattice& c, int dim);

struct BandNode {
    Lattice lat;
    SurfaceQuery query;
};

/**
 * The computational tube: active nodes within distance gamma of the surface
 * and the ghost nodes completing their difference stencils. Node indices are
 * 0..n_active-1 for actives and n_active..n_active+n_ghost-1 for ghosts, each
 * block ordered lexicographically by lattice coordinate. Immutable once built.
 */
class Band {
  public:
    /**
     * Breadth-first flood fill from the seed points (one per surface
     * component), classifying lattice nodes by distance against
     * gamma = dx (p+2) sqrt(d) / 2.
     */
    static Band build(const Surface& surface, double dx, int degree, std::span<const Vec3> seeds);
    static Band build(const Surface& surface, double dx, int degree);

    int dim() const { return dim_; }
    double dx() const { return dx_; }
    int degree() const { return degree_; }
    double gamma() const { return gamma_; }

    std::int32_t n_active() const { return static_cast<std::int32_t>(active_.size()); }
    std::int32_t n_ghost() const { return static_cast<std::int32_t>(ghost_.size()); }
    std::int32_t n_nodes() const { return n_active() + n_ghost(); }

    const std::vector<BandNode>& active() const { return active_; }
    const std::vector<BandNode>& ghost() const { return ghost_; }

    /** Unified node access across actives-then-ghosts indexing. */
    const BandNode& node(std::int32_t i) const {
        return i < n_active() ? active_[i] : ghost_[i - n_active()];
    }
    bool is_active_index(std::int32_t i) const { return i < n_active(); }

    /** Node index for a lattice coordinate, or -1 when outside the band. */
    std::int32_t find(const Lattice& c) const {
        auto it = lattice_map_.find(c);
        return it == lattice_map_.end() ? -1 : it->second;
    }

    Vec3 position(const Lattice& c) const {
        return {c[0] * dx_, c[1] * dx_, c[2] * dx_};
    }

    /**
     * Lattice corner of the (p+1)^d interpolation stencil containing `point`:
     * nearest-node centering for even degree, containing-cell for odd.
     */
    Lattice interp_stencil_base(const Vec3& point) const;

    /** All (p+1)^d lattice coordinates of the stencil with the given base. */
    std::vector<Lattice> stencil_coords(const Lattice& base) const;

    Vec3 bbox_min() const { return bbox_min_; }
    Vec3 bbox_max() const { return bbox_max_; }

    const std::vector<std::string>& warnings() const { return warnings_; }

    std::string summary_text() const;
    void write_summary_csv(std::ostream& os) const;

  private:
    int dim_ = 2;
    double dx_ = 0.0;
    int degree_ = 2;
    double gamma_ = 0.0;
    std::vector<BandNode> active_;
    std::vector<BandNode> ghost_;
    std::unordered_map<Lattice, std::int32_t, LatticeHash> lattice_map_;
    Vec3 bbox_min_, bbox_max_;
    std::vector<std::string> warnings_;

    void verify_stencils() const;
};

}  // namespace cpdd
