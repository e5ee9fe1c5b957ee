#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cpdd {

enum class SolveStatus { converged, max_iterations, diverged };

inline const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

/** Echo of the configuration a solve ran under, carried into every report. */
struct ConfigEcho {
    int n_subdomains = 1;
    int n_overlap = 0;
    std::string tc = "none";
    double alpha = 0.0;
    double c = 0.0;
    double dx = 0.0;
    int degree = 0;
};

struct SolveReport {
    SolveStatus status = SolveStatus::max_iterations;
    bool converged = false;
    int iterations = 0;
    /** 2-norms, entry 0 is the initial residual; length == iterations + 1. */
    std::vector<double> residual_history;
    double wall_time = 0.0;
    std::optional<ConfigEcho> echo;

    double initial_residual() const { return residual_history.empty() ? 0.0 : residual_history.front(); }
    double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
    double relative_residual() const {
        double r0 = initial_residual();
        return r0 > 0.0 ? final_residual() / r0 : 0.0;
    }

    /** Columns: iteration, residual_2norm, relative_residual. */
    void write_residual_csv(std::ostream& os) const;
};

}  // namespace cpdd
