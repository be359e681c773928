#pragma once

// Independent brute-force re-computations of the core update rules, used to
// check the library implementations. Everything here is written directly
// from the defining formulas, scalar by scalar, sharing no code with the
// library paths it verifies.

#include <cmath>
#include <cstdint>
#include <vector>

#include "animat/genome.hpp"
#include "animat/netdyn.hpp"
#include "animat/network_types.hpp"

namespace oracle {

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline double express(double gene, double x, double y) {
    const double theta = 2.0 * std::acos(-1.0) * gene / 12.0;
    return clamp01(0.5 + (x - 0.5) * std::cos(theta) + (y - 0.5) * std::sin(theta));
}

/// Pairing formula for one synapse pre j -> post i.
inline double coarse_weight(const animat::Genome& g, const animat::NodeSpec& post,
                            const animat::NodeSpec& pre, double w_max) {
    if (post.kind == animat::NodeKind::SensorIn || pre.kind == animat::NodeKind::MotorOut)
        return 0.0;
    double sum = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double ligand = g.values[static_cast<std::size_t>(animat::Gene::Ligand1) + k];
        const double receptor = g.values[static_cast<std::size_t>(animat::Gene::Receptor1) + k];
        sum += express(ligand, pre.x, pre.y) * express(receptor, post.x, post.y);
    }
    return w_max * sum / 5.0;
}

struct NetSnapshot {
    animat::Layout layout;
    std::vector<double> weights;    // post-major n*n
    std::vector<double> potential;  // all nodes
    std::vector<double> activation; // all nodes
    std::vector<double> gains;
    double nm_proximity = 0.0;
    double nm_hunger = 0.0;
};

/// One synchronous leaky-integrator step; sensors first, then all other
/// nodes read the updated sensor activations and each other's previous ones.
inline void step_network(NetSnapshot& s, const std::vector<double>& raw, double dt,
                         double tau_m, double nm_coupling) {
    const int n = s.layout.n_nodes();
    for (int c = 0; c < s.layout.n_sensors; ++c)
        s.activation[c] = clamp01(s.gains[c] * raw[c]);
    std::vector<double> old_act = s.activation;
    for (int i = s.layout.n_sensors; i < n; ++i) {
        double drive = 0.0;
        for (int j = 0; j < n; ++j) drive += s.weights[i * n + j] * old_act[j];
        if (i < s.layout.n_sensors + s.layout.n_inter)
            drive += nm_coupling * (s.nm_proximity + s.nm_hunger);
        s.potential[i] = s.potential[i] + (dt / tau_m) * (-s.potential[i] + drive);
        s.activation[i] = 1.0 / (1.0 + std::exp(-s.potential[i]));
    }
}

inline void hebbian(std::vector<double>& weights, const std::vector<uint8_t>& plastic,
                    const std::vector<double>& activation, const animat::Layout& layout,
                    double modulation, double lr, double dt, double w_max) {
    const int n = layout.n_nodes();
    for (int i = layout.n_sensors; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!plastic[i * n + j]) continue;
            double w = weights[i * n + j] +
                       lr * modulation * activation[j] * (activation[i] - 0.5) * dt;
            if (w > w_max) w = w_max;
            if (w < -w_max) w = -w_max;
            weights[i * n + j] = w;
        }
}

inline void homeostatic(std::vector<double>& weights, const animat::Layout& layout, double h,
                        double target, double w_max) {
    const int n = layout.n_nodes();
    for (int i = layout.n_sensors; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += std::fabs(weights[i * n + j]);
        if (sum == 0.0) continue;
        const double factor = 1.0 + h * (target / sum - 1.0);
        for (int j = 0; j < n; ++j) {
            double w = weights[i * n + j] * factor;
            if (w > w_max) w = w_max;
            if (w < -w_max) w = -w_max;
            weights[i * n + j] = w;
        }
    }
}

} // namespace oracle
