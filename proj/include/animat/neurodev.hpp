#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "animat/genome.hpp"
#include "animat/netdyn.hpp"
#include "animat/network_types.hpp"
#include "animat/rng.hpp"

namespace animat {

// Network construction in three stages: node placement in a virtual unit
// square, coarse wiring from ligand/receptor gradient matching, and fine
// mapping through noise-driven activity with unmodulated Hebbian updates.

struct DevParams {
    int fine_map_epochs = 20;
    int settle_steps = 50;        // network steps per epoch before the update
    double dt = 0.01;             // s, step size during development
    double learning_rate = 0.05;
    double target_sum = 0.0;      // 0 = n_incoming * 0.25 * w_max
    double prune_threshold_frac = 0.05; // of w_max
    double inhibitory_fraction = 0.2;   // of interneurons
    double w_max = 1.0;
};

/// Sensors sit evenly spaced on the x=0 edge, motors on the x=1 edge,
/// interneurons land uniformly at random in the square.
inline std::vector<NodeSpec> place_nodes(const Layout& layout, RngStream& rng) {
    if (layout.n_sensors <= 0 || layout.n_motors <= 0)
        throw std::invalid_argument("place_nodes: sensor and motor counts must be positive");
    if (layout.n_inter < 0) throw std::invalid_argument("place_nodes: negative interneuron count");
    std::vector<NodeSpec> nodes;
    nodes.reserve(layout.n_nodes());
    int id = 0;
    for (int c = 0; c < layout.n_sensors; ++c)
        nodes.push_back({id++, 0.0, (c + 0.5) / layout.n_sensors, NodeKind::SensorIn, c});
    for (int k = 0; k < layout.n_inter; ++k) {
        double x = rng.uniform01();
        double y = rng.uniform01();
        nodes.push_back({id++, x, y, NodeKind::Inter, -1});
    }
    for (int m = 0; m < layout.n_motors; ++m)
        nodes.push_back({id++, 1.0, (m + 0.5) / layout.n_motors, NodeKind::MotorOut, m});
    return nodes;
}

/// Planar gradient over the virtual square; the gene value in [0, 12] picks
/// the gradient direction (angle 2*pi*v/12), the output is clamped to [0, 1].
inline double express(double gene_value, double x, double y) {
    const double angle = kTwoPi * gene_value / 12.0;
    const double v = 0.5 + (x - 0.5) * std::cos(angle) + (y - 0.5) * std::sin(angle);
    return std::clamp(v, 0.0, 1.0);
}

/// Deterministic initial weights: the match between the presynaptic node's
/// ligand expressions and the postsynaptic node's receptor expressions,
/// averaged over the five channels and scaled to w_max.
inline NetworkBlueprint coarse_wire(const std::vector<NodeSpec>& nodes, const Genome& genome,
                                    double w_max = 1.0) {
    NetworkBlueprint bp;
    for (const auto& nd : nodes) {
        if (nd.kind == NodeKind::SensorIn) bp.layout.n_sensors++;
        else if (nd.kind == NodeKind::Inter) bp.layout.n_inter++;
        else bp.layout.n_motors++;
    }
    bp.nodes = nodes;
    bp.w_max = w_max;
    const int n = bp.n();
    bp.weights.assign(static_cast<std::size_t>(n) * n, 0.0);

    std::vector<std::array<double, 5>> ligand(n), receptor(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 5; ++k) {
            ligand[i][k] = express(genome.values[static_cast<std::size_t>(Gene::Ligand1) + k],
                                   nodes[i].x, nodes[i].y);
            receptor[i][k] = express(genome.values[static_cast<std::size_t>(Gene::Receptor1) + k],
                                     nodes[i].x, nodes[i].y);
        }
    for (int i = 0; i < n; ++i) {
        if (bp.layout.is_sensor(i)) continue;
        for (int j = 0; j < n; ++j) {
            if (bp.layout.is_motor(j)) continue;
            double match = 0.0;
            for (int k = 0; k < 5; ++k) match += ligand[j][k] * receptor[i][k];
            bp.w(i, j) = w_max * match / 5.0;
        }
    }
    return bp;
}

/// Activity-dependent refinement: each epoch injects one fresh positive
/// noise pattern into the sensors, lets the network settle with learning
/// disabled, then applies a single unmodulated Hebbian update (integrated
/// over the epoch) and a homeostatic correction. Sub-threshold weights are
/// pruned at the end.
inline NetworkBlueprint fine_map(const NetworkBlueprint& bp, const Genome& genome, int epochs,
                                 RngStream& rng, const DevParams& dev) {
    if (epochs < 0) throw std::invalid_argument("fine_map: negative epoch count");
    NetworkBlueprint out = bp;
    if (epochs > 0) {
        NetworkState state = make_network_state(bp, genome, /*plastic_from_nonzero=*/false);
        const double target =
            dev.target_sum > 0.0 ? dev.target_sum : default_target_sum(bp.layout, bp.w_max);
        const double epoch_duration = dev.settle_steps * dev.dt;
        std::vector<double> noise(bp.layout.n_sensors);
        for (int e = 0; e < epochs; ++e) {
            for (double& v : noise) v = rng.uniform01();
            for (int t = 0; t < dev.settle_steps; ++t) step_network(state, noise, dev.dt);
            hebbian_apply(state, 1.0, dev.learning_rate, epoch_duration);
            homeostatic_scale(state, genome[Gene::Homeostatic], target);
        }
        out.weights = state.weights;
    }
    const double threshold = dev.prune_threshold_frac * bp.w_max;
    for (double& w : out.weights)
        if (std::abs(w) < threshold) w = 0.0;
    return out;
}

/// Marks the leading fraction of interneurons inhibitory by forcing their
/// outgoing weights nonpositive. Interneuron positions are random, so the
/// ordinal choice carries no spatial bias.
inline void apply_inhibitory_signs(NetworkBlueprint& bp, double fraction) {
    const int n_inhib = static_cast<int>(std::lround(fraction * bp.layout.n_inter));
    const int n = bp.n();
    for (int k = 0; k < n_inhib; ++k) {
        const int j = bp.layout.n_sensors + k;
        for (int i = 0; i < n; ++i) bp.w(i, j) = -std::abs(bp.w(i, j));
    }
}

/// Full construction pipeline for one genome.
inline NetworkBlueprint develop(const Genome& genome, const Layout& layout, RngStream& rng,
                                const DevParams& dev) {
    auto nodes = place_nodes(layout, rng);
    NetworkBlueprint bp = coarse_wire(nodes, genome, dev.w_max);
    bp = fine_map(bp, genome, dev.fine_map_epochs, rng, dev);
    apply_inhibitory_signs(bp, dev.inhibitory_fraction);
    return bp;
}

} // namespace animat
