#pragma once

#include <cstddef>
#include <vector>

namespace animat {

// Shared node/blueprint data types. Node order is fixed: sensor nodes first,
// then interneurons, then motor nodes; channels index into world I/O slots.

enum class NodeKind { SensorIn, Inter, MotorOut };

struct NodeSpec {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    NodeKind kind = NodeKind::Inter;
    int channel = -1;
};

struct Layout {
    int n_sensors = 0;
    int n_inter = 0;
    int n_motors = 0;

    int n_nodes() const { return n_sensors + n_inter + n_motors; }
    bool is_sensor(int i) const { return i < n_sensors; }
    bool is_inter(int i) const { return i >= n_sensors && i < n_sensors + n_inter; }
    bool is_motor(int i) const { return i >= n_sensors + n_inter; }
};

/// Dense weight matrix over placed nodes, post-synaptic major.
/// Sensor rows and motor columns are structurally zero.
struct NetworkBlueprint {
    Layout layout;
    std::vector<NodeSpec> nodes;
    std::vector<double> weights; // n * n, weights[post * n + pre]
    double w_max = 1.0;

    int n() const { return layout.n_nodes(); }
    double w(int post, int pre) const { return weights[static_cast<std::size_t>(post) * n() + pre]; }
    double& w(int post, int pre) { return weights[static_cast<std::size_t>(post) * n() + pre]; }

    /// True where a synapse may exist at all.
    bool allowed(int post, int pre) const { return !layout.is_sensor(post) && !layout.is_motor(pre); }
};

} // namespace animat
