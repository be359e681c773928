#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "animat/genome.hpp"
#include "animat/network_types.hpp"

namespace animat {

// Real-time recurrent dynamics: leaky rate units with a logistic squash,
// per-channel sensory adaptation, neuromodulator decay, reward-gated Hebbian
// plasticity and multiplicative homeostatic scaling.
//
// Fixed dynamics constants (the evolvable quantities live in the genome):

inline constexpr double kMembraneTau = 0.05;    // s
inline constexpr double kEmaTau = 0.2;          // s, sensory adaptation smoothing
inline constexpr double kGainRecoveryRate = 0.5; // 1/s
inline constexpr double kSatCap = 1.0;          // plasticity-signal saturation
inline constexpr double kImpulseCap = 10.0;     // neuromodulator level ceiling
inline constexpr double kNmCoupling = 0.1;      // broadcast drive per NM unit

inline double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

struct NeuromodulatorState {
    double proximity = 0.0;
    double eating = 0.0;
    double hunger = 0.0;
    // decay time constants, milliseconds; 0 means the level dies within a step
    double tau_proximity_ms = 0.0;
    double tau_eating_ms = 0.0;
    double tau_hunger_ms = 0.0;
};

struct NmEvents {
    double nearest_prey_distance = 0.0;
    bool ate = false;
    double since_meal_s = 0.0;
};

struct NetworkState {
    Layout layout;
    double w_max = 1.0;
    std::vector<double> weights;      // plastic copy of the blueprint, post-major
    std::vector<uint8_t> plastic;     // synapses the Hebbian rule may touch
    std::vector<double> potential;    // internal state, non-sensor nodes only meaningful
    std::vector<double> activation;   // squashed rates in [0, 1], all nodes
    std::vector<double> gains;        // per sensor channel, in [s0, 1]
    std::vector<double> smoothed_inputs;
    NeuromodulatorState nm;
    std::vector<double> drive_scratch;

    int n() const { return layout.n_nodes(); }
    double motor_output(int channel) const {
        return activation[static_cast<std::size_t>(layout.n_sensors + layout.n_inter + channel)];
    }
    std::span<const double> motor_outputs() const {
        return {activation.data() + layout.n_sensors + layout.n_inter,
                static_cast<std::size_t>(layout.n_motors)};
    }
};

/// Builds runtime state over a developed blueprint. When plastic_from_nonzero
/// is set, only synapses that survived pruning stay plastic (pruned synapses
/// never revive); during development itself every permitted synapse is open.
inline NetworkState make_network_state(const NetworkBlueprint& bp, const Genome& genome,
                                       bool plastic_from_nonzero) {
    NetworkState s;
    s.layout = bp.layout;
    s.w_max = bp.w_max;
    s.weights = bp.weights;
    const int n = bp.n();
    s.plastic.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool open = bp.allowed(i, j);
            if (plastic_from_nonzero) open = open && bp.w(i, j) != 0.0;
            s.plastic[static_cast<std::size_t>(i) * n + j] = open ? 1 : 0;
        }
    s.potential.assign(n, 0.0);
    s.activation.assign(n, 0.0);
    for (int i = bp.layout.n_sensors; i < n; ++i) s.activation[i] = logistic(0.0);
    s.gains.assign(bp.layout.n_sensors, 1.0);
    s.smoothed_inputs.assign(bp.layout.n_sensors, 0.0);
    s.nm.tau_proximity_ms = genome[Gene::DecayProximity];
    s.nm.tau_eating_ms = genome[Gene::DecayEating];
    s.nm.tau_hunger_ms = genome[Gene::DecayHunger];
    return s;
}

/// One synchronous Euler step. Sensor activations are set from the gained
/// inputs first; every other node integrates its weighted drive (plus the
/// proximity/hunger neuromodulator broadcast on interneurons) and squashes.
/// Returns a view of the motor activations.
inline std::span<const double> step_network(NetworkState& s, std::span<const double> sensor_raw,
                                            double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_network: dt must be > 0");
    if (static_cast<int>(sensor_raw.size()) != s.layout.n_sensors)
        throw std::invalid_argument("step_network: expected " +
                                    std::to_string(s.layout.n_sensors) + " sensor channels, got " +
                                    std::to_string(sensor_raw.size()));
    const int n = s.n();
    const int ns = s.layout.n_sensors;
    for (int c = 0; c < ns; ++c)
        s.activation[c] = std::clamp(s.gains[c] * sensor_raw[c], 0.0, 1.0);

    const double nm_drive = kNmCoupling * (s.nm.proximity + s.nm.hunger);
    const double leak = dt / kMembraneTau;
    const double* act = s.activation.data();
    s.drive_scratch.resize(static_cast<std::size_t>(n - ns));
    std::vector<double>& drive = s.drive_scratch;
    for (int i = ns; i < n; ++i) {
        const double* row = s.weights.data() + static_cast<std::size_t>(i) * n;
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += row[j] * act[j];
        if (s.layout.is_inter(i)) sum += nm_drive;
        drive[i - ns] = sum;
    }
    for (int i = ns; i < n; ++i) {
        s.potential[i] += leak * (-s.potential[i] + drive[i - ns]);
        s.activation[i] = logistic(s.potential[i]);
    }
    return s.motor_outputs();
}

/// Per-channel gain adaptation driven by a smoothed copy of the raw input.
inline void adapt_sensors(NetworkState& s, std::span<const double> sensor_raw,
                          const Genome& genome, double dt) {
    const double s0 = genome[Gene::SensoryAdaptMinScaleS0];
    const double a1 = genome[Gene::SensoryAdaptDeltaScaleA1];
    const double a2 = genome[Gene::SensoryAdaptDeltaThresholdA2];
    const double alpha = 1.0 - std::exp(-dt / kEmaTau);
    for (std::size_t c = 0; c < s.gains.size(); ++c) {
        s.smoothed_inputs[c] += alpha * (sensor_raw[c] - s.smoothed_inputs[c]);
        if (s.smoothed_inputs[c] > a2)
            s.gains[c] = std::max(s0, s.gains[c] - a1 * (s.smoothed_inputs[c] - a2) * dt);
        else
            s.gains[c] = std::min(1.0, s.gains[c] + kGainRecoveryRate * dt);
    }
}

/// Exponential decay with genome time constants, then event impulses:
/// +1 for a meal, proximity drive from the nearest prey, hunger drive from
/// time since the last meal. Levels stay in [0, kImpulseCap].
inline void update_neuromodulators(NeuromodulatorState& nm, const NmEvents& ev, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("update_neuromodulators: dt must be > 0");
    const double dt_ms = dt * 1000.0;
    auto decay = [dt_ms](double level, double tau_ms) {
        return tau_ms > 0.0 ? level * std::exp(-dt_ms / tau_ms) : 0.0;
    };
    nm.proximity = decay(nm.proximity, nm.tau_proximity_ms);
    nm.eating = decay(nm.eating, nm.tau_eating_ms);
    nm.hunger = decay(nm.hunger, nm.tau_hunger_ms);

    nm.proximity += dt / (1.0 + ev.nearest_prey_distance);
    if (ev.ate) nm.eating += 1.0;
    nm.hunger += dt * std::min(ev.since_meal_s, 60.0) / 60.0;

    nm.proximity = std::clamp(nm.proximity, 0.0, kImpulseCap);
    nm.eating = std::clamp(nm.eating, 0.0, kImpulseCap);
    nm.hunger = std::clamp(nm.hunger, 0.0, kImpulseCap);
}

/// Hebbian update with an explicit modulation factor. Only plastic synapses
/// move; weights are clamped to the saturation bound.
inline void hebbian_apply(NetworkState& s, double modulation, double learning_rate, double dt) {
    if (modulation == 0.0) return;
    const int n = s.n();
    const double scale = learning_rate * modulation * dt;
    for (int i = s.layout.n_sensors; i < n; ++i) {
        const double post = scale * (s.activation[i] - 0.5);
        double* row = s.weights.data() + static_cast<std::size_t>(i) * n;
        const uint8_t* open = s.plastic.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            if (!open[j]) continue;
            row[j] = std::clamp(row[j] + post * s.activation[j], -s.w_max, s.w_max);
        }
    }
}

/// Lifetime learning: the eating neuromodulator, saturated at kSatCap, gates
/// the Hebbian rule.
inline void hebbian_learn(NetworkState& s, double learning_rate, double dt) {
    hebbian_apply(s, std::min(s.nm.eating, kSatCap), learning_rate, dt);
}

inline double default_target_sum(const Layout& layout, double w_max) {
    // expected coarse incoming sum: one permitted synapse contributes ~0.25 * w_max
    return (layout.n_nodes() - layout.n_motors) * 0.25 * w_max;
}

/// Multiplicative correction of each node's incoming absolute-weight sum
/// toward target_sum, at fraction h per application. Signs are preserved.
inline void homeostatic_scale(NetworkState& s, double h, double target_sum) {
    if (!(target_sum > 0.0)) throw std::invalid_argument("homeostatic_scale: target_sum must be > 0");
    const int n = s.n();
    for (int i = s.layout.n_sensors; i < n; ++i) {
        double* row = s.weights.data() + static_cast<std::size_t>(i) * n;
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += std::abs(row[j]);
        if (sum <= 0.0) continue;
        const double factor = 1.0 + h * (target_sum / sum - 1.0);
        if (!(factor > 0.0))
            throw std::runtime_error("homeostatic_scale: nonpositive scaling factor");
        for (int j = 0; j < n; ++j)
            row[j] = std::clamp(row[j] * factor, -s.w_max, s.w_max);
    }
}

} // namespace animat
