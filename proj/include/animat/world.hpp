#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "animat/rng.hpp"

namespace animat {

// The 2D arena: a unit square holding one differential-drive animat and 50
// prey of two species. Prey diffuse (Brownian velocity kicks) and acquire a
// strong drift away from the animat inside striking distance. Captured prey
// respawn immediately, so the prey count is invariant.

inline constexpr int kNumPrey = 50;
inline constexpr int kSpeciesACount = 17; // 1/3 of 50, rounded to nearest
inline constexpr double kPreySpeedRatio = 0.95;
inline constexpr int kSensorBins = 16;
inline constexpr int kSensorChannels = 2 * kSensorBins + 2; // species bins + hunger + proximity
inline constexpr double kDistanceFalloff = 8.0;
inline constexpr double kHungerHorizonS = 60.0;

enum class Species : int { A = 0, B = 1 };

inline const char* species_name(Species s) { return s == Species::A ? "A" : "B"; }

struct WorldConfig {
    double striking_distance = 0.15;
    double sigma_brownian = 0.5;   // velocity diffusion, units/s^1.5
    double drift_strength = 5.0;   // flee acceleration, units/s^2
    double cal_high = 3.0;
    double cal_low = 1.0;
    double animat_radius = 0.04;
    double animat_top_speed = 1.0; // arena units/s; full arena in 1 s
    double turn_gain = 10.0;       // rad/s at full motor differential
    double respawn_min_dist = 0.25;

    double prey_top_speed() const { return kPreySpeedRatio * animat_top_speed; }
};

struct Prey {
    double x = 0.0, y = 0.0;
    double vx = 0.0, vy = 0.0;
    Species species = Species::A;
};

struct AnimatBody {
    double x = 0.5, y = 0.5;
    double heading = 0.0; // radians, counterclockwise, unwrapped
    double radius = 0.04;
};

struct WorldState {
    AnimatBody animat;
    std::vector<Prey> prey;
    Species high_cal_species = Species::A;
    double calories_high = 0.0; // accumulated from the high-calorie species
    double calories_low = 0.0;
    long captures[2] = {0, 0};  // indexed by Species
    double clock = 0.0;         // s
    double last_meal_time = 0.0;
    RngStream rng;              // owned; consumed by prey motion and respawns

    long captures_high() const { return captures[static_cast<int>(high_cal_species)]; }
    long captures_low() const { return captures[1 - static_cast<int>(high_cal_species)]; }
    long captures_total() const { return captures[0] + captures[1]; }
    double calories_total() const { return calories_high + calories_low; }
};

/// The calorie assignment is a generation-level coin flip, shared by every
/// individual evaluated in that generation.
inline Species draw_high_cal_species(RngStream& generation_rng) {
    return generation_rng.coin() ? Species::B : Species::A;
}

inline WorldState init_world(uint64_t world_seed, Species high_cal, const WorldConfig& cfg) {
    WorldState w;
    w.rng = RngStream(world_seed);
    w.animat.x = 0.5;
    w.animat.y = 0.5;
    w.animat.radius = cfg.animat_radius;
    w.animat.heading = w.rng.uniform(0.0, kTwoPi);
    w.high_cal_species = high_cal;
    w.prey.resize(kNumPrey);
    for (int i = 0; i < kNumPrey; ++i) {
        w.prey[i].x = w.rng.uniform01();
        w.prey[i].y = w.rng.uniform01();
        w.prey[i].species = i < kSpeciesACount ? Species::A : Species::B;
    }
    return w;
}

/// Brownian velocity kicks plus flee drift inside striking distance; speed
/// capped below the animat's, positions wall-clamped with the blocked
/// velocity component zeroed.
inline void step_prey(WorldState& w, double dt, const WorldConfig& cfg) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_prey: dt must be > 0");
    const double kick = cfg.sigma_brownian * std::sqrt(dt);
    const double top = cfg.prey_top_speed();
    for (Prey& p : w.prey) {
        auto [g1, g2] = w.rng.gaussian_pair();
        p.vx += kick * g1;
        p.vy += kick * g2;
        const double dx = p.x - w.animat.x;
        const double dy = p.y - w.animat.y;
        const double d = std::hypot(dx, dy);
        if (d < cfg.striking_distance && d > 1e-12) {
            const double a = cfg.drift_strength * dt / d;
            p.vx += a * dx;
            p.vy += a * dy;
        }
        const double speed = std::hypot(p.vx, p.vy);
        if (speed > top) {
            const double f = top / speed;
            p.vx *= f;
            p.vy *= f;
        }
        p.x += p.vx * dt;
        p.y += p.vy * dt;
        if (p.x < 0.0) { p.x = 0.0; p.vx = 0.0; }
        if (p.x > 1.0) { p.x = 1.0; p.vx = 0.0; }
        if (p.y < 0.0) { p.y = 0.0; p.vy = 0.0; }
        if (p.y > 1.0) { p.y = 1.0; p.vy = 0.0; }
    }
}

/// Differential drive: (1,1) runs straight at top speed, (0,1) arcs left.
inline void step_animat(WorldState& w, double left, double right, double dt,
                        const WorldConfig& cfg) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_animat: dt must be > 0");
    if (left < 0.0 || left > 1.0 || right < 0.0 || right > 1.0)
        throw std::invalid_argument("step_animat: motor commands must lie in [0, 1]");
    const double v = cfg.animat_top_speed * 0.5 * (left + right);
    w.animat.heading += cfg.turn_gain * (right - left) * dt;
    w.animat.x = std::clamp(w.animat.x + v * dt * std::cos(w.animat.heading), 0.0, 1.0);
    w.animat.y = std::clamp(w.animat.y + v * dt * std::sin(w.animat.heading), 0.0, 1.0);
}

/// Eats every prey whose center lies within the animat radius; each capture
/// accrues its species' calories and the prey respawns (same species, zero
/// velocity) at least respawn_min_dist away. Returns calories gained.
inline double resolve_captures(WorldState& w, const WorldConfig& cfg) {
    double gained = 0.0;
    for (Prey& p : w.prey) {
        const double d = std::hypot(p.x - w.animat.x, p.y - w.animat.y);
        if (d > w.animat.radius) continue;
        const bool high = p.species == w.high_cal_species;
        const double value = high ? cfg.cal_high : cfg.cal_low;
        gained += value;
        (high ? w.calories_high : w.calories_low) += value;
        w.captures[static_cast<int>(p.species)]++;
        w.last_meal_time = w.clock;
        double px, py;
        do {
            px = w.rng.uniform01();
            py = w.rng.uniform01();
        } while (std::hypot(px - w.animat.x, py - w.animat.y) < cfg.respawn_min_dist);
        p.x = px;
        p.y = py;
        p.vx = 0.0;
        p.vy = 0.0;
    }
    return gained;
}

inline double nearest_prey_distance(const WorldState& w) {
    double best = std::numeric_limits<double>::infinity();
    for (const Prey& p : w.prey)
        best = std::min(best, std::hypot(p.x - w.animat.x, p.y - w.animat.y));
    return best;
}

/// 34 channels: 16 angular bins (relative to heading, counterclockwise) for
/// species A, the same 16 for species B, then hunger and nearest-prey
/// proximity. Bin values sum 1/(1 + 8 d) over the bin's prey, clamped to 1.
inline void read_sensors(const WorldState& w, std::span<double> out) {
    if (static_cast<int>(out.size()) != kSensorChannels)
        throw std::invalid_argument("read_sensors: expected 34-channel output span");
    std::fill(out.begin(), out.end(), 0.0);
    const double bin_width = kTwoPi / kSensorBins;
    double nearest = std::numeric_limits<double>::infinity();
    for (const Prey& p : w.prey) {
        const double dx = p.x - w.animat.x;
        const double dy = p.y - w.animat.y;
        const double d = std::hypot(dx, dy);
        nearest = std::min(nearest, d);
        double rel = std::fmod(std::atan2(dy, dx) - w.animat.heading, kTwoPi);
        if (rel < 0.0) rel += kTwoPi;
        const int bin = std::min(kSensorBins - 1, static_cast<int>(rel / bin_width));
        const int channel = bin + (p.species == Species::B ? kSensorBins : 0);
        out[channel] += 1.0 / (1.0 + kDistanceFalloff * d);
    }
    for (int c = 0; c < 2 * kSensorBins; ++c) out[c] = std::min(out[c], 1.0);
    out[2 * kSensorBins] = std::min(w.clock - w.last_meal_time, kHungerHorizonS) / kHungerHorizonS;
    out[2 * kSensorBins + 1] = 1.0 / (1.0 + kDistanceFalloff * nearest);
}

} // namespace animat
