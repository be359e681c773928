#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "animat/rng.hpp"

namespace animat {

// The evolvable parameter set: 17 bounded real genes, each with its own
// mutation standard deviation. The table is plain data so gene sets can be
// extended without touching the operators below.

struct GeneSpec {
    std::string name;
    double init_mut_std = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

enum class Gene : std::size_t {
    Ligand1 = 0,
    Ligand2,
    Ligand3,
    Ligand4,
    Ligand5,
    Receptor1,
    Receptor2,
    Receptor3,
    Receptor4,
    Receptor5,
    SensoryAdaptMinScaleS0,
    SensoryAdaptDeltaScaleA1,
    SensoryAdaptDeltaThresholdA2,
    Homeostatic,
    DecayProximity,
    DecayEating,
    DecayHunger,
};

inline constexpr std::size_t kGeneCount = 17;

struct GeneTable {
    std::vector<GeneSpec> specs;
    std::vector<double> current_mut_std;

    std::size_t size() const { return specs.size(); }
};

struct Genome {
    std::vector<double> values;

    double operator[](Gene g) const { return values[static_cast<std::size_t>(g)]; }
    bool operator==(const Genome&) const = default;
};

inline GeneTable default_gene_table() {
    GeneTable t;
    auto add = [&t](std::string name, double std, double lo, double hi) {
        t.specs.push_back(GeneSpec{std::move(name), std, lo, hi});
    };
    for (int k = 1; k <= 5; ++k) add("Ligand_" + std::to_string(k), 0.5, 0.0, 12.0);
    for (int k = 1; k <= 5; ++k) add("Receptor_" + std::to_string(k), 0.5, 0.0, 12.0);
    add("sensory_adapt_min_scale_s0", 0.1, 0.0, 1.0);
    add("sensory_adapt_delta_scale_a1", 0.5, 0.0, 1.0);
    add("sensory_adapt_delta_threshold_a2", 0.5, 0.0, 20.0);
    add("homeostatic", 0.1, 0.0, 1.0);
    add("decay_proximity", 100.0, 0.0, 2000.0);
    add("decay_eating", 100.0, 0.0, 2000.0);
    add("decay_hunger", 100.0, 0.0, 2000.0);
    for (const auto& s : t.specs) t.current_mut_std.push_back(s.init_mut_std);
    return t;
}

/// Throws if any gene is outside its table bounds; the message names the gene.
inline void validate_genome(const Genome& g, const GeneTable& table) {
    if (g.values.size() != table.size())
        throw std::invalid_argument("genome has " + std::to_string(g.values.size()) +
                                    " genes, expected " + std::to_string(table.size()));
    for (std::size_t i = 0; i < table.size(); ++i) {
        const GeneSpec& s = table.specs[i];
        double v = g.values[i];
        if (!(v >= s.lower && v <= s.upper))
            throw std::invalid_argument(s.name + " = " + std::to_string(v) +
                                        " out of bounds [" + std::to_string(s.lower) + ", " +
                                        std::to_string(s.upper) + "]");
    }
}

inline Genome random_genome(const GeneTable& table, RngStream& rng) {
    Genome g;
    g.values.reserve(table.size());
    for (const auto& s : table.specs) g.values.push_back(rng.uniform(s.lower, s.upper));
    return g;
}

/// Core of the mutation operator: one bounded Gaussian perturbation.
inline double perturb_gene(double value, double mut_std, double lower, double upper, double z) {
    return std::clamp(value + mut_std * z, lower, upper);
}

/// Perturbs every gene independently; the parent is left untouched.
inline Genome mutate(const Genome& parent, const GeneTable& table, RngStream& rng) {
    Genome child;
    child.values.reserve(parent.values.size());
    for (std::size_t i = 0; i < parent.values.size(); ++i) {
        const GeneSpec& s = table.specs[i];
        child.values.push_back(
            perturb_gene(parent.values[i], table.current_mut_std[i], s.lower, s.upper, rng.gaussian()));
    }
    return child;
}

/// Scales every current mutation std by factor in (0, 1]; initial stds are kept.
inline GeneTable narrow_mutation(GeneTable table, double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
        throw std::invalid_argument("narrow_mutation factor must be in (0, 1], got " +
                                    std::to_string(factor));
    for (double& s : table.current_mut_std) s *= factor;
    return table;
}

inline std::size_t gene_index(const GeneTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table.specs[i].name == name) return i;
    throw std::invalid_argument("unknown gene: " + name);
}

} // namespace animat
