#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "animat/config.hpp"
#include "animat/genome.hpp"
#include "animat/io.hpp"
#include "animat/netdyn.hpp"
#include "animat/neurodev.hpp"
#include "animat/world.hpp"

namespace animat {

// Generational loop over per-generation worlds, plus the cross-world assay.
//
// Every random decision is drawn from a stream keyed by
// (master seed, generation, individual, purpose), so results are identical
// for any worker count or scheduling order.

namespace seed_tags {
inline constexpr uint64_t kInit = 0xA0;
inline constexpr uint64_t kGeneration = 0xA1;
inline constexpr uint64_t kWorld = 0xA2;
inline constexpr uint64_t kDev = 0xA3;
inline constexpr uint64_t kHighCal = 0xA4;
inline constexpr uint64_t kRepro = 0xA5;
inline constexpr uint64_t kAssay = 0xA6;
} // namespace seed_tags

inline uint64_t generation_seed(uint64_t master_seed, int generation) {
    return derive_seed(master_seed, seed_tags::kGeneration, static_cast<uint64_t>(generation));
}

struct EvalResult {
    int genome_index = 0;
    double calories = 0.0;
    long captures_high = 0;
    long captures_low = 0;
    uint64_t world_seed = 0;

    long captures_total() const { return captures_high + captures_low; }
};

struct GenerationStats {
    int generation = 0;
    double mean_calories = 0.0;
    double min_calories = 0.0;
    double max_calories = 0.0;
    double top_decile_mean = 0.0;
    std::vector<long> capture_histogram; // bin width kHistogramBinWidth, from 0
    Species high_cal_species = Species::A;
};

inline constexpr long kHistogramBinWidth = 10;

struct RunHistory {
    std::vector<GenerationStats> stats;
    std::vector<std::vector<EvalResult>> results;     // per generation, index order
    std::vector<std::vector<Genome>> populations;     // per generation, index order
    GeneTable final_table;
};

struct EvaluationError : std::runtime_error {
    int genome_index;
    EvaluationError(int index, const std::string& what)
        : std::runtime_error("evaluation of genome " + std::to_string(index) + " failed: " + what),
          genome_index(index) {}
};

struct TraceRecord {
    double time = 0.0;
    double animat_x = 0.0, animat_y = 0.0, heading = 0.0;
    double motor_left = 0.0, motor_right = 0.0;
    double nm_proximity = 0.0, nm_eating = 0.0, nm_hunger = 0.0;
    double calories = 0.0;
    const std::vector<Prey>* prey = nullptr;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// One full lifetime of one genome: development, then the closed sensor ->
/// network -> motor -> world loop with lifetime learning.
inline EvalResult evaluate(const Genome& genome, uint64_t gen_seed, int individual_index,
                           const RunConfig& cfg, const TraceSink* trace = nullptr) {
    const WorldConfig wcfg = cfg.world();

    RngStream dev_rng(derive_seed(gen_seed, seed_tags::kDev, static_cast<uint64_t>(individual_index)));
    const NetworkBlueprint bp = develop(genome, cfg.layout(), dev_rng, cfg.dev_params());
    NetworkState net = make_network_state(bp, genome, /*plastic_from_nonzero=*/true);

    RngStream high_cal_rng(derive_seed(gen_seed, seed_tags::kHighCal));
    const Species high_cal = draw_high_cal_species(high_cal_rng);
    const uint64_t world_seed =
        derive_seed(gen_seed, seed_tags::kWorld, static_cast<uint64_t>(individual_index));
    WorldState world = init_world(world_seed, high_cal, wcfg);

    const double dt = cfg.dt_s;
    const int steps = cfg.lifetime_steps();
    const int homeo_every = cfg.homeostatic_period_steps();
    const double target = cfg.resolved_target_sum();
    const double h = genome[Gene::Homeostatic];

    std::vector<double> sensors(kSensorChannels);
    for (int step = 0; step < steps; ++step) {
        read_sensors(world, sensors);
        adapt_sensors(net, sensors, genome, dt);
        const auto motors = step_network(net, sensors, dt);
        step_animat(world, motors[0], motors[1], dt, wcfg);
        step_prey(world, dt, wcfg);
        world.clock = (step + 1) * dt;
        const double gained = resolve_captures(world, wcfg);
        update_neuromodulators(net.nm,
                               NmEvents{nearest_prey_distance(world), gained > 0.0,
                                        world.clock - world.last_meal_time},
                               dt);
        hebbian_learn(net, cfg.learning_rate, dt);
        if ((step + 1) % homeo_every == 0) homeostatic_scale(net, h, target);
        if (trace && step % cfg.trace_every == 0) {
            TraceRecord rec;
            rec.time = world.clock;
            rec.animat_x = world.animat.x;
            rec.animat_y = world.animat.y;
            rec.heading = world.animat.heading;
            rec.motor_left = motors[0];
            rec.motor_right = motors[1];
            rec.nm_proximity = net.nm.proximity;
            rec.nm_eating = net.nm.eating;
            rec.nm_hunger = net.nm.hunger;
            rec.calories = world.calories_total();
            rec.prey = &world.prey;
            (*trace)(rec);
        }
    }

    EvalResult r;
    r.genome_index = individual_index;
    r.calories = world.calories_total();
    r.captures_high = world.captures_high();
    r.captures_low = world.captures_low();
    r.world_seed = world_seed;
    return r;
}

namespace detail {

/// Runs fn(0..n-1) on `workers` threads; outputs must be written by index.
/// The lowest-index exception wins, so failures are schedule-independent.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        auto body = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (int i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
}

} // namespace detail

/// Evaluates a whole generation; identical output for any worker count.
inline std::vector<EvalResult> evaluate_generation(const std::vector<Genome>& population,
                                                   uint64_t gen_seed, const RunConfig& cfg) {
    std::vector<EvalResult> results(population.size());
    detail::parallel_for(static_cast<int>(population.size()), cfg.workers, [&](int i) {
        try {
            results[i] = evaluate(population[i], gen_seed, i, cfg);
        } catch (const std::exception& e) {
            throw EvaluationError(i, e.what());
        }
    });
    return results;
}

/// Ranking used everywhere: calories descending, ties to the lower index.
inline std::vector<int> rank_by_calories(const std::vector<EvalResult>& results) {
    std::vector<int> order(results.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (results[a].calories != results[b].calories)
            return results[a].calories > results[b].calories;
        return results[a].genome_index < results[b].genome_index;
    });
    return order;
}

inline int elite_count(int population) { return (population + 9) / 10; }

inline GenerationStats compute_stats(int generation, const std::vector<EvalResult>& results,
                                     Species high_cal) {
    GenerationStats s;
    s.generation = generation;
    s.high_cal_species = high_cal;
    double sum = 0.0;
    s.min_calories = results.front().calories;
    s.max_calories = results.front().calories;
    long max_captures = 0;
    for (const auto& r : results) {
        sum += r.calories;
        s.min_calories = std::min(s.min_calories, r.calories);
        s.max_calories = std::max(s.max_calories, r.calories);
        max_captures = std::max(max_captures, r.captures_total());
    }
    s.mean_calories = sum / static_cast<double>(results.size());
    const auto order = rank_by_calories(results);
    const int top = elite_count(static_cast<int>(results.size()));
    double top_sum = 0.0;
    for (int i = 0; i < top; ++i) top_sum += results[order[i]].calories;
    s.top_decile_mean = top_sum / top;
    s.capture_histogram.assign(static_cast<std::size_t>(max_captures / kHistogramBinWidth) + 1, 0);
    for (const auto& r : results) s.capture_histogram[r.captures_total() / kHistogramBinWidth]++;
    return s;
}

/// Truncation selection with 10% elitism: elites are copied bit-identically,
/// the rest are mutated offspring of uniformly sampled elites.
inline std::vector<Genome> select_and_reproduce(const std::vector<Genome>& population,
                                                const std::vector<EvalResult>& results,
                                                const GeneTable& table, RngStream& rng) {
    if (results.empty()) throw std::invalid_argument("select_and_reproduce: empty results");
    if (results.size() != population.size())
        throw std::invalid_argument("select_and_reproduce: results/population size mismatch");
    const auto order = rank_by_calories(results);
    const int p = static_cast<int>(population.size());
    const int elites = elite_count(p);
    std::vector<Genome> next;
    next.reserve(p);
    for (int i = 0; i < elites; ++i) next.push_back(population[order[i]]);
    for (int i = elites; i < p; ++i) {
        const Genome& parent = population[order[rng.below(static_cast<uint64_t>(elites))]];
        next.push_back(mutate(parent, table, rng));
    }
    return next;
}

// ---- run directory files ----------------------------------------------

inline void write_stats_header(std::ostream& out) {
    out << "gen,mean,min,max,top_decile_mean,high_cal_species\n";
}

inline void write_stats_row(std::ostream& out, const GenerationStats& s) {
    out << s.generation << ',' << io::dtos(s.mean_calories) << ',' << io::dtos(s.min_calories)
        << ',' << io::dtos(s.max_calories) << ',' << io::dtos(s.top_decile_mean) << ','
        << species_name(s.high_cal_species) << '\n';
}

inline void write_trace_header(std::ostream& out) {
    out << "time,animat_x,animat_y,heading,motor_left,motor_right,"
           "nm_proximity,nm_eating,nm_hunger,calories";
    for (int i = 0; i < kNumPrey; ++i)
        out << ",prey" << i << "_x,prey" << i << "_y,prey" << i << "_species";
    out << '\n';
}

inline void write_trace_row(std::ostream& out, const TraceRecord& r) {
    out << io::dtos(r.time) << ',' << io::dtos(r.animat_x) << ',' << io::dtos(r.animat_y) << ','
        << io::dtos(r.heading) << ',' << io::dtos(r.motor_left) << ',' << io::dtos(r.motor_right)
        << ',' << io::dtos(r.nm_proximity) << ',' << io::dtos(r.nm_eating) << ','
        << io::dtos(r.nm_hunger) << ',' << io::dtos(r.calories);
    for (const Prey& p : *r.prey)
        out << ',' << io::dtos(p.x) << ',' << io::dtos(p.y) << ',' << species_name(p.species);
    out << '\n';
}

// ---- generational loop --------------------------------------------------

/// Runs generations 0..G inclusive. When out_dir is nonempty, stats.csv,
/// genomes.jsonl and (if enabled) per-generation elite traces are written
/// there, flushed after every generation. Narrowing is applied from the
/// explicit schedule, or (narrow_auto, no schedule) once after the top-decile
/// mean has not improved by 5% for 50 generations.
inline RunHistory run_evolution(const RunConfig& cfg, const std::filesystem::path& out_dir = {},
                                const std::function<void(const GenerationStats&)>& on_generation = {}) {
    validate_config(cfg);
    GeneTable table = default_gene_table();
    const auto schedule = cfg.narrowing_schedule();

    std::ofstream stats_out, genomes_out;
    const bool writing = !out_dir.empty();
    if (writing) {
        std::filesystem::create_directories(out_dir);
        stats_out = io::open_out(out_dir / "stats.csv");
        write_stats_header(stats_out);
        genomes_out = io::open_out(out_dir / "genomes.jsonl");
    }

    RngStream init_rng(derive_seed(cfg.master_seed, seed_tags::kInit));
    std::vector<Genome> population;
    population.reserve(cfg.population);
    for (int i = 0; i < cfg.population; ++i) population.push_back(random_genome(table, init_rng));

    RunHistory history;
    double best_top_decile = -1.0;
    int last_improvement_gen = 0;
    bool auto_narrowed = false;

    for (int gen = 0; gen <= cfg.generations; ++gen) {
        const uint64_t gen_seed = generation_seed(cfg.master_seed, gen);
        const auto results = evaluate_generation(population, gen_seed, cfg);
        RngStream high_cal_rng(derive_seed(gen_seed, seed_tags::kHighCal));
        const Species high_cal = draw_high_cal_species(high_cal_rng);
        const GenerationStats stats = compute_stats(gen, results, high_cal);

        if (writing) {
            write_stats_row(stats_out, stats);
            stats_out.flush();
            for (const Genome& g : population) genomes_out << io::genome_to_json_line(g, table) << '\n';
            genomes_out.flush();
            if (cfg.trace_elite) {
                const int best = rank_by_calories(results).front();
                char name[32];
                std::snprintf(name, sizeof(name), "trace_g%04d_best.csv", gen);
                std::ofstream trace_out = io::open_out(out_dir / name);
                write_trace_header(trace_out);
                TraceSink sink = [&trace_out](const TraceRecord& r) { write_trace_row(trace_out, r); };
                evaluate(population[best], gen_seed, best, cfg, &sink);
            }
        }

        history.stats.push_back(stats);
        history.results.push_back(results);
        history.populations.push_back(population);
        if (on_generation) on_generation(stats);

        if (stats.top_decile_mean > 1.05 * best_top_decile) {
            best_top_decile = stats.top_decile_mean;
            last_improvement_gen = gen;
        }

        if (gen == cfg.generations) break;

        for (const auto& [at_gen, factor] : schedule)
            if (at_gen == gen) table = narrow_mutation(table, factor);
        if (schedule.empty() && cfg.narrow_auto && !auto_narrowed &&
            gen - last_improvement_gen >= 50) {
            table = narrow_mutation(table, 0.5);
            auto_narrowed = true;
        }

        RngStream repro_rng(
            derive_seed(cfg.master_seed, seed_tags::kRepro, static_cast<uint64_t>(gen)));
        population = select_and_reproduce(population, results, table, repro_rng);
    }
    history.final_table = table;
    return history;
}

/// Re-evaluates one genome in n_worlds independently seeded worlds; the
/// calorie assignment is re-randomized per world.
inline std::vector<EvalResult> cross_world_assay(const Genome& genome, int n_worlds,
                                                 uint64_t base_seed, const RunConfig& cfg) {
    if (n_worlds < 1) throw std::invalid_argument("cross_world_assay: n_worlds must be >= 1");
    std::vector<EvalResult> results(static_cast<std::size_t>(n_worlds));
    detail::parallel_for(n_worlds, cfg.workers, [&](int w) {
        const uint64_t gen_seed =
            derive_seed(base_seed, seed_tags::kAssay, static_cast<uint64_t>(w));
        results[w] = evaluate(genome, gen_seed, 0, cfg);
        results[w].genome_index = w; // identifies the world in assay output
    });
    return results;
}

/// Capture-count histogram with fixed-width bins covering [0, max].
inline std::vector<long> capture_histogram(const std::vector<EvalResult>& results,
                                           long bin_width = kHistogramBinWidth) {
    long max_captures = 0;
    for (const auto& r : results) max_captures = std::max(max_captures, r.captures_total());
    std::vector<long> bins(static_cast<std::size_t>(max_captures / bin_width) + 1, 0);
    for (const auto& r : results) bins[r.captures_total() / bin_width]++;
    return bins;
}

} // namespace animat
