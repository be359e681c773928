// Command-line entry point: `evolve` runs the generational loop, `assay`
// re-evaluates one genome across many worlds, `replay` traces one lifetime.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "animat/animat.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides; // key=value
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key = value config file");
    cmd->add_option("--set", args.overrides, "override a config key (key=value), repeatable");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    cmd->add_option("--workers", args.workers, "evaluation worker count, 0 = all cores");
}

animat::RunConfig resolve_config(const CommonArgs& args) {
    animat::RunConfig cfg;
    if (!args.config_path.empty()) cfg = animat::load_config_file(args.config_path, cfg);
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        animat::apply_config_line(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed_set) cfg.master_seed = args.seed;
    if (!args.out.empty()) cfg.out_dir = args.out;
    if (args.workers >= 0) cfg.workers = args.workers;
    animat::validate_config(cfg);
    return cfg;
}

void write_resolved_config(const animat::RunConfig& cfg) {
    auto out = animat::io::open_out(std::filesystem::path(cfg.out_dir) / "config.txt");
    out << animat::serialize_config(cfg);
}

void print_histogram(std::ostream& os, const std::vector<long>& bins, long bin_width) {
    long max_count = 1;
    for (long c : bins) max_count = std::max(max_count, c);
    os << "# capture-count histogram, bin width " << bin_width << "\n";
    for (std::size_t b = 0; b < bins.size(); ++b) {
        char label[32];
        std::snprintf(label, sizeof(label), "[%3ld,%3ld)", b * bin_width, (b + 1) * bin_width);
        os << label << ' ' << bins[b] << ' ';
        const int bar = static_cast<int>((40 * bins[b]) / max_count);
        for (int i = 0; i < bar; ++i) os << '#';
        os << '\n';
    }
}

int cmd_evolve(const CommonArgs& args) {
    const animat::RunConfig cfg = resolve_config(args);
    write_resolved_config(cfg);
    animat::run_evolution(cfg, cfg.out_dir, [](const animat::GenerationStats& s) {
        std::printf("gen %4d  mean %8.2f  min %8.2f  max %8.2f  top10%% %8.2f  high-cal %s\n",
                    s.generation, s.mean_calories, s.min_calories, s.max_calories,
                    s.top_decile_mean, animat::species_name(s.high_cal_species));
        std::fflush(stdout);
    });
    std::printf("run written to %s\n", cfg.out_dir.c_str());
    return kExitOk;
}

int cmd_assay(const CommonArgs& args, const std::string& genome_path, int n_worlds) {
    const animat::RunConfig cfg = resolve_config(args);
    const animat::GeneTable table = animat::default_gene_table();
    const animat::Genome genome = animat::io::load_genome_file(genome_path, table);
    write_resolved_config(cfg);

    const auto results = animat::cross_world_assay(genome, n_worlds, cfg.master_seed, cfg);
    auto csv = animat::io::open_out(std::filesystem::path(cfg.out_dir) / "assay.csv");
    csv << "world,world_seed,calories,captures,captures_high,captures_low\n";
    for (const auto& r : results)
        csv << r.genome_index << ',' << r.world_seed << ',' << animat::io::dtos(r.calories) << ','
            << r.captures_total() << ',' << r.captures_high << ',' << r.captures_low << '\n';

    const auto bins = animat::capture_histogram(results);
    auto hist = animat::io::open_out(std::filesystem::path(cfg.out_dir) / "histogram.txt");
    print_histogram(hist, bins, animat::kHistogramBinWidth);
    print_histogram(std::cout, bins, animat::kHistogramBinWidth);
    std::printf("assay written to %s\n", cfg.out_dir.c_str());
    return kExitOk;
}

int cmd_replay(const CommonArgs& args, const std::string& genome_path, int world) {
    const animat::RunConfig cfg = resolve_config(args);
    const animat::GeneTable table = animat::default_gene_table();
    const animat::Genome genome = animat::io::load_genome_file(genome_path, table);
    write_resolved_config(cfg);

    auto out = animat::io::open_out(std::filesystem::path(cfg.out_dir) / "trace.csv");
    animat::write_trace_header(out);
    animat::TraceSink sink = [&out](const animat::TraceRecord& r) { animat::write_trace_row(out, r); };
    const uint64_t gen_seed =
        animat::derive_seed(cfg.master_seed, animat::seed_tags::kAssay, static_cast<uint64_t>(world));
    const auto result = animat::evaluate(genome, gen_seed, 0, cfg, &sink);
    std::printf("replay: %ld captures, %s calories; trace written to %s\n",
                result.captures_total(), animat::io::dtos(result.calories).c_str(),
                cfg.out_dir.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"animat: evolving developmental network controllers on a 2D prey-capture task"};
    app.require_subcommand(1);

    CommonArgs evolve_args, assay_args, replay_args;
    std::string assay_genome, replay_genome;
    int assay_worlds = 100;
    int replay_world = 0;

    CLI::App* evolve = app.add_subcommand("evolve", "run the evolutionary loop");
    add_common(evolve, evolve_args);

    CLI::App* assay = app.add_subcommand("assay", "evaluate one genome across many worlds");
    add_common(assay, assay_args);
    assay->add_option("--genome", assay_genome, "genome file (one JSON record)")->required();
    assay->add_option("--worlds", assay_worlds, "number of independent worlds");

    CLI::App* replay = app.add_subcommand("replay", "trace one lifetime for rendering");
    add_common(replay, replay_args);
    replay->add_option("--genome", replay_genome, "genome file (one JSON record)")->required();
    replay->add_option("--world", replay_world, "assay world index to replay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (evolve->parsed()) return cmd_evolve(evolve_args);
        if (assay->parsed()) return cmd_assay(assay_args, assay_genome, assay_worlds);
        if (replay->parsed()) return cmd_replay(replay_args, replay_genome, replay_world);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntimeError;
    }
    return kExitConfigError;
}
