#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "animat/genome.hpp"

namespace animat::io {

/// Shortest decimal form that round-trips the exact double. Keeps every
/// logged value replayable bit-for-bit.
inline std::string dtos(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("dtos: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

/// One genome as a single JSON line, keys in gene-table order.
inline std::string genome_to_json_line(const Genome& g, const GeneTable& table) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < table.size(); ++i) j[table.specs[i].name] = g.values[i];
    return j.dump();
}

/// Parses a genome record and checks it against the table bounds; errors
/// name the offending gene and bound.
inline Genome genome_from_json(const std::string& text, const GeneTable& table) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("genome record is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("genome record must be a JSON object");
    Genome g;
    g.values.resize(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& name = table.specs[i].name;
        if (!j.contains(name)) throw std::invalid_argument("genome record missing gene " + name);
        if (!j[name].is_number())
            throw std::invalid_argument("gene " + name + " must be a number");
        g.values[i] = j[name].get<double>();
    }
    if (j.size() != table.size())
        throw std::invalid_argument("genome record has unknown keys (expected exactly " +
                                    std::to_string(table.size()) + " genes)");
    validate_genome(g, table);
    return g;
}

/// Reads the first genome record from a file (one JSON object per line).
inline Genome load_genome_file(const std::filesystem::path& path, const GeneTable& table) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open genome file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        return genome_from_json(line, table);
    }
    throw std::invalid_argument("genome file is empty: " + path.string());
}

} // namespace animat::io
