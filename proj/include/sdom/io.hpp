#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sdom/lattice.hpp"
#include "sdom/operators.hpp"
#include "sdom/sparse.hpp"
#include "sdom/weights.hpp"

namespace sdom::io {

/// Key/value pairs written as a `meta k=v ...` line after each file header.
using Meta = std::map<std::string, std::string>;

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);
/// Shortest round-trip text for a double ("%.17g").
std::string fmt(double v);
double parse_double(const std::string& s);

void write_space(std::ostream& os, const MetricMeasureSpace& space, const Meta& meta = {});
MetricMeasureSpace read_space(std::istream& is, Meta* meta = nullptr, std::size_t max_points = 512);
/// Text of write_space without meta, used for hashing.
std::string space_text(const MetricMeasureSpace& space);

void write_lattice(std::ostream& os, const Lattice& lattice, const Meta& meta = {});
Lattice read_lattice(std::istream& is, Meta* meta = nullptr);

void write_ftuple(std::ostream& os, const FunctionTuple& f, const Meta& meta = {});
/// Absent (slot, point) pairs are zero.
FunctionTuple read_ftuple(std::istream& is, int m, std::size_t n, Meta* meta = nullptr);

void write_weights(std::ostream& os, const WeightTuple& w, const Meta& meta = {});
/// Every (slot, point) pair must be present.
WeightTuple read_weights(std::istream& is, int m, std::size_t n, Meta* meta = nullptr);

void write_domination(std::ostream& os, const DominationResult& r, const Meta& meta = {});
/// Restores root, alpha, layers, C_dom and depth.
DominationResult read_domination(std::istream& is, Meta* meta = nullptr);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sdom::io
